"""JSON run configurations.

A config bundles a system, a resource signal and simulation settings::

    {
      "name": "...", "d": 3, "dprime": 2,
      "C": ["-1", "1", "-1"],
      "S": [["1", "2"], ["1", "1"], ["3", "1"]],
      "signal": {"type": "constant", "Z": ["0", "-1"]},
      "x0": [1, 1, 1], "horizon": 10, "dt": 0.01
    }

Coefficients are rational strings (ints and decimal strings are accepted
too). Indices in files are 1-based. Optional keys: ``beta``,
``sample_stride``, ``log_space`` and ``reduction`` (``{"focal": [...],
"resources": [...]}``, used by ``team --reduce``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .integrator import SimConfig
from .model import (
    Constant,
    Coupled,
    Oscillator,
    Piecewise,
    ResourceSignal,
    SystemSpec,
    format_rational,
    to_rational,
    validate,
)


@dataclass(frozen=True)
class RunConfig:
    spec: SystemSpec
    signal: ResourceSignal
    x0: tuple
    horizon: float
    dt: float
    beta: float | None = None
    sample_stride: int = 1
    log_space: bool = True
    reduction: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.spec.name

    def sim_config(self) -> SimConfig:
        return SimConfig(self.x0, self.horizon, self.dt, log_space=self.log_space,
                         sample_stride=self.sample_stride)


def _signal_from(obj: dict, spec: SystemSpec) -> ResourceSignal:
    kind = obj.get("type")
    if kind == "coupled":
        mapping = obj.get("mapping", list(range(1, spec.dprime + 1)))
        return Coupled(tuple(int(j) - 1 for j in mapping))
    if kind == "constant":
        return Constant(tuple(obj["Z"]))
    if kind == "piecewise":
        return Piecewise(tuple((float(t), tuple(Z)) for t, Z in obj["schedule"]))
    if kind == "oscillator":
        return Oscillator(tuple(obj["Zstar"]), tuple(obj["Zstarstar"]),
                          int(obj["watch_low"]) - 1, int(obj["watch_high"]) - 1, obj["m"])
    raise ConfigError(f"unknown signal type {kind!r}")


def _signal_to(signal: ResourceSignal) -> dict:
    rs = lambda Z: [format_rational(z) for z in Z]  # noqa: E731
    if isinstance(signal, Coupled):
        return {"type": "coupled", "mapping": [j + 1 for j in signal.mapping]}
    if isinstance(signal, Constant):
        return {"type": "constant", "Z": rs(signal.Z0)}
    if isinstance(signal, Piecewise):
        return {"type": "piecewise", "schedule": [[t, rs(Z)] for t, Z in signal.schedule]}
    return {
        "type": "oscillator",
        "Zstar": rs(signal.Zstar),
        "Zstarstar": rs(signal.Zstarstar),
        "watch_low": signal.watch_low + 1,
        "watch_high": signal.watch_high + 1,
        "m": format_rational(signal.m),
    }


KNOWN_KEYS = {"name", "d", "dprime", "C", "S", "signal", "x0", "horizon", "dt",
              "beta", "sample_stride", "log_space", "reduction"}


def from_dict(obj: dict) -> RunConfig:
    try:
        C = [to_rational(c) for c in obj["C"]]
        S = [[to_rational(s) for s in row] for row in obj["S"]]
        d = int(obj.get("d", len(C)))
        dprime = int(obj.get("dprime", len(S[0]) if S else 0))
        spec = SystemSpec(d, dprime, tuple(C), tuple(tuple(r) for r in S), obj.get("name", ""))
        signal = _signal_from(obj.get("signal", {"type": "coupled"}), spec)
        validate(spec, signal)
        x0 = tuple(float(to_rational(x)) for x in obj["x0"])
        if len(x0) != d:
            raise ConfigError(f"x0 has {len(x0)} entries, expected {d}")
        beta = obj.get("beta")
        reduction = obj.get("reduction")
        if reduction is not None:
            reduction = {"focal": [int(i) for i in reduction["focal"]],
                         "resources": [int(j) for j in reduction["resources"]]}
        return RunConfig(
            spec=spec,
            signal=signal,
            x0=x0,
            horizon=float(obj["horizon"]),
            dt=float(obj["dt"]),
            beta=None if beta is None else float(to_rational(beta)),
            sample_stride=int(obj.get("sample_stride", 1)),
            log_space=bool(obj.get("log_space", True)),
            reduction=reduction,
            extra={k: v for k, v in obj.items() if k not in KNOWN_KEYS},
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad config: {exc!r}") from exc


def to_dict(cfg: RunConfig) -> dict:
    spec = cfg.spec
    out = {
        "name": spec.name,
        "d": spec.d,
        "dprime": spec.dprime,
        "C": [format_rational(c) for c in spec.C],
        "S": [[format_rational(s) for s in row] for row in spec.S],
        "signal": _signal_to(cfg.signal),
        "x0": list(cfg.x0),
        "horizon": cfg.horizon,
        "dt": cfg.dt,
    }
    if cfg.beta is not None:
        out["beta"] = cfg.beta
    if cfg.sample_stride != 1:
        out["sample_stride"] = cfg.sample_stride
    if not cfg.log_space:
        out["log_space"] = False
    if cfg.reduction is not None:
        out["reduction"] = cfg.reduction
    out.update(cfg.extra)
    return out


def bundled_names() -> list:
    folder = resources.files(__package__) / "configs"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def bundled_path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    return Path(str(resources.files(__package__) / "configs" / f"{stem}.json"))


def load(source) -> RunConfig:
    """Load a config from a file path or the name of a bundled example."""
    path = Path(source)
    if not path.exists():
        candidate = bundled_path(str(source))
        if not candidate.exists():
            raise ConfigError(f"no config file or bundled example named {source!r}")
        path = candidate
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return from_dict(obj)


def dump(cfg: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(to_dict(cfg), indent=2) + "\n")


def apply_c_override(cfg: RunConfig, assignment: str) -> RunConfig:
    """Apply ``"i=value"`` (1-based i) to the growth vector."""
    try:
        key, value = assignment.split("=", 1)
        i = int(key) - 1
        q = to_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad --set-c {assignment!r}; expected i=value") from exc
    if not 0 <= i < cfg.spec.d:
        raise ConfigError(f"--set-c index {i + 1} out of range 1..{cfg.spec.d}")
    C = list(cfg.spec.C)
    C[i] = q
    return replace(cfg, spec=cfg.spec.with_C(C))


def with_signal(cfg: RunConfig, signal: ResourceSignal) -> RunConfig:
    validate(cfg.spec, signal)
    return replace(cfg, signal=signal)


__all__ = [
    "RunConfig", "from_dict", "to_dict", "load", "dump", "bundled_names",
    "bundled_path", "apply_c_override", "with_signal",
]
