"""Fixed-step RK4 integration of x_i' = x_i (c_i + (S Z(t))_i).

By default the state is carried as u = ln x, so u' = C + S Z. Whenever Z is
constant over a step (constant, piecewise and oscillator signals) that
right-hand side is constant and the step is exact; positivity holds by
construction and nu . u moves by exactly (nu . C) h up to round-off. Coupled
signals (z_j = x_{mapping[j]}) make u' = C + S exp(u[mapping]), integrated
with classical RK4.

Steps never straddle a piecewise switch time, and oscillator switches are
located inside the step where the watched coordinate crosses the threshold;
the step is then restarted from the crossing.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BadLevels, Blowup, ConfigError, Empty, NonPositiveStart
from .model import (
    Constant,
    Coupled,
    Event,
    Oscillator,
    Piecewise,
    ResourceSignal,
    SystemSpec,
    Trajectory,
    validate,
)

CROSSING_TOL = 1e-10
GRID_EPS = 1e-12


@dataclass
class SimConfig:
    x0: tuple
    horizon: float
    dt: float
    log_space: bool = True
    sample_stride: int = 1
    extinction_floor: float = 1e-300
    blowup: float = 1e12

    def __post_init__(self):
        self.x0 = tuple(float(x) for x in self.x0)
        self.horizon = float(self.horizon)
        self.dt = float(self.dt)
        if not (self.dt > 0 and self.horizon > 0 and self.dt <= self.horizon):
            raise ConfigError("need 0 < dt <= horizon")
        if self.sample_stride < 1:
            raise ConfigError("sample_stride must be a positive integer")


def percapita_rates(spec: SystemSpec, Z: Sequence) -> tuple:
    """C + S Z. Exact (Fractions) when every entry of Z is rational."""
    if all(isinstance(z, (int, Fraction)) and not isinstance(z, bool) for z in Z):
        return tuple(
            c + sum((s * Fraction(z) for s, z in zip(row, Z)), Fraction(0))
            for c, row in zip(spec.C, spec.S)
        )
    return tuple(spec.C_float() + spec.S_float() @ np.asarray(Z, dtype=float))


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def make_oscillator(spec: SystemSpec, Zstar, Zstarstar, watch: tuple, m) -> Oscillator:
    """Build the two-level switching signal after checking it can oscillate.

    ``watch = (low, high)``: ``low`` must grow under ``Zstarstar`` and decay
    under ``Zstar``, ``high`` the reverse.
    """
    low, high = watch
    osc = Oscillator(Zstar, Zstarstar, low, high, m)
    validate(spec, osc)
    if osc.Zstar == osc.Zstarstar:
        raise BadLevels("Z* and Z** coincide; nothing to switch between")
    r_star = percapita_rates(spec, osc.Zstar)
    r_2star = percapita_rates(spec, osc.Zstarstar)
    for w in (low, high):
        if r_star[w] == 0 and r_2star[w] == 0:
            raise BadLevels(f"x{w + 1} has zero rate at both levels")
        if _sign(r_star[w]) == _sign(r_2star[w]):
            raise BadLevels(f"x{w + 1} moves the same way at both levels")
    if not (r_2star[low] > 0 and r_star[high] > 0):
        raise BadLevels("watched coordinates do not rise at their own levels")
    others = [i for i in range(spec.d) if i not in (low, high)]
    if any(r_star[i] != 0 or r_2star[i] != 0 for i in others):
        warnings.warn("an unwatched coordinate has a non-zero rate at Z* or Z**", stacklevel=2)
    return osc


def _grid(horizon: float, dt: float) -> list:
    n = max(1, math.ceil(horizon / dt - GRID_EPS))
    return [min((i + 1) * dt, horizon) for i in range(n - 1)] + [horizon]


class _Stepper:
    def __init__(self, spec: SystemSpec, signal: ResourceSignal, log_space: bool):
        self.C = spec.C_float()
        self.S = spec.S_float()
        self.log = log_space
        self.coupled = isinstance(signal, Coupled)
        self.idx = np.array(signal.mapping, dtype=int) if self.coupled else None
        self._spec = spec
        self._rates = {}

    def rates(self, Z: tuple) -> np.ndarray:
        r = self._rates.get(Z)
        if r is None:
            r = np.array([float(q) for q in percapita_rates(self._spec, Z)])
            self._rates[Z] = r
        return r

    def f(self, y, r):
        if self.coupled:
            with np.errstate(over="ignore", invalid="ignore"):
                z = np.exp(y[self.idx]) if self.log else y[self.idx]
                g = self.C + self.S @ z
        else:
            g = r
        return g if self.log else y * g

    def step(self, y, h, r):
        if self.log and not self.coupled:
            return y + h * r
        k1 = self.f(y, r)
        k2 = self.f(y + 0.5 * h * k1, r)
        k3 = self.f(y + 0.5 * h * k2, r)
        k4 = self.f(y + h * k3, r)
        return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def resource(self, y, Z):
        if self.coupled:
            return np.exp(y[self.idx]) if self.log else y[self.idx].copy()
        return np.array([float(z) for z in Z])


def _locate_crossing(stepper, y, t, t_end, r, w, thr, y_end):
    """Time in (t, t_end] where y[w] reaches thr, and the state there."""
    ta, ga = t, y[w] - thr
    tb, gb = t_end, y_end[w] - thr
    tc, yc = tb, y_end
    side = 0
    for _ in range(100):
        tc_new = ta - ga * (tb - ta) / (gb - ga)
        tc_new = min(max(tc_new, ta), tb)
        yc = stepper.step(y, tc_new - t, r)
        gc = yc[w] - thr
        converged = abs(tc_new - tc) <= CROSSING_TOL or gc == 0
        tc = tc_new
        if converged or tb - ta <= CROSSING_TOL:
            break
        # Illinois variant of regula falsi
        if gc < 0:
            ta, ga = tc, gc
            if side == -1:
                gb *= 0.5
            side = -1
        else:
            tb, gb = tc, gc
            if side == 1:
                ga *= 0.5
            side = 1
    return tc, yc


def simulate(spec: SystemSpec, signal: ResourceSignal, cfg: SimConfig) -> Trajectory:
    validate(spec, signal)
    if len(cfg.x0) != spec.d:
        raise ConfigError(f"x0 has {len(cfg.x0)} entries, expected {spec.d}")
    x0 = np.array(cfg.x0, dtype=float)
    if not np.all(np.isfinite(x0)):
        raise NonPositiveStart("x0 must be finite")
    if cfg.log_space and np.any(x0 <= 0):
        raise NonPositiveStart("log-space integration needs a strictly positive start")
    if np.any(x0 < 0):
        raise NonPositiveStart("densities cannot be negative")

    stepper = _Stepper(spec, signal, cfg.log_space)
    log = cfg.log_space
    y = np.log(x0) if log else x0.copy()
    limit = math.log(cfg.blowup) if log else cfg.blowup

    osc = signal if isinstance(signal, Oscillator) else None
    level = "starstar"
    thr = None
    if osc is not None:
        thr = math.log(osc.m) if log else float(osc.m)

    def current_Z(t):
        if isinstance(signal, Constant):
            return signal.Z0
        if isinstance(signal, Piecewise):
            return signal.value_at(t)
        if osc is not None:
            return osc.level_value(level)
        return None

    switch_times = list(signal.switch_times) if isinstance(signal, Piecewise) else []
    ts, ys, zs = [0.0], [y.copy()], [stepper.resource(y, current_Z(0.0))]
    events = []
    beta = float(x0.max())

    def finish():
        Y = np.array(ys)
        if log:
            X = np.maximum(np.exp(Y), cfg.extinction_floor)
            return Trajectory(np.array(ts), X, beta, np.array(zs), Y, events)
        return Trajectory(np.array(ts), Y, beta, np.array(zs), None, events)

    t = 0.0
    grid = _grid(cfg.horizon, cfg.dt)
    sw = 0
    for n, t_end in enumerate(grid):
        while t < t_end:
            while sw < len(switch_times) and switch_times[sw] <= t:
                sw += 1
            seg_end = t_end
            if sw < len(switch_times) and switch_times[sw] < t_end:
                seg_end = switch_times[sw]
            Z = current_Z(t)
            r = None if stepper.coupled else stepper.rates(Z)
            y_new = stepper.step(y, seg_end - t, r)
            if osc is not None:
                w = osc.watch_low if level == "starstar" else osc.watch_high
                if y[w] < thr <= y_new[w]:
                    tc, yc = _locate_crossing(stepper, y, t, seg_end, r, w, thr, y_new)
                    level = "star" if level == "starstar" else "starstar"
                    events.append(Event(tc, level))
                    y, t = yc, tc
                    beta = max(beta, float(np.exp(y).max() if log else y.max()))
                    if tc > ts[-1]:
                        ts.append(tc)
                        ys.append(y.copy())
                        zs.append(stepper.resource(y, current_Z(tc)))
                    continue
            y, t = y_new, seg_end
            top = float(y.max())
            if not np.all(np.isfinite(y)) or top > limit:
                ts.append(t)
                ys.append(y.copy())
                zs.append(stepper.resource(y, current_Z(t)))
                beta = max(beta, math.exp(min(top, 709.0)) if log else top)
                raise Blowup(f"coordinate exceeded {cfg.blowup:g} at t={t:.6g}", time=t, trajectory=finish())
            beta = max(beta, math.exp(top) if log else top)
        t = t_end
        if ((n + 1) % cfg.sample_stride == 0 or n + 1 == len(grid)) and t > ts[-1]:
            ts.append(t)
            ys.append(y.copy())
            zs.append(stepper.resource(y, current_Z(t)))
    return finish()


def trajectory_bound(traj: Trajectory) -> float:
    if len(traj) == 0:
        raise Empty("trajectory has no samples")
    return float(np.max(traj.X))


# -- CSV ---------------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.16e}"


def write_trajectory_csv(traj: Trajectory, path, include_z: bool = True) -> None:
    d = traj.d
    header = ["t"] + [f"x{i + 1}" for i in range(d)]
    with_z = include_z and traj.Z is not None and traj.Z.size > 0
    if with_z:
        header += [f"z{j + 1}" for j in range(traj.Z.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for n in range(len(traj)):
            row = [_fmt(traj.t[n])] + [_fmt(v) for v in traj.X[n]]
            if with_z:
                row += [_fmt(v) for v in traj.Z[n]]
            w.writerow(row)


def read_trajectory_csv(path) -> Trajectory:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise Empty(f"{path} is empty")
    header = rows[0]
    if not header or header[0] != "t":
        raise ConfigError(f"{path}: first column must be 't'")
    xcols = [i for i, h in enumerate(header) if h.startswith("x")]
    zcols = [i for i, h in enumerate(header) if h.startswith("z")]
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    if data.size == 0:
        raise Empty(f"{path} has no samples")
    X = data[:, xcols]
    Z = data[:, zcols] if zcols else None
    t = data[:, 0]
    if np.any(np.diff(t) <= 0):
        raise ConfigError(f"{path}: sample times must strictly increase")
    return Trajectory(t, X, float(X.max()), Z)


def write_events_csv(events: Sequence[Event], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t_switch", "level"])
        for e in events:
            w.writerow([_fmt(e.t_switch), e.level])
