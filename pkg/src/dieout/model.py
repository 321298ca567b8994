"""Domain types: systems, resource signals, states and trajectories.

A system is the pair (C, S) of the non-autonomous model

    x_i' = x_i * (c_i + sum_j s_ij z_j(t)),    i = 1..d,  j = 1..dprime

with exact rational coefficients. The classical Lotka-Volterra system is the
special case ``dprime == d`` with the coupled signal ``z_j = x_j``.

Indices are 0-based throughout the Python API. Configs, reports and CSV
headers use 1-based labels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import numpy as np

from .errors import DimensionMismatch, NonFinite

Number = Union[int, float, Fraction]


# -- rationals ---------------------------------------------------------------

def to_rational(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts ints, Fractions, strings such as ``"-3/5"``, ``"0.0023"`` or
    ``"1e-3"``, and finite floats (converted through their shortest repr, so
    ``0.1`` becomes ``1/10`` rather than the binary expansion).
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise NonFinite(f"non-finite entry {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        text = value.strip()
        if text.lower().lstrip("+-") in ("nan", "inf", "infinity"):
            raise NonFinite(f"non-finite entry {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot read {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    """Canonical string: ``p`` or ``p/q`` with q > 0 and gcd(|p|, q) = 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- system ------------------------------------------------------------------

@dataclass(frozen=True)
class SystemSpec:
    """Growth vector ``C`` (length d) and interaction matrix ``S`` (d x dprime)."""

    d: int
    dprime: int
    C: tuple
    S: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "C", tuple(to_rational(c) for c in self.C))
        object.__setattr__(self, "S", tuple(tuple(to_rational(s) for s in row) for row in self.S))

    @classmethod
    def from_lists(cls, C, S, name=""):
        """Build and validate a system, inferring d and dprime from the data."""
        S = [list(row) for row in S]
        dprime = len(S[0]) if S else 0
        spec = cls(d=len(C), dprime=dprime, C=C, S=S, name=name)
        validate_spec(spec)
        return spec

    def C_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.C])

    def S_float(self) -> np.ndarray:
        return np.array([[float(s) for s in row] for row in self.S]).reshape(self.d, self.dprime)

    def with_C(self, C) -> "SystemSpec":
        return SystemSpec(self.d, self.dprime, tuple(C), self.S, self.name)

    @property
    def is_square(self) -> bool:
        return self.d == self.dprime


# -- resource signals --------------------------------------------------------

@dataclass(frozen=True)
class Coupled:
    """z_j(t) = x_{mapping[j]}(t); identity mapping gives the Lotka-Volterra form."""

    mapping: tuple

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(i) for i in self.mapping))


@dataclass(frozen=True)
class Constant:
    Z0: tuple

    def __post_init__(self):
        object.__setattr__(self, "Z0", tuple(to_rational(z) for z in self.Z0))


@dataclass(frozen=True)
class Piecewise:
    """Piecewise-constant Z: ``schedule[k] = (t_k, Z_k)`` holds on [t_k, t_{k+1}).

    Before the first switch time the first value applies.
    """

    schedule: tuple

    def __post_init__(self):
        object.__setattr__(
            self,
            "schedule",
            tuple((float(t), tuple(to_rational(z) for z in Z)) for t, Z in self.schedule),
        )

    @property
    def switch_times(self) -> tuple:
        return tuple(t for t, _ in self.schedule)

    def value_at(self, t: float) -> tuple:
        current = self.schedule[0][1]
        for ts, Z in self.schedule:
            if ts <= t:
                current = Z
            else:
                break
        return current


@dataclass(frozen=True)
class Oscillator:
    """Switch between two constant levels on threshold crossings.

    The run starts at ``Zstarstar``, under which ``watch_low`` grows. When
    ``watch_low`` rises to ``m`` the signal jumps to ``Zstar``, under which
    ``watch_high`` grows; when ``watch_high`` rises to ``m`` it jumps back.
    """

    Zstar: tuple
    Zstarstar: tuple
    watch_low: int
    watch_high: int
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "Zstar", tuple(to_rational(z) for z in self.Zstar))
        object.__setattr__(self, "Zstarstar", tuple(to_rational(z) for z in self.Zstarstar))
        object.__setattr__(self, "watch_low", int(self.watch_low))
        object.__setattr__(self, "watch_high", int(self.watch_high))
        object.__setattr__(self, "m", to_rational(self.m))

    def level_value(self, level: str) -> tuple:
        return self.Zstar if level == "star" else self.Zstarstar


ResourceSignal = Union[Coupled, Constant, Piecewise, Oscillator]


def resource_at(signal: ResourceSignal, t: float, X: Sequence, level: str = "starstar") -> tuple:
    """Value of Z at time ``t`` and state ``X``.

    Coupled signals return the selected coordinates of ``X`` unchanged.
    ``level`` only matters for oscillators.
    """
    if isinstance(signal, Coupled):
        return tuple(X[j] for j in signal.mapping)
    if isinstance(signal, Constant):
        return signal.Z0
    if isinstance(signal, Piecewise):
        return signal.value_at(t)
    if isinstance(signal, Oscillator):
        return signal.level_value(level)
    raise TypeError(f"unknown signal {signal!r}")


# -- states and trajectories -------------------------------------------------

@dataclass(frozen=True)
class State:
    t: float
    X: tuple

    def __post_init__(self):
        object.__setattr__(self, "X", tuple(self.X))


@dataclass
class Event:
    t_switch: float
    level: str


@dataclass
class Trajectory:
    """Sampled solution.

    ``X`` has shape (n, d). ``logX`` is kept when the run was integrated in
    log coordinates, so downstream log-domain checks never see an underflowed
    zero. ``Z`` (n, dprime) holds the resource signal at each sample.
    """

    t: np.ndarray
    X: np.ndarray
    beta: float
    Z: np.ndarray | None = None
    logX: np.ndarray | None = None
    events: list = field(default_factory=list)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.X = np.asarray(self.X, dtype=float)
        if self.X.ndim == 1:
            self.X = self.X.reshape(-1, 1)

    def __len__(self):
        return len(self.t)

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def samples(self) -> list:
        return [State(float(t), tuple(float(v) for v in x)) for t, x in zip(self.t, self.X)]

    def log_states(self) -> np.ndarray:
        if self.logX is not None:
            return self.logX
        with np.errstate(divide="ignore"):
            return np.log(self.X)


# -- validation --------------------------------------------------------------

def validate_spec(spec: SystemSpec) -> SystemSpec:
    if spec.d < 1:
        raise DimensionMismatch("d must be positive")
    if spec.dprime < 0:
        raise DimensionMismatch("dprime must be non-negative")
    if len(spec.C) != spec.d:
        raise DimensionMismatch(f"C has {len(spec.C)} entries, expected d={spec.d}")
    if len(spec.S) != spec.d:
        raise DimensionMismatch(f"S has {len(spec.S)} rows, expected d={spec.d}")
    for i, row in enumerate(spec.S):
        if len(row) != spec.dprime:
            raise DimensionMismatch(f"row {i + 1} of S has {len(row)} entries, expected {spec.dprime}")
    return spec


def validate(spec: SystemSpec, signal: ResourceSignal):
    """Check every type invariant; return the pair unchanged."""
    validate_spec(spec)
    if isinstance(signal, Coupled):
        if len(signal.mapping) != spec.dprime:
            raise DimensionMismatch("coupled mapping must have dprime entries")
        if any(not 0 <= j < spec.d for j in signal.mapping):
            raise DimensionMismatch("coupled mapping index out of range")
    elif isinstance(signal, Constant):
        if len(signal.Z0) != spec.dprime:
            raise DimensionMismatch("constant Z must have dprime entries")
    elif isinstance(signal, Piecewise):
        if not signal.schedule:
            raise DimensionMismatch("piecewise schedule is empty")
        times = signal.switch_times
        if any(not math.isfinite(t) for t in times):
            raise NonFinite("non-finite switch time")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DimensionMismatch("piecewise switch times must strictly increase")
        if any(len(Z) != spec.dprime for _, Z in signal.schedule):
            raise DimensionMismatch("piecewise Z values must have dprime entries")
    elif isinstance(signal, Oscillator):
        if len(signal.Zstar) != spec.dprime or len(signal.Zstarstar) != spec.dprime:
            raise DimensionMismatch("oscillator levels must have dprime entries")
        if signal.m <= 0:
            raise DimensionMismatch("oscillator threshold m must be positive")
        if signal.watch_low == signal.watch_high:
            raise DimensionMismatch("oscillator watch indices must differ")
        for w in (signal.watch_low, signal.watch_high):
            if not 0 <= w < spec.d:
                raise DimensionMismatch("oscillator watch index out of range")
    else:
        raise TypeError(f"unknown signal {signal!r}")
    return spec, signal
