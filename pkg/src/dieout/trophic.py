"""Trophic sign conditions and an explicit trapping region.

For a square system x' = x * (C + S x) the linear function
V(X) = sum_n eps^n x_n satisfies V' <= A - B V on the non-negative orthant
once eps is small enough, so {V <= lam} with lam > A/B is a bounded
globally attracting trapping region.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BadSigns, NotSquare, NotTrophic
from .model import State, SystemSpec, format_rational


@dataclass(frozen=True)
class TrophicReport:
    passed: bool
    t1_violations: tuple
    t2_violations: tuple

    def as_dict(self) -> dict:
        return {
            "pass": self.passed,
            "t1_violations": [n + 1 for n in self.t1_violations],
            "t2_violations": [[n + 1, m + 1] for n, m in self.t2_violations],
        }


def check_trophic(spec: SystemSpec) -> TrophicReport:
    """(T1): c_n >= 0 implies s_nn < 0.
    (T2): s_nm > 0 implies n > m and s_mn < 0.
    """
    if not spec.is_square:
        raise NotSquare(f"trophic check needs a square system, got {spec.d}x{spec.dprime}")
    C, S, d = spec.C, spec.S, spec.d
    t1 = tuple(n for n in range(d) if C[n] >= 0 and S[n][n] >= 0)
    t2 = tuple(
        (n, m)
        for n in range(d)
        for m in range(d)
        if S[n][m] > 0 and (n <= m or S[m][n] >= 0)
    )
    return TrophicReport(not t1 and not t2, t1, t2)


def quadratic_cap(c, s) -> Fraction:
    """Smallest a with c x + s x^2 <= a - x for every real x (c >= 0, s < 0)."""
    c, s = Fraction(c), Fraction(s)
    if c < 0 or s >= 0:
        raise BadSigns(f"need c >= 0 and s < 0, got c={c}, s={s}")
    return -(c + 1) ** 2 / (4 * s)


@dataclass(frozen=True)
class TrappingRegion:
    epsilon: Fraction
    E: tuple
    M: tuple
    a_n: dict
    A: Fraction
    B: Fraction
    lam: Fraction

    def V(self, X):
        x = X.X if isinstance(X, State) else X
        return sum(e * xi for e, xi in zip(self.E, x))

    def coordinate_bound(self, V0=0) -> Fraction:
        """Bound on every coordinate of a solution starting at V(X0) = V0."""
        level = max(self.lam, Fraction(V0))
        return level / self.E[-1]

    def as_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "M": [n + 1 for n in self.M],
            "a_n": {str(n + 1): format_rational(a) for n, a in self.a_n.items()},
            "A": format_rational(self.A),
            "B": format_rational(self.B),
            "lambda": format_rational(self.lam),
        }


def _eps_feasible(spec: SystemSpec, eps: Fraction) -> bool:
    S = spec.S
    for n in range(spec.d):
        for m in range(n):
            if S[n][m] > 0 and eps ** (n - m) * S[n][m] + S[m][n] > 0:
                return False
    return True


def trapping_region(spec: SystemSpec, lambda_factor=2) -> TrappingRegion:
    report = check_trophic(spec)
    if not report.passed:
        raise NotTrophic(f"system is not trophic: {report.as_dict()}")
    eps = Fraction(1, 2)
    while not _eps_feasible(spec, eps):
        eps /= 2
    d = spec.d
    E = tuple(eps ** (n + 1) for n in range(d))
    M = tuple(n for n in range(d) if spec.C[n] >= 0)
    a_n = {n: quadratic_cap(spec.C[n], spec.S[n][n]) for n in M}
    A = sum((E[n] * a_n[n] for n in M), Fraction(0))
    outside = [abs(spec.C[n]) for n in range(d) if n not in M]
    B = min([Fraction(1)] + outside)
    lam = Fraction(lambda_factor) * A / B if A > 0 else Fraction(1)
    return TrappingRegion(eps, E, M, a_n, A, B, lam)


def v_dot(spec: SystemSpec, region: TrappingRegion, X) -> object:
    """E . (X * (C + S X)); exact when X holds Fractions or ints."""
    x = X.X if isinstance(X, State) else tuple(X)
    total = 0
    for n in range(spec.d):
        if x[n] == 0:
            continue
        growth = spec.C[n] + sum(spec.S[n][m] * x[m] for m in range(spec.d) if x[m] != 0)
        total += region.E[n] * x[n] * growth
    return total


def v_dot_float(spec: SystemSpec, region: TrappingRegion, X):
    """Vectorised float evaluation; ``X`` has shape (n, d). Returns (vdot, scale)."""
    X = np.asarray(X, dtype=float)
    C = spec.C_float()
    S = spec.S_float()
    E = np.array([float(e) for e in region.E])
    growth = C + X @ S.T
    vdot = (E * X * growth).sum(axis=1)
    scale = (E * X * (np.abs(C) + X @ np.abs(S).T)).sum(axis=1)
    return vdot, scale
