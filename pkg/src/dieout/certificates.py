"""Die-out Lyapunov functions and exponential extinction certificates.

For an oriented null vector ``nu`` (``nu S = 0``, ``nu . C < 0``) the
function ``Lambda(X) = nu . ln X`` decreases at the constant rate
``|nu . C|``. On a solution bounded by ``beta`` this forces

    min_{i : nu_i > 0} x_i(t) <= exp(a - b t)

with ``a, b`` depending only on ``nu / nu_plus``. Taking the worst ``a`` and
``b`` over the team gives one envelope under which at least ``k`` species
sit at every time.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    AllBalanced,
    BetaMismatch,
    NonPositiveCoordinate,
    NoPositiveEntry,
    WrongOrientation,
    X0OutOfRange,
)
from .model import State, Trajectory, format_rational
from .nullspace import NullTeam, NullVector, orient

ENVELOPE_SLACK = 1e-9
LOG_SLACK = math.log1p(ENVELOPE_SLACK)


def _coords(X) -> tuple:
    return tuple(X.X) if isinstance(X, State) else tuple(X)


def _entries(nu) -> tuple:
    return nu.entries if isinstance(nu, NullVector) else tuple(nu)


def lambda_value(nu, X) -> float:
    """sum_i nu_i ln x_i; coordinates outside the support may be zero."""
    total = 0.0
    for v, x in zip(_entries(nu), _coords(X)):
        if v == 0:
            continue
        if x <= 0:
            raise NonPositiveCoordinate(f"ln of non-positive coordinate {x}")
        total += float(v) * math.log(x)
    return total


def lambda_rate(nu, C: Sequence) -> Fraction:
    """Exact nu . C, the time derivative of Lambda along any solution."""
    return sum((Fraction(v) * Fraction(c) for v, c in zip(_entries(nu), C)), Fraction(0))


@dataclass(frozen=True)
class DieOutCertificate:
    nu: NullVector
    nu_plus: Fraction
    rate: Fraction
    a: float
    b: float
    positive_support: tuple

    @property
    def b_exact(self) -> Fraction:
        return abs(self.rate) / self.nu_plus

    def log_envelope(self, t):
        return self.a - self.b * np.asarray(t, dtype=float)


def certificate(nu: NullVector, C: Sequence, beta: float, X0) -> DieOutCertificate:
    entries = _entries(nu)
    if not isinstance(nu, NullVector):
        nu = NullVector.from_entries(entries)
    rate = lambda_rate(entries, C)
    if rate >= 0:
        raise WrongOrientation(f"nu . C = {rate} is not negative")
    pos = tuple(i for i, v in enumerate(entries) if v > 0)
    nu_plus = sum((Fraction(entries[i]) for i in pos), Fraction(0))
    if nu_plus == 0:
        raise NoPositiveEntry("oriented vector has no positive entry")
    x0 = _coords(X0)
    if beta <= 0 or any(not 0 < x <= beta for x in x0):
        raise X0OutOfRange(f"X0 must lie in (0, beta] with beta = {beta}")
    w = [Fraction(v) / nu_plus for v in entries]
    log_beta = math.log(beta)
    neg_mass = float(sum((wi for wi in w if wi < 0), Fraction(0)))
    a = -log_beta * neg_mass + math.fsum(float(wi) * math.log(x) for wi, x in zip(w, x0) if wi != 0)
    b = float(abs(rate) / nu_plus)
    return DieOutCertificate(nu, nu_plus, rate, a, b, pos)


@dataclass
class TeamCertificate:
    certificates: list
    a_star: float
    b_star: float
    k: int
    balanced: list
    beta: float
    X0: tuple
    beta_source: str = "user"

    @property
    def vacuous(self) -> bool:
        return self.k == 0


def team_certificate(t: NullTeam, C: Sequence, beta: float, X0, beta_source: str = "user") -> TeamCertificate:
    x0 = _coords(X0)
    if t.k == 0:
        return TeamCertificate([], float("-inf"), float("inf"), 0, [], beta, x0, beta_source)
    certs, balanced = [], []
    for m in t.members:
        if m.dot(C) == 0:
            balanced.append(m)
            continue
        certs.append(certificate(orient(m, C), C, beta, x0))
    if not certs:
        raise AllBalanced("every team member has nu . C = 0")
    a_star = max(c.a for c in certs)
    b_star = min(c.b for c in certs)
    return TeamCertificate(certs, a_star, b_star, t.k, balanced, beta, x0, beta_source)


@dataclass
class MustDie:
    definite: list
    disjunctive: list
    balanced: list
    k: int

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "definite": [i + 1 for i in self.definite],
            "claims": [
                {"coordinates": [i + 1 for i in group], "claim": _claim_text(group)}
                for group in self.disjunctive
            ],
            "balanced": [[int(v) for v in m.entries] for m in self.balanced],
        }


def _claim_text(group) -> str:
    names = [f"x{i + 1}" for i in group]
    if len(names) == 1:
        return f"{names[0]} dies out"
    return " or ".join(names) + " dies out"


def must_die_report(t: NullTeam, C: Sequence) -> MustDie:
    """Extinction claims readable off the oriented team.

    Each oriented member says one of its positive coordinates dies; a
    singleton positive support makes that a definite claim.
    """
    groups, definite, balanced = [], [], []
    for m in t.members:
        if m.dot(C) == 0:
            balanced.append(m)
            continue
        o = orient(m, C)
        pos = tuple(i for i, v in enumerate(o.entries) if v > 0)
        if pos not in groups:
            groups.append(pos)
        if len(pos) == 1 and pos[0] not in definite:
            definite.append(pos[0])
    return MustDie(sorted(definite), groups, balanced, t.k)


@dataclass
class DieOutReport:
    census: list
    min_census: int
    passed: bool
    first_failure: float | None = None
    envelope_violations: list = field(default_factory=list)


def verify_dieout(traj: Trajectory, tc: TeamCertificate) -> DieOutReport:
    """Count, at every sample, the coordinates under exp(a* - b* t)."""
    if traj.beta > tc.beta:
        raise BetaMismatch(f"trajectory bound {traj.beta} exceeds certificate beta {tc.beta}")
    logs = traj.log_states()
    if tc.vacuous:
        census = [set() for _ in traj.t]
        return DieOutReport(census, 0, True)
    level = tc.a_star - tc.b_star * traj.t + LOG_SLACK
    under = logs <= level[:, None]
    census = [set(np.flatnonzero(row).tolist()) for row in under]
    counts = under.sum(axis=1)
    min_census = int(counts.min()) if len(counts) else 0
    failing = np.flatnonzero(counts < tc.k)
    first = float(traj.t[failing[0]]) if len(failing) else None
    violations = envelope_violations(traj, tc.certificates)
    return DieOutReport(census, min_census, min_census >= tc.k, first, violations)


def envelope_violations(traj: Trajectory, certs: Sequence[DieOutCertificate]) -> list:
    """(member index, sample time) pairs where a per-member bound fails."""
    logs = traj.log_states()
    out = []
    for n, c in enumerate(certs):
        lowest = logs[:, list(c.positive_support)].min(axis=1)
        bad = np.flatnonzero(lowest > c.log_envelope(traj.t) + LOG_SLACK)
        out.extend((n, float(traj.t[i])) for i in bad)
    return out


def certificate_report(tc: TeamCertificate, C: Sequence, must: MustDie | None = None,
                       report: DieOutReport | None = None) -> dict:
    out = {
        "k": tc.k,
        "beta": tc.beta,
        "beta_source": tc.beta_source,
        "x0": list(tc.X0),
        "a_star": None if tc.vacuous else tc.a_star,
        "b_star": None if tc.vacuous else tc.b_star,
        "members": [
            {
                "oriented_entries": [int(v) for v in c.nu.entries],
                "nu_dot_C": format_rational(c.rate),
                "nu_plus": format_rational(c.nu_plus),
                "a": c.a,
                "b": c.b,
                "b_exact": format_rational(c.b_exact),
                "positive_support": [i + 1 for i in c.positive_support],
            }
            for c in tc.certificates
        ],
        "balanced": [[int(v) for v in m.entries] for m in tc.balanced],
        "min_census": None if report is None else report.min_census,
        "pass": None if report is None else report.passed,
    }
    if report is not None:
        out["first_failure_time"] = report.first_failure
        out["envelope_violations"] = len(report.envelope_violations)
    if must is not None:
        out["must_die"] = must.as_dict()
    return out
