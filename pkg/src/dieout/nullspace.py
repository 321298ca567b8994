"""Left null vectors of S and the team of minimal-support null vectors.

A row vector ``nu`` with ``nu S = 0`` makes ``nu . ln X`` grow at the
constant rate ``nu . C`` along every solution. Minimal-support null vectors
(circuits of the row matroid of S) are the most informative of these; there
is one line of them per support set, so each is stored once in canonical
form: coprime integers, first non-zero entry positive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from . import linalg
from .errors import Balanced, NotClosed, NotEnoughKernel, TooLarge, ZeroVector
from .model import SystemSpec, format_rational

DEFAULT_SUBSET_CAP = 10**6


@dataclass(frozen=True)
class NullVector:
    entries: tuple
    support: tuple
    canonical: bool

    @classmethod
    def from_entries(cls, entries: Sequence) -> "NullVector":
        entries = tuple(entries)
        support = tuple(i for i, v in enumerate(entries) if v != 0)
        canonical = False
        if support and all(Fraction(v).denominator == 1 for v in entries):
            try:
                canonical = linalg.primitive(entries) == tuple(int(v) for v in entries)
            except ValueError:
                canonical = False
        return cls(entries, support, canonical)

    @classmethod
    def canonical_of(cls, entries: Sequence) -> "NullVector":
        return cls.from_entries(linalg.primitive(entries))

    def __neg__(self) -> "NullVector":
        return NullVector.from_entries(tuple(-v for v in self.entries))

    def __len__(self):
        return len(self.entries)

    @property
    def labels(self) -> tuple:
        """Support as 1-based coordinate labels."""
        return tuple(i + 1 for i in self.support)

    def dot(self, C: Sequence) -> Fraction:
        return linalg.dot(self.entries, C)


@dataclass(frozen=True)
class NullTeam:
    k: int
    basis: tuple
    members: tuple
    kernel_coordinates: tuple
    rank: int
    d: int

    @property
    def generic_count(self) -> int:
        """Team size a generic matrix would have on the same kernel coordinates."""
        if self.k == 0:
            return 0
        n = len(self.kernel_coordinates)
        return comb(n, n - self.k + 1)

    def by_support(self) -> dict:
        return {m.support: m for m in self.members}


def _left_nullity(spec: SystemSpec, rows: Sequence[int]) -> list:
    return linalg.left_null_space(spec.S, spec.d, spec.dprime, rows)


def spec_rank(spec: SystemSpec) -> int:
    if spec.dprime == 0:
        return 0
    return linalg.rank(spec.S)


def kernel_basis(spec: SystemSpec) -> list:
    """k = d - rank(S) independent primitive vectors with ``nu S = 0``."""
    return [NullVector.from_entries(v) for v in _left_nullity(spec, range(spec.d))]


def is_minimal_support(nu: NullVector | Sequence, spec: SystemSpec) -> bool:
    """True iff the rows of S on supp(nu) have a one-dimensional left kernel."""
    entries = nu.entries if isinstance(nu, NullVector) else tuple(nu)
    support = [i for i, v in enumerate(entries) if v != 0]
    if not support:
        raise ZeroVector("the zero vector has no minimal support")
    return len(_left_nullity(spec, support)) == 1


def _circuit_on(spec: SystemSpec, sigma: Sequence[int]) -> NullVector | None:
    """The member supported exactly on ``sigma``, if there is one.

    ``sigma`` carries a member iff its rows have a one-dimensional left
    kernel spanned by a vector with no zero on ``sigma`` (a zero there would
    mean a proper subset already has a dependency).
    """
    vecs = _left_nullity(spec, sigma)
    if len(vecs) != 1:
        return None
    v = vecs[0]
    if any(v[i] == 0 for i in sigma):
        return None
    return NullVector.from_entries(v)


def candidate_count(n: int, max_size: int) -> int:
    return sum(comb(n, s) for s in range(1, max_size + 1))


def team(spec: SystemSpec, max_support: int | None = None, cap: int = DEFAULT_SUBSET_CAP) -> NullTeam:
    """Enumerate every minimal-support null vector by candidate support.

    Only kernel coordinates can appear in a support, and on those
    coordinates the restricted matrix has rank ``|K| - k``, so candidate
    supports have size at most ``|K| - k + 1``.
    """
    basis = kernel_basis(spec)
    k = len(basis)
    r = spec.d - k
    kernel_coords = sorted({i for b in basis for i in b.support})
    if k == 0:
        return NullTeam(0, (), (), (), r, spec.d)
    bound = len(kernel_coords) - k + 1
    if max_support is not None:
        bound = min(bound, max_support)
    n_candidates = candidate_count(len(kernel_coords), bound)
    if n_candidates > cap:
        raise TooLarge(
            f"{n_candidates} candidate supports exceed the cap of {cap}; lower max_support"
        )
    members = []
    found = []
    for size in range(1, bound + 1):
        for sigma in combinations(kernel_coords, size):
            sset = set(sigma)
            if any(f <= sset for f in found):
                continue
            nu = _circuit_on(spec, sigma)
            if nu is not None:
                members.append(nu)
                found.append(sset)
    return NullTeam(k, tuple(basis), tuple(members), tuple(kernel_coords), r, spec.d)


def orient(nu: NullVector, C: Sequence) -> NullVector:
    """Return ``nu`` or ``-nu``, whichever has a negative dot product with C."""
    if not nu.support:
        raise ZeroVector("cannot orient the zero vector")
    rate = nu.dot(C)
    if rate == 0:
        raise Balanced(f"nu . C = 0 for nu = {nu.entries}")
    return nu if rate < 0 else -nu


def _shrink_to_minimal(spec: SystemSpec, v: Sequence) -> tuple:
    support = [i for i, x in enumerate(v) if x != 0]
    while True:
        vecs = _left_nullity(spec, support)
        if len(vecs) <= 1:
            return tuple(v)
        b1, b2 = vecs[0], vecs[1]
        i = next(j for j in support if b1[j] != 0)
        # zero out coordinate i with a combination of two independent vectors
        v = tuple(b1[i] * y - b2[i] * x for x, y in zip(b1, b2))
        support = [j for j, x in enumerate(v) if x != 0]


def cover_vector(J: Iterable[int], team_basis: Sequence[NullVector], spec: SystemSpec) -> NullVector:
    """A minimal-support null vector whose support avoids every index in J."""
    J = sorted(set(J))
    k = len(team_basis)
    if len(J) >= k:
        raise NotEnoughKernel(f"|J| = {len(J)} but the kernel only has dimension {k}")
    d = spec.d
    if J:
        # coefficients c with sum_l c_l basis_l[j] = 0 for all j in J
        M = [[b.entries[j] for b in team_basis] for j in J]
        coeffs = linalg.null_space(M, k)[0]
    else:
        coeffs = (1,) + (0,) * (k - 1)
    v = tuple(sum(c * b.entries[i] for c, b in zip(coeffs, team_basis)) for i in range(d))
    v = _shrink_to_minimal(spec, v)
    return NullVector.canonical_of(v)


def restrict_system(full: SystemSpec, focal: Iterable[int], resources: Iterable[int]) -> SystemSpec:
    """Cut a square system down to the focal rows and resource columns.

    Requires that focal species interact with nothing outside ``resources``.
    """
    focal = list(focal)
    resources = list(resources)
    rset = set(resources)
    for i in focal:
        for j in range(full.dprime):
            if j not in rset and full.S[i][j] != 0:
                raise NotClosed(f"s[{i + 1}][{j + 1}] = {full.S[i][j]} links a focal species outside R")
    C = [full.C[i] for i in focal]
    S = [[full.S[i][j] for j in resources] for i in focal]
    return SystemSpec(len(focal), len(resources), tuple(C), tuple(tuple(r) for r in S), full.name)


def team_report(t: NullTeam, C: Sequence | None = None) -> dict:
    """JSON-ready description of the team (1-based supports)."""
    members = []
    for m in t.members:
        entry = {"entries": [int(v) for v in m.entries], "support": list(m.labels)}
        if C is not None:
            rate = m.dot(C)
            entry["nu_dot_C"] = format_rational(rate)
            entry["oriented_entries"] = (
                None if rate == 0 else [int(v) for v in (m if rate < 0 else -m).entries]
            )
        members.append(entry)
    return {
        "d": t.d,
        "rank": t.rank,
        "k": t.k,
        "kernel_coordinates": [i + 1 for i in t.kernel_coordinates],
        "member_count": len(t.members),
        "generic_member_count": t.generic_count,
        "matches_generic_count": len(t.members) == t.generic_count,
        "members": members,
    }
