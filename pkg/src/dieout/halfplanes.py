"""Sign classification of per-capita rates over a planar resource space.

With two resources and constant Z, x_i decays iff Z lies strictly inside
H_i = {z : c_i + s_i1 z1 + s_i2 z2 <= 0}. The closed set G where all the
inequalities hold (restricted to z >= 0) is where nobody grows; its vertices
are the constant resource levels at which two species can persist.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DimensionMismatch
from .integrator import percapita_rates
from .model import SystemSpec, format_rational


@dataclass(frozen=True)
class Vertex:
    z: tuple
    boundaries: tuple

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.z)

    def label(self) -> str:
        return ";".join(self.boundaries)


def _require_planar(spec: SystemSpec) -> None:
    if spec.dprime != 2:
        raise DimensionMismatch(f"half-plane analysis needs dprime = 2, got {spec.dprime}")


def _sign(q) -> int:
    return (q > 0) - (q < 0)


def rate_signs(spec: SystemSpec, z) -> tuple:
    return tuple(_sign(r) for r in percapita_rates(spec, tuple(Fraction(v) for v in z)))


def sign_grid(spec: SystemSpec, n: int = 51, zmax=1) -> list:
    """Rows ``(z1, z2, signs)`` on an n x n rational grid over [0, zmax]^2."""
    _require_planar(spec)
    if n < 2:
        raise ValueError("grid needs at least 2 points per axis")
    zmax = Fraction(zmax)
    axis = [zmax * i / (n - 1) for i in range(n)]
    return [(z1, z2, rate_signs(spec, (z1, z2))) for z1 in axis for z2 in axis]


def _lines(spec: SystemSpec) -> list:
    """Boundary lines as (label, a, b, c) with a z1 + b z2 + c = 0."""
    out = [(f"H{i + 1}", row[0], row[1], c) for i, (c, row) in enumerate(zip(spec.C, spec.S))
           if row[0] != 0 or row[1] != 0]
    out += [("z1=0", Fraction(1), Fraction(0), Fraction(0)),
            ("z2=0", Fraction(0), Fraction(1), Fraction(0))]
    return out


def in_G(spec: SystemSpec, z) -> bool:
    if any(v < 0 for v in z):
        return False
    return all(r <= 0 for r in percapita_rates(spec, tuple(z)))


def vertices(spec: SystemSpec) -> list:
    """Vertices of G: pairwise boundary intersections that satisfy every inequality."""
    _require_planar(spec)
    found = {}
    for (l1, a1, b1, c1), (l2, a2, b2, c2) in combinations(_lines(spec), 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        z = ((b1 * c2 - b2 * c1) / det, (a2 * c1 - a1 * c2) / det)
        if not in_G(spec, z):
            continue
        labels = found.setdefault(z, [])
        for lab in (l1, l2):
            if lab not in labels:
                labels.append(lab)
    order = {lab: n for n, (lab, *_rest) in enumerate(_lines(spec))}
    return [Vertex(z, tuple(sorted(labs, key=order.get))) for z, labs in sorted(found.items())]


def _num(q: Fraction) -> str:
    return repr(float(q))


def write_halfplanes_csv(spec: SystemSpec, rows: list, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["z1", "z2"] + [f"sign_{i + 1}" for i in range(spec.d)])
        for z1, z2, signs in rows:
            w.writerow([_num(z1), _num(z2)] + list(signs))


def write_vertices_csv(verts: list, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["z1", "z2", "z1_exact", "z2_exact", "boundaries", "positive"])
        for v in verts:
            w.writerow([_num(v.z[0]), _num(v.z[1]), format_rational(v.z[0]),
                        format_rational(v.z[1]), v.label(), int(v.positive)])
