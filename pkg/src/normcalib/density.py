"""Two-dimensional area densities on simple 2-vectors, plus the small
k-volume support (k <= 3) used by the higher-dimensional criterion.

Busemann-Hausdorff: value pi / A(K) where K is the norm's unit disc in
the coordinates of the representing pair (v1, v2).  Holmes-Thompson:
A(K*) / pi with the polar taken in the Euclidean structure of those
coordinates.  The weighted-functional density alpha:
pi * sum_{i<j} p_i p_j |(F_i ^ F_j)(sigma)|.

Exact mode carries every value as a :class:`PiTimes` with a rational
coefficient; the circle constant never enters numerically.  Degenerate
2-vectors evaluate to zero (flagged by SimpleTwoVector.degenerate), so
mesh integration over chains with sliver triangles stays total.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import Num, PiTimes, promote
from .exterior import Covector, SimpleTwoVector, Vec, wedge, eval_two_form
from .polytope import (
    GeometryError,
    SymPolygon,
    SymPolytope,
    halfplane_intersection,
    polar_polygon,
    polygon_area,
    symmetric_section_area,
)

F = Fraction

#: Euclidean volume of the k-dimensional unit ball, as PiTimes values.
EPSILON_K = {
    1: PiTimes(F(2), 0),
    2: PiTimes(F(1), 1),
    3: PiTimes(F(4, 3), 1),
}


def _pullback(body: SymPolytope, sigma: SimpleTwoVector) -> list:
    """2D constraints of {(s,t) : s v1 + t v2 in B}; vacuous ones dropped."""
    v1, v2 = sigma.v1.coords, sigma.v2.coords
    cons = []
    for g in body.facets:
        c = g.coeffs
        a = sum(ci * xi for ci, xi in zip(c, v1))
        b = sum(ci * xi for ci, xi in zip(c, v2))
        if a == 0 and b == 0:
            continue
        cons.append((a, b))
    return cons


def _int_value(x) -> "int | None":
    if isinstance(x, int):
        return x
    if isinstance(x, F) and x.denominator == 1:
        return x.numerator
    return None


def int_facet_rows(body: SymPolytope) -> "list | None":
    """Facet covectors as raw integer rows, or None when not all-integer."""
    rows = []
    for g in body.facets:
        row = []
        for c in g.coeffs:
            v = _int_value(c)
            if v is None:
                return None
            row.append(v)
        rows.append(tuple(row))
    return rows


def _section_area(cons: list) -> Num:
    """Dispatch to the integer fast path when every entry is integral."""
    ints = []
    for a, b in cons:
        ia = _int_value(a)
        ib = _int_value(b)
        if ia is None or ib is None:
            return symmetric_section_area(cons)
        ints.append((ia, ib))
    from .polytope import section_area_int

    return section_area_int(ints)


@dataclass(frozen=True)
class BHDensity:
    """Busemann-Hausdorff 2-density of a polyhedral norm."""

    ball: SymPolytope

    def coeff(self, sigma: SimpleTwoVector) -> Num:
        """Rational part: value is pi * coeff.  Zero for degenerate sigma."""
        if sigma.dim != self.ball.dim:
            raise GeometryError("2-vector dimension differs from the norm's")
        if sigma.degenerate:
            return F(0)
        return 1 / _section_area(_pullback(self.ball, sigma))

    def __call__(self, sigma: SimpleTwoVector) -> PiTimes:
        return PiTimes(self.coeff(sigma), 1)

    def unit_disc(self, sigma: SimpleTwoVector) -> SymPolygon:
        """The pullback unit disc K = {(s,t) : s v1 + t v2 in B}."""
        if sigma.degenerate:
            raise GeometryError("degenerate 2-vector has no unit disc")
        return halfplane_intersection(_pullback(self.ball, sigma))


@dataclass(frozen=True)
class HTDensity:
    """Holmes-Thompson 2-density of a polyhedral norm."""

    ball: SymPolytope

    def coeff(self, sigma: SimpleTwoVector) -> Num:
        """Rational part: value is coeff / pi.  Zero for degenerate sigma."""
        if sigma.dim != self.ball.dim:
            raise GeometryError("2-vector dimension differs from the norm's")
        if sigma.degenerate:
            return F(0)
        disc = halfplane_intersection(_pullback(self.ball, sigma))
        return polygon_area(polar_polygon(disc))

    def __call__(self, sigma: SimpleTwoVector) -> PiTimes:
        return PiTimes(self.coeff(sigma), -1)


@dataclass(frozen=True)
class AlphaDensity:
    """Weighted-functional density pi * sum_{i<j} p_i p_j |(F_i ^ F_j)(sigma)|.

    Built from a plane section's supporting functionals and triangle-fan
    weights; nonnegative, symmetric, positively homogeneous, and bounded
    by the Busemann-Hausdorff density of the same norm.
    """

    functionals: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.functionals) != len(self.weights):
            raise ValueError("one weight per functional required")
        total = sum(self.weights)
        if isinstance(total, float):
            if abs(total - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")
        elif total != 1:
            raise ValueError("weights must sum to 1 exactly")

    @staticmethod
    def from_section(polygon: SymPolygon) -> "AlphaDensity":
        if polygon.ambient_support is None:
            raise GeometryError("polygon carries no ambient functionals")
        return AlphaDensity(
            functionals=tuple(polygon.ambient_support),
            weights=polygon.weights(),
        )

    def coeff(self, sigma: SimpleTwoVector) -> Num:
        """Rational part: value is pi * coeff."""
        total = F(0)
        fs = self.functionals
        ps = self.weights
        v1, v2 = sigma.v1, sigma.v2
        vals1 = [f(v1) for f in fs]
        vals2 = [f(v2) for f in fs]
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                minor = vals1[i] * vals2[j] - vals1[j] * vals2[i]
                total += ps[i] * ps[j] * abs(minor)
        return total

    def __call__(self, sigma: SimpleTwoVector) -> PiTimes:
        return PiTimes(self.coeff(sigma), 1)


def bh_eval(density: BHDensity, sigma: SimpleTwoVector) -> PiTimes:
    return density(sigma)


def ht_eval(density: HTDensity, sigma: SimpleTwoVector) -> PiTimes:
    return density(sigma)


def alpha_eval(density: AlphaDensity, sigma: SimpleTwoVector) -> PiTimes:
    return density(sigma)


# ---------------------------------------------------------------------------
# k-dimensional volumes for constraint-listed polytopes, k in {2, 3}
# ---------------------------------------------------------------------------

def enumerate_vertices(constraints: Sequence, k: int, assume_bounded: bool = False) -> list:
    """Vertices of {x in R^k : a . x <= b} by brute force over k-subsets.

    constraints: [(coeff tuple, rhs), ...].  Intended for desk-scale
    inputs; raises GeometryError when the region is unbounded or empty.
    `assume_bounded` skips the recession-cone check (for callers whose
    construction already guarantees boundedness, e.g. subsets of a box).
    """
    from .arith import solve_square

    cons = [(tuple(map(promote, a)), promote(b)) for a, b in constraints]
    if not assume_bounded and not _positively_spans([a for a, _ in cons], k):
        raise GeometryError("constraint normals do not positively span: unbounded")
    verts = set()
    for combo in itertools.combinations(range(len(cons)), k):
        mat = [cons[i][0] for i in combo]
        rhs = [cons[i][1] for i in combo]
        sol = solve_square(mat, rhs)
        if sol is None:
            continue
        if all(
            sum(c * x for c, x in zip(a, sol)) <= b for a, b in cons
        ):
            verts.add(tuple(sol))
    if not verts:
        raise GeometryError("empty polytope")
    return sorted(verts)


def _positively_spans(normals: Sequence, k: int) -> bool:
    """True iff every direction is a nonnegative combination of the normals,
    equivalently the region {a . x <= 0 for all a} is just the origin."""
    from .lp import solve_feasibility

    m = len(normals)
    for axis in range(k):
        for sgn in (1, -1):
            # find lambda >= 0 with sum lambda_i a_i = sgn * e_axis
            a_eq = [[F(normals[i][d]) for i in range(m)] for d in range(k)]
            b_eq = [F(sgn if d == axis else 0) for d in range(k)]
            a_ub = [[F(-1 if j == i else 0) for j in range(m)] for i in range(m)]
            b_ub = [F(0)] * m
            res = solve_feasibility(m, a_ub, b_ub, a_eq, b_eq)
            if not res.feasible:
                return False
    return True


def volume_k(constraints: Sequence, k: int, assume_bounded: bool = False) -> Num:
    """Euclidean volume of a bounded constraint-listed polytope, k in {2, 3}.

    k = 2 uses the shoelace formula on the angularly ordered vertex set;
    k = 3 decomposes the boundary facets into triangles and sums signed
    tetrahedron volumes against an interior point.
    """
    if k not in (2, 3):
        raise ValueError("volume_k supports k = 2 and k = 3 only")
    verts = enumerate_vertices(constraints, k, assume_bounded=assume_bounded)
    if k == 2:
        ordered = _order_planar(verts)
        if len(ordered) < 3:
            return F(0)
        total = 0
        for i in range(len(ordered)):
            a, b = ordered[i], ordered[(i + 1) % len(ordered)]
            total += a[0] * b[1] - a[1] * b[0]
        return abs(total) / 2
    return _volume3(constraints, verts)


def _order_planar(verts: list) -> list:
    import functools

    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)

    def cmp(p, q):
        px, py = p[0] - cx, p[1] - cy
        qx, qy = q[0] - cx, q[1] - cy
        ph = 0 if (py > 0 or (py == 0 and px > 0)) else 1
        qh = 0 if (qy > 0 or (qy == 0 and qx > 0)) else 1
        if ph != qh:
            return -1 if ph < qh else 1
        cr = px * qy - py * qx
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    return sorted(verts, key=functools.cmp_to_key(cmp))


def _volume3(constraints: Sequence, verts: list) -> Num:
    from .arith import det

    cons = [(tuple(map(promote, a)), promote(b)) for a, b in constraints]
    m = len(verts)
    centroid = tuple(sum(v[d] for v in verts) / m for d in range(3))
    # group boundary vertices by facet plane (deduplicated)
    seen_planes = set()
    total = F(0)
    for a, b in cons:
        key = _plane_key(a, b)
        if key in seen_planes:
            continue
        seen_planes.add(key)
        on_face = [v for v in verts if sum(c * x for c, x in zip(a, v)) == b]
        if len(on_face) < 3:
            continue
        ordered = _order_on_plane(on_face, a)
        if ordered is None:
            continue
        v0 = ordered[0]
        for i in range(1, len(ordered) - 1):
            v1, v2 = ordered[i], ordered[i + 1]
            d = [
                [v0[j] - centroid[j] for j in range(3)],
                [v1[j] - centroid[j] for j in range(3)],
                [v2[j] - centroid[j] for j in range(3)],
            ]
            total += abs(det(d))
    return total / 6


def _plane_key(a: tuple, b: Num):
    from .polytope import _primitive_direction

    key = _primitive_direction(tuple(a) + (b,))
    if key is None:
        return tuple(a) + (b,)
    # orient so the normal part matches the original inequality direction
    for ca, ck in zip(tuple(a) + (b,), key):
        if ck != 0:
            if (ca > 0) != (ck > 0):
                key = tuple(-x for x in key)
            break
    return key


def _order_on_plane(points: list, normal: tuple):
    """Angular ordering of coplanar 3D points around their centroid."""
    import functools

    m = len(points)
    c = tuple(sum(p[d] for p in points) / m for d in range(3))
    # basis of the plane: u = first nonzero offset, w = normal x u
    u = None
    for p in points:
        off = tuple(p[d] - c[d] for d in range(3))
        if any(x != 0 for x in off):
            u = off
            break
    if u is None:
        return None
    w = (
        normal[1] * u[2] - normal[2] * u[1],
        normal[2] * u[0] - normal[0] * u[2],
        normal[0] * u[1] - normal[1] * u[0],
    )

    def coords(p):
        off = tuple(p[d] - c[d] for d in range(3))
        return (
            sum(o * x for o, x in zip(off, u)),
            sum(o * x for o, x in zip(off, w)),
        )

    def cmp(p, q):
        px, py = coords(p)
        qx, qy = coords(q)
        ph = 0 if (py > 0 or (py == 0 and px > 0)) else 1
        qh = 0 if (qy > 0 or (qy == 0 and qx > 0)) else 1
        if ph != qh:
            return -1 if ph < qh else 1
        cr = px * qy - py * qx
        return -1 if cr > 0 else (1 if cr < 0 else 0)

    return sorted(points, key=functools.cmp_to_key(cmp))
