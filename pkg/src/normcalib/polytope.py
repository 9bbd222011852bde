"""Centrally symmetric polytopes, their 2-plane sections, and the exact
polygon calculus: areas, triangle-fan weights, polars, mixed areas and the
Minkowski inequality gap.

A polytope is stored facet-first: B = {x : |g_j(x)| <= 1 for all j}, one
covector per symmetric facet pair.  A polygon keeps the full vertex cycle
a_1 ... a_{2n} (counterclockwise, a_{i+n} = -a_i) but only one edge per
symmetric pair: edge i runs from a_i to a_{i+1} and carries its support
covector f_i (f_i = 1 on the edge, f_i <= 1 on the polygon), and, for
plane sections, the ambient facet functional F_i realizing f_i.

All constructions are exact in rational mode.  In float mode the convex
hull and collinearity predicates use a relative 1e-12 tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arith import Num, format_number, promote, solve2
from .exterior import Covector, SimpleTwoVector, Vec

FLOAT_MERGE_TOL = 1e-12


class GeometryError(ValueError):
    """Malformed geometric input (unbounded body, degenerate polygon, ...)."""


# ---------------------------------------------------------------------------
# low-level planar helpers (work on raw (x, y) tuples for speed)
# ---------------------------------------------------------------------------

def _cross(o, a, b) -> Num:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def cross2(a, b) -> Num:
    return a[0] * b[1] - a[1] * b[0]


def _collinearity_tol(points) -> float:
    if not points or not isinstance(points[0][0], float):
        return 0.0
    scale = max(max(abs(p[0]), abs(p[1])) for p in points)
    return FLOAT_MERGE_TOL * scale * scale


def convex_hull(points: Sequence[tuple]) -> list:
    """Andrew monotone chain; strictly convex output (collinear points dropped).

    Exact for rational input; float input uses the module merge tolerance.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    tol = _collinearity_tol(pts)

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= tol:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


def _line_intersection(f, g) -> tuple:
    """Intersection of {f . x = 1} and {g . x = 1} for covector tuples f, g."""
    x, y = solve2(f[0], f[1], 1, g[0], g[1], 1)
    return (x, y)


def shoelace_area(vertices: Sequence[tuple]) -> Num:
    """Unsigned polygon area, vertices in cyclic order."""
    total = 0
    m = len(vertices)
    for i in range(m):
        a = vertices[i]
        b = vertices[(i + 1) % m]
        total += a[0] * b[1] - a[1] * b[0]
    return abs(total) / 2


def symmetric_section_area(constraints: Sequence[tuple]) -> Num:
    """Area of {x in R^2 : |f(x)| <= 1 for every constraint covector f}.

    Fast path used by the density sweeps: no polygon object is built.
    """
    pts = []
    for (a, b) in constraints:
        if a == 0 and b == 0:
            continue
        pts.append((a, b))
        pts.append((-a, -b))
    hull = convex_hull(pts)
    if len(hull) < 3:
        raise GeometryError("section is unbounded: constraints do not span the plane")
    m = len(hull)
    verts = [_line_intersection(hull[i], hull[(i + 1) % m]) for i in range(m)]
    return shoelace_area(verts)


def section_area_int(constraints: Sequence[tuple]) -> Fraction:
    """Exact section area for integer constraint covectors.

    Same value as :func:`symmetric_section_area` but the whole pipeline
    runs on machine integers: hull predicates, vertex Cramer numerators
    and the shoelace sum accumulate over a running common denominator,
    normalized once at the end.
    """
    pts = set()
    for (a, b) in constraints:
        if a == 0 and b == 0:
            continue
        pts.add((a, b))
        pts.add((-a, -b))
    hull = convex_hull(sorted(pts))
    if len(hull) < 3:
        raise GeometryError("section is unbounded: constraints do not span the plane")
    m = len(hull)
    num = 0
    den = 1
    for i in range(m):
        a, b = hull[i - 1]
        c, d = hull[i]
        e, f = hull[(i + 1) % m]
        # cross of consecutive polygon vertices, over (D_i D_{i+1})
        d_i = a * d - b * c
        d_j = c * f - d * e
        n_i = (d - b) * (c - e) - (a - c) * (f - d)
        dd = d_i * d_j
        num = num * dd + n_i * den
        den = den * dd
    return Fraction(abs(num), 2 * den)


# ---------------------------------------------------------------------------
# symmetric polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymPolygon:
    """Centrally symmetric convex 2n-gon with per-edge support metadata.

    vertices: full cycle a_0 ... a_{2n-1}, counterclockwise, a_{i+n} = -a_i.
    support[i]: 2D covector equal to 1 on edge [a_i, a_{i+1}], <= 1 on K.
    ambient_support[i] / facet_index[i]: for plane sections, the ambient
    facet functional (sign included) whose restriction realizes support[i].
    """

    vertices: tuple
    support: tuple
    ambient_support: Optional[tuple] = None
    facet_index: Optional[tuple] = None

    def __post_init__(self):
        verts = self.vertices
        m = len(verts)
        if m < 4 or m % 2 != 0:
            raise GeometryError("a symmetric polygon needs an even vertex count >= 4")
        n = m // 2
        tol = _collinearity_tol(verts)
        coord_tol = 0.0
        if tol:
            coord_tol = FLOAT_MERGE_TOL * max(max(abs(p[0]), abs(p[1])) for p in verts)
        for i in range(n):
            ai, aj = verts[i], verts[i + n]
            if abs(ai[0] + aj[0]) > coord_tol or abs(ai[1] + aj[1]) > coord_tol:
                raise GeometryError("vertex cycle is not centrally symmetric")
        for i in range(m):
            a, b, c = verts[i], verts[(i + 1) % m], verts[(i + 2) % m]
            if _cross(a, b, c) <= tol:
                raise GeometryError("vertex cycle is not strictly convex counterclockwise")
        if len(self.support) != n:
            raise GeometryError("need exactly one support covector per edge pair")

    @property
    def n_edges(self) -> int:
        """Number of edge pairs (the polygon has 2n edges in total)."""
        return len(self.support)

    def vertex(self, i: int) -> tuple:
        return self.vertices[i % len(self.vertices)]

    def edge_vector(self, i: int) -> tuple:
        a = self.vertex(i)
        b = self.vertex(i + 1)
        return (b[0] - a[0], b[1] - a[1])

    def edge_vectors(self) -> list:
        return [self.edge_vector(i) for i in range(self.n_edges)]

    def triangle_area_twice(self, i: int) -> Num:
        """2 * area of the triangle (0, a_i, a_{i+1}); equals h_i * l_i."""
        a = self.vertex(i)
        b = self.vertex(i + 1)
        return abs(cross2(a, b))

    def area(self) -> Num:
        """Euclidean area; for symmetric cycles this equals sum_i h_i l_i."""
        return shoelace_area(self.vertices)

    def weights(self) -> tuple:
        """Triangle-fan weights p_i = 2 A(0, a_i, a_{i+1}) / A(K); sum is 1."""
        a = self.area()
        return tuple(self.triangle_area_twice(i) / a for i in range(self.n_edges))

    def contains(self, point: tuple) -> bool:
        return all(abs(f[0] * point[0] + f[1] * point[1]) <= 1 for f in self.support)

    def support_value(self, direction: tuple) -> Num:
        """h_K(u) = max over vertices of <x, u> (no normalization of u)."""
        return max(x[0] * direction[0] + x[1] * direction[1] for x in self.vertices)

    def support_covector(self, i: int) -> Covector:
        return Covector(self.support[i])

    def half_vertices(self) -> tuple:
        return self.vertices[: self.n_edges]

    def to_json_dict(self) -> dict:
        d = {
            "vertices": [[format_number(c) for c in v] for v in self.vertices],
            "support": [[format_number(c) for c in f] for f in self.support],
        }
        if self.ambient_support is not None:
            d["ambient_support"] = [
                [format_number(c) for c in f.coeffs] for f in self.ambient_support
            ]
        if self.facet_index is not None:
            d["facet_index"] = list(self.facet_index)
        return d

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_vertices(vertices: Iterable[Sequence]) -> "SymPolygon":
        """Build from the full counterclockwise vertex cycle.

        Support covectors are recovered by solving f(a_i) = f(a_{i+1}) = 1.
        """
        verts = tuple((promote(v[0]), promote(v[1])) for v in vertices)
        m = len(verts)
        if m % 2 != 0 or m < 4:
            raise GeometryError("a symmetric polygon needs an even vertex count >= 4")
        n = m // 2
        support = []
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % m]
            try:
                fx, fy = solve2(a[0], a[1], 1, b[0], b[1], 1)
            except ZeroDivisionError as exc:
                raise GeometryError("edge collinear with the origin") from exc
            support.append((fx, fy))
        return SymPolygon(vertices=verts, support=tuple(support))

    @staticmethod
    def from_half_vertices(half: Iterable[Sequence]) -> "SymPolygon":
        half = [(promote(v[0]), promote(v[1])) for v in half]
        full = half + [(-x, -y) for (x, y) in half]
        return SymPolygon.from_vertices(full)

    @staticmethod
    def from_edge_vectors(edges: Iterable[Sequence]) -> "SymPolygon":
        """Symmetric 2n-gon whose first n edge vectors are the given ones.

        The start vertex is -(v_1 + ... + v_n)/2, which centers the cycle.
        """
        vs = [(promote(v[0]), promote(v[1])) for v in edges]
        sx = sum(v[0] for v in vs)
        sy = sum(v[1] for v in vs)
        a = (-sx / 2, -sy / 2)
        half = [a]
        for v in vs[:-1]:
            a = (a[0] + v[0], a[1] + v[1])
            half.append(a)
        return SymPolygon.from_half_vertices(half)


def polygon_area(polygon: SymPolygon) -> Num:
    return polygon.area()


def edge_weights(polygon: SymPolygon) -> tuple:
    return polygon.weights()


def halfplane_intersection(
    constraints: Sequence, tags: Optional[Sequence] = None
) -> SymPolygon:
    """The symmetric polygon cut out by |f_i(x)| <= 1 over all constraints.

    Redundant constraints are dropped and collinear edges merged: only the
    covectors that are vertices of the convex hull of {+/- f_i} support
    edges.  `tags` optionally attaches (ambient covector, facet index) to
    each constraint; tag assignment is deterministic (smallest index wins
    on exact duplicates).
    """
    pts: dict = {}
    for idx, c in enumerate(constraints):
        coeffs = c.coeffs if isinstance(c, Covector) else tuple(promote(x) for x in c)
        if len(coeffs) != 2:
            raise GeometryError("half-plane constraints must be 2-dimensional")
        if coeffs[0] == 0 and coeffs[1] == 0:
            continue
        for sign in (1, -1):
            p = (sign * coeffs[0], sign * coeffs[1])
            if p not in pts:
                pts[p] = (idx, sign)
    hull = convex_hull(list(pts))
    if len(hull) < 3:
        raise GeometryError("constraints do not bound a polygon (rank < 2)")
    m = len(hull)
    # vertex i sits between edges supported by hull[i-1] and hull[i]
    verts = tuple(_line_intersection(hull[i - 1], hull[i]) for i in range(m))
    n = m // 2
    support = tuple(hull[:n])
    ambient = facet = None
    if tags is not None:
        amb, fac = [], []
        for f in support:
            idx, sign = pts[f]
            base, facet_idx = tags[idx]
            amb.append(base if sign == 1 else -base)
            fac.append(facet_idx)
        ambient = tuple(amb)
        facet = tuple(fac)
    # edge j of the result runs [verts[j], verts[j+1]] and lies on hull[j] = 1
    return SymPolygon(
        vertices=verts, support=support, ambient_support=ambient, facet_index=facet
    )


def polar_polygon(polygon: SymPolygon) -> SymPolygon:
    """The polar polygon K* = {f : f(x) <= 1 on K}.

    Its vertices are exactly the edge support covectors of K (and their
    negatives); its support covectors are the vertices of K.
    """
    return halfplane_intersection(polygon.half_vertices())


def mixed_area(k1: SymPolygon, k2: SymPolygon) -> Num:
    """Two-dimensional mixed volume, normalized so mixed_area(K, K) = A(K).

    Computed as (1/2) * sum over all edges e of k2 of h_{k1}(n_e) |e|,
    which by symmetry is the sum over k2's first n edges of the support
    value of k1 in the direction of e's outward normal (the normal is not
    normalized; the length factor cancels exactly).
    """
    total = 0
    for i in range(k2.n_edges):
        w = k2.edge_vector(i)
        total += k1.support_value((w[1], -w[0]))
    return total


def minkowski_gap(k1: SymPolygon, k2: SymPolygon) -> Num:
    """V(K1,K2)^2 - A(K1) A(K2); Minkowski's inequality makes it >= 0."""
    v = mixed_area(k1, k2)
    return v * v - k1.area() * k2.area()


# ---------------------------------------------------------------------------
# symmetric polytopes
# ---------------------------------------------------------------------------

def _primitive_direction(coeffs: tuple) -> Optional[tuple]:
    """Canonical representative of a rational covector up to positive scaling
    and sign; None for floats (float facets are not deduplicated exactly)."""
    if any(isinstance(c, float) for c in coeffs):
        return None
    fracs = [Fraction(c) for c in coeffs]
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // math.gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-u for u in ints]
            break
    return tuple(ints)


@dataclass(frozen=True)
class SymPolytope:
    """Centrally symmetric polytope B = {x : |g_j(x)| <= 1, j = 1..m}.

    Bounded iff the facet covectors span the dual space; construction
    checks this and deduplicates covectors that agree up to positive (or
    negative: each g encodes the pair +/-g) scaling, keeping the smallest
    index.
    """

    dim: int
    facets: tuple

    def __init__(self, dim: int, facets: Iterable):
        facet_list = []
        seen = {}
        for g in facets:
            cov = g if isinstance(g, Covector) else Covector(g)
            if cov.dim != dim:
                raise GeometryError("facet covector dimension differs from dim")
            if cov.is_zero():
                raise GeometryError("zero facet covector")
            key = _primitive_direction(cov.coeffs)
            if key is not None:
                if key in seen:
                    continue
                seen[key] = len(facet_list)
            facet_list.append(cov)
        if dim < 2:
            raise GeometryError("ambient dimension must be >= 2")
        if _rank([f.coeffs for f in facet_list]) < dim:
            raise GeometryError("facet covectors do not span: polytope is unbounded")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "facets", tuple(facet_list))

    def contains(self, point) -> bool:
        coords = point.coords if isinstance(point, Vec) else point
        return all(abs(g(coords)) <= 1 for g in self.facets)

    def norm(self, point) -> Num:
        """The gauge of B: max_j |g_j(x)|."""
        coords = point.coords if isinstance(point, Vec) else point
        return max(abs(g(coords)) for g in self.facets)

    def vertices(self) -> list:
        """Exact vertex enumeration (brute force; intended for dim <= 4)."""
        from .arith import solve_square

        n = self.dim
        rows = [g.coeffs for g in self.facets]
        verts = set()
        for combo in itertools.combinations(range(len(rows)), n):
            for signs in itertools.product((1, -1), repeat=n):
                mat = [[signs[i] * c for c in rows[combo[i]]] for i in range(n)]
                sol = solve_square(mat, [Fraction(1)] * n)
                if sol is None:
                    continue
                if all(abs(g(sol)) <= 1 for g in self.facets):
                    verts.add(tuple(sol))
        return sorted(verts)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [[format_number(c) for c in g.coeffs] for g in self.facets],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "SymPolytope":
        dim = int(data["dim"])
        facets = [Covector([promote(c) for c in row]) for row in data["facets"]]
        body = SymPolytope(dim, facets)
        for raw in data.get("vertices", []):
            v = tuple(promote(c) for c in raw)
            if body.norm(v) != 1:
                raise GeometryError(
                    f"cross-validation failed: listed vertex {raw} is not on the boundary"
                )
        return body

    @staticmethod
    def linf(dim: int) -> "SymPolytope":
        rows = [[Fraction(1 if j == i else 0) for j in range(dim)] for i in range(dim)]
        return SymPolytope(dim, rows)

    @staticmethod
    def l1(dim: int) -> "SymPolytope":
        # one covector per sign pattern with the last coordinate fixed to +1
        rows = [
            [Fraction(s) for s in signs] + [Fraction(1)]
            for signs in itertools.product((1, -1), repeat=dim - 1)
        ]
        return SymPolytope(dim, rows)


def _rank(rows: Sequence[Sequence[Num]]) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        piv = m[row][col]
        for r in range(row + 1, len(m)):
            if m[r][col] != 0:
                factor = m[r][col] / piv
                for c in range(col, ncols):
                    m[r][c] -= factor * m[row][c]
        row += 1
        rank += 1
        if rank == min(len(m), ncols):
            break
    return rank


@dataclass(frozen=True)
class PlaneBasis:
    """An ordered basis (u1, u2) of a 2-dimensional linear subspace."""

    u1: Vec
    u2: Vec

    def __post_init__(self):
        if self.u1.dim != self.u2.dim:
            raise GeometryError("plane basis vectors live in different dimensions")
        if SimpleTwoVector(self.u1, self.u2).degenerate:
            raise GeometryError("plane basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return self.u1.dim

    def embed(self, s: Num, t: Num) -> Vec:
        return Vec(
            s * a + t * b for a, b in zip(self.u1.coords, self.u2.coords)
        )

    @staticmethod
    def coordinate(dim: int, i: int = 0, j: int = 1) -> "PlaneBasis":
        return PlaneBasis(Vec.basis(i, dim), Vec.basis(j, dim))


def pullback_constraints(body: SymPolytope, u1: Vec, u2: Vec) -> list:
    """Restrict each facet |g| <= 1 to the plane span(u1, u2): the 2D
    covector (g(u1), g(u2)) acting on plane coordinates (s, t).  Facet
    pairs parallel to the plane restrict to the vacuous constraint and
    are dropped.  Returns [(covector_tuple, facet_index), ...]."""
    out = []
    for j, g in enumerate(body.facets):
        a = g(u1)
        b = g(u2)
        if a == 0 and b == 0:
            continue
        out.append(((a, b), j))
    return out


def section(body: SymPolytope, plane: PlaneBasis) -> SymPolygon:
    """The section K = B intersect span(u1, u2), in (s, t) plane coordinates.

    Each edge is annotated with the ambient facet functional F_i = +/-g_j
    whose restriction realizes the edge support covector, so F_i <= 1 on B
    and F_i = 1 on the edge.
    """
    if plane.dim != body.dim:
        raise GeometryError("plane and polytope dimensions differ")
    cons = pullback_constraints(body, plane.u1, plane.u2)
    if not cons:
        raise GeometryError("section is unbounded (no facet restricts the plane)")
    constraints = [c for c, _ in cons]
    tags = [(body.facets[j], j) for _, j in cons]
    return halfplane_intersection(constraints, tags=tags)
