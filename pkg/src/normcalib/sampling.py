"""Seeded random generators for polygons, polytopes, planes and 2-vectors.

All generators draw integer data through a :class:`SplitMix64` stream so
exact mode stays exact and every report can be reproduced from its seed.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exterior import Covector, SimpleTwoVector, Vec
from .polytope import GeometryError, SymPolygon, SymPolytope, PlaneBasis, cross2
from .rng import SplitMix64

F = Fraction


def _primitive(v: tuple) -> tuple:
    g = math.gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def random_symmetric_polygon(
    rng: SplitMix64, max_half_edges: int = 8, coord_bound: int = 9
) -> SymPolygon:
    """Random strictly convex symmetric 2n-gon with rational vertices.

    Draws n pairwise non-parallel integer edge vectors in the open upper
    half-plane, sorts them by angle and closes the symmetric cycle; the
    resulting vertex coordinates are integers or half-integers.
    """
    n = rng.randint(2, max_half_edges)
    directions: dict = {}
    attempts = 0
    while len(directions) < n:
        attempts += 1
        if attempts > 1000:
            raise GeometryError("failed to sample enough edge directions")
        x = rng.randint(-coord_bound, coord_bound)
        y = rng.randint(0, coord_bound)
        if y == 0:
            if x == 0:
                continue
            x = abs(x)
        key = _primitive((x, y))
        if key not in directions:
            directions[key] = (x, y)
    edges = list(directions.values())
    # ascending angle within [0, pi): v before w iff cross(v, w) > 0
    import functools

    edges.sort(key=functools.cmp_to_key(lambda a, b: -1 if cross2(a, b) > 0 else 1))
    return SymPolygon.from_edge_vectors([(F(x), F(y)) for x, y in edges])


def random_weights(rng: SplitMix64, n: int, allow_zero: bool = False) -> tuple:
    """Random rational weights p_i >= 0 with an exact sum of 1."""
    lo = 0 if allow_zero else 1
    raw = [rng.randint(lo, 20) for _ in range(n)]
    if sum(raw) == 0:
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return tuple(F(r, total) for r in raw)


def random_sym_polytope(
    rng: SplitMix64, dim: int, facet_pairs: int, coord_bound: int = 9
) -> SymPolytope:
    """Random bounded symmetric polytope with at most `facet_pairs` pairs."""
    for _ in range(200):
        rows = []
        for _ in range(facet_pairs):
            row = [F(rng.randint(-coord_bound, coord_bound)) for _ in range(dim)]
            if any(c != 0 for c in row):
                rows.append(row)
        try:
            return SymPolytope(dim, rows)
        except GeometryError:
            continue
    raise GeometryError("failed to sample a bounded polytope")


def random_plane(rng: SplitMix64, dim: int, coord_bound: int = 5) -> PlaneBasis:
    while True:
        u1 = Vec([F(rng.randint(-coord_bound, coord_bound)) for _ in range(dim)])
        u2 = Vec([F(rng.randint(-coord_bound, coord_bound)) for _ in range(dim)])
        try:
            return PlaneBasis(u1, u2)
        except (GeometryError, ValueError):
            continue


def random_int_pair(rng: SplitMix64, dim: int, coord_bound: int = 10) -> tuple:
    """Nondegenerate integer-coordinate pair in [-coord_bound, coord_bound]^n,
    returned as raw tuples (the hot-loop form of a simple 2-vector)."""
    while True:
        v1 = tuple(rng.randint(-coord_bound, coord_bound) for _ in range(dim))
        v2 = tuple(rng.randint(-coord_bound, coord_bound) for _ in range(dim))
        for i in range(dim):
            for j in range(i + 1, dim):
                if v1[i] * v2[j] - v1[j] * v2[i] != 0:
                    return v1, v2


def random_simple_two_vector(
    rng: SplitMix64, dim: int, coord_bound: int = 10
) -> SimpleTwoVector:
    """Nondegenerate integer-coordinate pair in [-coord_bound, coord_bound]^n."""
    v1, v2 = random_int_pair(rng, dim, coord_bound)
    return SimpleTwoVector(Vec([F(c) for c in v1]), Vec([F(c) for c in v2]))


def random_polar_point(rng: SplitMix64, polar_vertices: list, spread: int = 3) -> Covector:
    """Random point of K*: a convex combination of up to `spread` polar vertices.

    With a single vertex this returns a vertex of K*; otherwise an interior
    or boundary point, always satisfying f <= 1 on K exactly.
    """
    r = rng.randint(1, spread)
    picks = [polar_vertices[rng.randrange(len(polar_vertices))] for _ in range(r)]
    weights = [rng.randint(1, 10) for _ in range(r)]
    total = sum(weights)
    x = sum(F(w) * p[0] for w, p in zip(weights, picks)) / total
    y = sum(F(w) * p[1] for w, p in zip(weights, picks)) / total
    return Covector([x, y])
