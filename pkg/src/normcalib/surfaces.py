"""Triangulated Lipschitz chains over Z and Z2: boundary chains, areas
under the Busemann-Hausdorff and weighted-functional densities, image
areas under coordinate-pair maps, and flat-minimality experiments
comparing competitor surfaces against planar discs.

A chain's area is the |coefficient|-weighted sum of its triangles'
density values (half the parallelotope value of the edge-vector pair);
over Z2 every nonzero coefficient counts once.  Boundary equality is
checked combinatorially on edge chains, never geometrically, so
competitor generators must reuse the disc's boundary vertices verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arith import Num, PiTimes, format_number, promote
from .density import AlphaDensity, BHDensity
from .exterior import Covector, SimpleTwoVector, Vec
from .polytope import GeometryError, PlaneBasis, SymPolytope
from .rng import SplitMix64

F = Fraction

RINGS = ("Z", "Z2")


@dataclass(frozen=True)
class TriMesh:
    """A 2-chain: vertices, coefficient-weighted index triangles, and the
    coefficient ring tag.  Normalization drops zero coefficients (mod 2
    over Z2) and validates indices."""

    vertices: tuple
    triangles: tuple
    ring: str = "Z"

    def __init__(self, vertices: Iterable, triangles: Iterable, ring: str = "Z"):
        if ring not in RINGS:
            raise ValueError(f"ring must be one of {RINGS}")
        verts = tuple(v if isinstance(v, Vec) else Vec(v) for v in vertices)
        tris = []
        for tri, coeff in triangles:
            idx = tuple(int(i) for i in tri)
            if len(idx) != 3:
                raise ValueError("triangles are index triples")
            if any(i < 0 or i >= len(verts) for i in idx):
                raise ValueError(f"triangle {idx} references a missing vertex")
            c = int(coeff)
            if ring == "Z2":
                c %= 2
            if c != 0:
                tris.append((idx, c))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tuple(tris))
        object.__setattr__(self, "ring", ring)

    @property
    def dim(self) -> int:
        return self.vertices[0].dim if self.vertices else 0

    def edge_pair(self, tri: tuple) -> SimpleTwoVector:
        a, b, c = (self.vertices[i] for i in tri)
        return SimpleTwoVector(b - a, c - a)

    def to_json_dict(self) -> dict:
        return {
            "ring": self.ring,
            "vertices": [[format_number(c) for c in v.coords] for v in self.vertices],
            "triangles": [[list(t), c] for t, c in self.triangles],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "TriMesh":
        return TriMesh(
            vertices=[Vec([promote(c) for c in row]) for row in data["vertices"]],
            triangles=[(tuple(t), int(c)) for t, c in data["triangles"]],
            ring=data.get("ring", "Z"),
        )


def boundary(mesh: TriMesh) -> dict:
    """The boundary edge chain, fully reduced over the mesh's ring.

    Returns {(a, b): coefficient} with a < b; over Z the coefficient is
    signed (+1 for an edge traversed a->b), over Z2 it is 0/1 and the
    zero entries are dropped.
    """
    chain: dict = {}
    for (i, j, k), c in mesh.triangles:
        for a, b in ((i, j), (j, k), (k, i)):
            if a < b:
                key, orient = (a, b), 1
            else:
                key, orient = (b, a), -1
            chain[key] = chain.get(key, 0) + orient * c
    if mesh.ring == "Z2":
        return {e: v % 2 for e, v in chain.items() if v % 2}
    return {e: v for e, v in chain.items() if v}


def bh_area(mesh: TriMesh, ball: SymPolytope) -> PiTimes:
    """Busemann-Hausdorff area of the chain: sum over triangles of
    |coeff| * (1/2) * density(edge pair); degenerate triangles add 0."""
    density = BHDensity(ball)
    total = F(0)
    for tri, c in mesh.triangles:
        sigma = mesh.edge_pair(tri)
        if sigma.degenerate:
            continue
        total += abs(c) * density.coeff(sigma) / 2
    return PiTimes(total, 1)


def alpha_area(mesh: TriMesh, density: AlphaDensity) -> PiTimes:
    total = F(0)
    for tri, c in mesh.triangles:
        sigma = mesh.edge_pair(tri)
        if sigma.degenerate:
            continue
        total += abs(c) * density.coeff(sigma) / 2
    return PiTimes(total, 1)


def pushforward_area(mesh: TriMesh, f_i: Covector, f_j: Covector) -> Num:
    """Euclidean area of the chain's image under v -> (f_i(v), f_j(v)):
    sum over triangles of |coeff| * (1/2) |det of the image edge pair|."""
    total = F(0)
    for tri, c in mesh.triangles:
        sigma = mesh.edge_pair(tri)
        w = (
            f_i(sigma.v1) * f_j(sigma.v2) - f_i(sigma.v2) * f_j(sigma.v1)
        )
        total += abs(c) * abs(w) / 2
    return total


def alpha_area_by_pushforwards(mesh: TriMesh, density: AlphaDensity) -> PiTimes:
    """The decomposition route: pi * sum_{i<j} p_i p_j * pushforward_area.

    Must agree exactly with :func:`alpha_area`; the two are computed in
    different summation orders as a cross-check.
    """
    fs = density.functionals
    ps = density.weights
    total = F(0)
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            total += ps[i] * ps[j] * pushforward_area(mesh, fs[i], fs[j])
    return PiTimes(total, 1)


# ---------------------------------------------------------------------------
# planar discs and competitor generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarDisc:
    """A convex polygonal disc in a 2-plane with a reference fan
    triangulation of its interior (centroid star), given in plane
    coordinates and embedded through the plane basis."""

    plane: PlaneBasis
    boundary_points: tuple  # (s, t) plane coordinates, counterclockwise

    def __post_init__(self):
        pts = self.boundary_points
        if len(pts) < 3:
            raise GeometryError("a disc boundary needs at least 3 points")
        m = len(pts)
        for i in range(m):
            a, b, c = pts[i], pts[(i + 1) % m], pts[(i + 2) % m]
            turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if turn <= 0:
                raise GeometryError("disc boundary must be strictly convex ccw")

    @property
    def centroid(self) -> tuple:
        m = len(self.boundary_points)
        return (
            sum(p[0] for p in self.boundary_points) / m,
            sum(p[1] for p in self.boundary_points) / m,
        )

    def ambient_vertices(self) -> list:
        out = [self.plane.embed(s, t) for (s, t) in self.boundary_points]
        cs, ct = self.centroid
        out.append(self.plane.embed(cs, ct))
        return out

    def mesh(self, ring: str = "Z", refine: int = 0) -> TriMesh:
        """Fan triangulation from the centroid (vertex m), optionally
        refined by splitting every triangle at its centroid.  Refinement
        adds interior vertices only: boundary edges are untouched, so the
        boundary chain is independent of the refinement level."""
        m = len(self.boundary_points)
        verts = self.ambient_vertices()
        tris = [(i, (i + 1) % m, m) for i in range(m)]
        for _ in range(refine):
            new_tris = []
            for (a, b, c) in tris:
                center = (verts[a] + verts[b] + verts[c]).scaled(F(1, 3))
                d = len(verts)
                verts.append(center)
                new_tris.extend([(a, b, d), (b, c, d), (c, a, d)])
            tris = new_tris
        return TriMesh(verts, [(t, 1) for t in tris], ring=ring)

    def interior_vertex_count(self, refine: int = 0) -> int:
        m = len(self.boundary_points)
        return len(self.mesh(refine=refine).vertices) - m


def tent_competitor(disc: PlanarDisc, apex: Vec, ring: str = "Z") -> TriMesh:
    """Replace the disc's center vertex by an arbitrary apex point.

    Shares the disc mesh's vertex indexing, so the boundary chains agree
    combinatorially by construction.
    """
    base = disc.mesh(ring)
    verts = list(base.vertices)
    verts[-1] = apex
    return TriMesh(verts, base.triangles, ring=ring)


def perturbed_competitor(
    disc: PlanarDisc,
    rng: SplitMix64,
    magnitude: Fraction = F(1, 2),
    coord_bound: int = 4,
    ring: str = "Z",
    refine: int = 1,
) -> TriMesh:
    """Displace every interior vertex of a refined disc triangulation by
    random rational vectors; boundary vertices stay verbatim."""
    base = disc.mesh(ring, refine=refine)
    n_boundary = len(disc.boundary_points)
    verts = list(base.vertices)
    for idx in range(n_boundary, len(verts)):
        offset = Vec(
            [
                F(rng.randint(-coord_bound, coord_bound)) * magnitude
                for _ in range(disc.plane.dim)
            ]
        )
        verts[idx] = verts[idx] + offset
    return TriMesh(verts, base.triangles, ring=ring)


def glue_closed_sheet(
    mesh: TriMesh, center: Vec, scale: Fraction = F(1, 2)
) -> TriMesh:
    """Z2 only: add a small closed tetrahedron surface on fresh vertices.

    A closed sheet has empty Z2 boundary, so the chain's boundary is
    unchanged while its area strictly grows.
    """
    if mesh.ring != "Z2":
        raise ValueError("sheet gluing is a Z2 construction")
    dim = mesh.dim
    base = len(mesh.vertices)
    offsets = [
        [F(1)] + [F(0)] * (dim - 1),
        [F(0), F(1)] + [F(0)] * (dim - 2),
        [F(0), F(0)] + [F(1)] + [F(0)] * (dim - 3) if dim >= 3 else [F(1), F(1)],
        [F(-1)] * 2 + [F(0)] * (dim - 2),
    ]
    new_verts = list(mesh.vertices)
    for off in offsets:
        new_verts.append(center + Vec(off).scaled(scale))
    a, b, c, d = base, base + 1, base + 2, base + 3
    sheet = [((a, b, c), 1), ((a, b, d), 1), ((a, c, d), 1), ((b, c, d), 1)]
    return TriMesh(new_verts, tuple(mesh.triangles) + tuple(sheet), ring="Z2")


# ---------------------------------------------------------------------------
# flat-minimality experiments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    generator: str
    bh_competitor: PiTimes
    bh_disc: PiTimes
    alpha_competitor: PiTimes
    alpha_disc: PiTimes

    @property
    def gap(self) -> PiTimes:
        return self.bh_competitor - self.bh_disc

    def to_json_dict(self) -> dict:
        return {
            "generator": self.generator,
            "bh_competitor": self.bh_competitor.to_json(),
            "bh_disc": self.bh_disc.to_json(),
            "alpha_competitor": self.alpha_competitor.to_json(),
            "alpha_disc": self.alpha_disc.to_json(),
            "gap": self.gap.to_json(),
        }


@dataclass(frozen=True)
class ExperimentReport:
    seed: int
    ring: str
    trials: tuple
    min_gap: Optional[PiTimes]

    @property
    def ok(self) -> bool:
        if self.min_gap is not None and self.min_gap.coeff < 0:
            return False
        for t in self.trials:
            if t.alpha_competitor.coeff > t.bh_competitor.coeff:
                return False
            if t.alpha_disc != t.bh_disc:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ring": self.ring,
            "n_trials": len(self.trials),
            "min_gap": None if self.min_gap is None else self.min_gap.to_json(),
            "trials": [t.to_json_dict() for t in self.trials],
            "ok": self.ok,
            "assumptions": [
                "image containment under coordinate-pair maps is a topological"
                " degree fact; only its area consequence is measured"
            ],
        }


def semi_ellipticity_experiment(
    ball: SymPolytope,
    disc: PlanarDisc,
    trials: int,
    seed: int,
    ring: str = "Z",
    generators: Sequence[str] = ("tent", "perturb"),
) -> ExperimentReport:
    """Generate competitor chains with the disc's boundary and compare
    Busemann-Hausdorff areas; the planar disc must never lose.

    Each trial also records the weighted-density chain values: the
    competitor dominates its own weighted area, and on the disc the
    weighted and Busemann-Hausdorff areas agree exactly.
    """
    from .polytope import section

    if ring not in RINGS:
        raise ValueError(f"ring must be one of {RINGS}")
    rng = SplitMix64(seed)
    alpha = AlphaDensity.from_section(section(ball, disc.plane))
    base = disc.mesh(ring)
    base_boundary = boundary(base)
    bh_disc = bh_area(base, ball)
    alpha_disc = alpha_area(base, alpha)

    records = []
    names = list(generators)
    if ring == "Z2" and "sheet" not in names:
        names.append("sheet")
    for t in range(trials):
        name = names[t % len(names)]
        if name == "tent":
            cs, ct = disc.centroid
            lift = Vec(
                [F(rng.randint(-3, 3)) for _ in range(disc.plane.dim)]
            )
            apex = disc.plane.embed(cs, ct) + lift
            competitor = tent_competitor(disc, apex, ring)
        elif name == "perturb":
            competitor = perturbed_competitor(disc, rng, ring=ring)
        elif name == "sheet":
            competitor = glue_closed_sheet(
                perturbed_competitor(disc, rng, ring="Z2"),
                center=Vec([F(rng.randint(-2, 2)) for _ in range(disc.plane.dim)]),
            )
        else:
            raise ValueError(f"unknown generator {name!r}")
        if boundary(competitor) != base_boundary:
            raise GeometryError(
                f"generator {name!r} changed the boundary chain; aborting trial"
            )
        records.append(
            TrialRecord(
                generator=name,
                bh_competitor=bh_area(competitor, ball),
                bh_disc=bh_disc,
                alpha_competitor=alpha_area(competitor, alpha),
                alpha_disc=alpha_disc,
            )
        )
    min_gap = None
    for r in records:
        if min_gap is None or r.gap < min_gap:
            min_gap = r.gap
    return ExperimentReport(seed=seed, ring=ring, trials=tuple(records), min_gap=min_gap)
