"""Calibrating 2-forms for polyhedral norms and the polygon inequality
machinery behind them: exact identity checks, mixed-area certificates,
functional reduction, polar-vertex maximization, and an exact-rational
LP search for calibrators.

The calibrator for a plane P is assembled from the section polygon
K = B intersect P: with supporting functionals F_i and triangle-fan
weights p_i, the form is pi * sum_{i<j} p_i p_j F_i ^ F_j.  Internally
the rational part (without the pi prefactor) is stored; evaluations
return PiTimes values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .arith import Num, PiTimes, format_number
from .density import BHDensity
from .exterior import Covector, SimpleTwoVector, TwoForm, Vec, wedge
from .lp import FarkasCertificate, solve_feasibility_lazy
from .polytope import (
    GeometryError,
    PlaneBasis,
    SymPolygon,
    SymPolytope,
    cross2,
    polar_polygon,
    section,
)
from .rng import SplitMix64
from .sampling import random_simple_two_vector

F = Fraction


class CalibrationError(RuntimeError):
    """A constructed calibrator failed its exact equality check."""


# ---------------------------------------------------------------------------
# construction and sampling verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Calibrator:
    """A calibrating 2-form for a plane: the actual form is pi * `form`."""

    form: TwoForm
    plane: PlaneBasis
    polygon: SymPolygon
    ball: SymPolytope

    def value(self, sigma: SimpleTwoVector) -> PiTimes:
        return PiTimes(self.form(sigma), 1)


def build_calibrator(ball: SymPolytope, plane: PlaneBasis) -> Calibrator:
    """Assemble the weighted wedge form from the section of B by the plane
    and verify the equality case on the plane exactly before returning."""
    polygon = section(ball, plane)
    weights = polygon.weights()
    fs = polygon.ambient_support
    form = TwoForm.zero(ball.dim)
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            form = form + wedge(fs[i], fs[j]).scaled(weights[i] * weights[j])
    sigma_p = SimpleTwoVector(plane.u1, plane.u2)
    expected = BHDensity(ball).coeff(sigma_p)
    got = form(sigma_p)
    if got != expected:
        raise CalibrationError(
            "equality case failed on the plane: "
            f"form gives {format_number(got)}, density gives {format_number(expected)}"
        )
    return Calibrator(form=form, plane=plane, polygon=polygon, ball=ball)


@dataclass(frozen=True)
class CalibrationReport:
    """Result of a sampled calibration sweep; violations must stay empty."""

    seed: int
    n_samples: int
    coord_bound: int
    equality_residual: PiTimes
    max_violation: Optional[PiTimes]
    worst_sample: Optional[tuple]
    n_violations: int

    @property
    def ok(self) -> bool:
        no_viol = self.max_violation is None or self.max_violation.coeff <= 0
        return no_viol and self.equality_residual.is_zero

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_samples": self.n_samples,
            "coord_bound": self.coord_bound,
            "equality_residual": self.equality_residual.to_json(),
            "max_violation": None
            if self.max_violation is None
            else self.max_violation.to_json(),
            "worst_sample": None
            if self.worst_sample is None
            else [[format_number(c) for c in v] for v in self.worst_sample],
            "n_violations": self.n_violations,
            "ok": self.ok,
        }


def verify_calibrator(
    calib: Calibrator, n_samples: int, seed: int, coord_bound: int = 10
) -> CalibrationReport:
    """Sample simple 2-vectors with integer coordinates and report the
    largest value of |omega(sigma)| - A(sigma) (must never be positive)
    together with the exact equality residual on the plane.

    For all-integer norms the sweep runs on raw integers (exact), which
    is what makes 10^4-sample sweeps affordable; the generic path covers
    rational facet data.
    """
    from .density import int_facet_rows
    from .polytope import section_area_int
    from .sampling import random_int_pair

    rng = SplitMix64(seed)
    density = BHDensity(calib.ball)
    sigma_p = SimpleTwoVector(calib.plane.u1, calib.plane.u2)
    residual = abs(calib.form(sigma_p)) - density.coeff(sigma_p)

    int_rows = int_facet_rows(calib.ball)
    items = calib.form.items
    dim = calib.ball.dim

    max_violation = None
    worst = None
    n_viol = 0
    for _ in range(n_samples):
        if int_rows is not None:
            v1, v2 = random_int_pair(rng, dim, coord_bound)
            omega = F(0)
            for (i, j), c in items:
                omega += c * (v1[i] * v2[j] - v1[j] * v2[i])
            cons = []
            for row in int_rows:
                a = sum(ci * xi for ci, xi in zip(row, v1))
                b = sum(ci * xi for ci, xi in zip(row, v2))
                if a or b:
                    cons.append((a, b))
            viol = abs(omega) - 1 / section_area_int(cons)
        else:
            s = random_simple_two_vector(rng, dim, coord_bound)
            v1, v2 = s.v1.coords, s.v2.coords
            viol = abs(calib.form(s)) - density.coeff(s)
        if max_violation is None or viol > max_violation:
            max_violation = viol
            worst = (tuple(v1), tuple(v2))
        if viol > 0:
            n_viol += 1
    return CalibrationReport(
        seed=seed,
        n_samples=n_samples,
        coord_bound=coord_bound,
        equality_residual=PiTimes(residual, 1),
        max_violation=None if max_violation is None else PiTimes(max_violation, 1),
        worst_sample=worst,
        n_violations=n_viol,
    )


# ---------------------------------------------------------------------------
# the polygon inequality and its exact identity suite
# ---------------------------------------------------------------------------

def _as_pair(f) -> tuple:
    return tuple(f.coeffs) if isinstance(f, Covector) else (f[0], f[1])


def _validate_inputs(polygon: SymPolygon, fs: Sequence, ps: Sequence) -> tuple:
    pairs = [_as_pair(f) for f in fs]
    if len(pairs) != len(ps):
        raise ValueError("one weight per functional required")
    if any(p < 0 for p in ps):
        raise ValueError("weights must be nonnegative")
    if sum(ps) != 1:
        raise ValueError("weights must sum to 1 exactly")
    for f in pairs:
        for v in polygon.vertices:
            if f[0] * v[0] + f[1] * v[1] > 1:
                raise GeometryError(
                    "functional exceeds 1 at a polygon vertex: not a valid support"
                )
    return pairs


@dataclass(frozen=True)
class PolygonInequalityReport:
    """The two-step inequality |sum| <= sum of abs <= 1/A(K), exactly."""

    lhs_signed: Num
    lhs_abs: Num
    lhs_sum: Num
    bound: Num

    @property
    def triangle_ok(self) -> bool:
        return self.lhs_abs <= self.lhs_sum

    @property
    def bound_ok(self) -> bool:
        return self.lhs_sum <= self.bound

    @property
    def ok(self) -> bool:
        return self.triangle_ok and self.bound_ok

    def to_json_dict(self) -> dict:
        return {
            "lhs_abs": format_number(self.lhs_abs),
            "lhs_sum": format_number(self.lhs_sum),
            "bound": format_number(self.bound),
            "ok": self.ok,
        }


def check_polygon_inequality(
    polygon: SymPolygon, fs: Sequence, ps: Sequence
) -> PolygonInequalityReport:
    """Evaluate |sum p_i p_j f_i ^ f_j| and sum p_i p_j |f_i ^ f_j| for
    functionals bounded by 1 on the polygon, against the bound 1/A(K)."""
    pairs = _validate_inputs(polygon, fs, ps)
    signed = F(0)
    total = F(0)
    n = len(pairs)
    for i in range(n):
        for j in range(i + 1, n):
            w = cross2(pairs[i], pairs[j])
            signed += ps[i] * ps[j] * w
            total += ps[i] * ps[j] * abs(w)
    return PolygonInequalityReport(
        lhs_signed=signed,
        lhs_abs=abs(signed),
        lhs_sum=total,
        bound=1 / polygon.area(),
    )


def lhs_sum(fs: Sequence, ps: Sequence) -> Num:
    """sum_{i<j} p_i p_j |f_i ^ f_j| without any validation."""
    pairs = [_as_pair(f) for f in fs]
    total = F(0)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            total += ps[i] * ps[j] * abs(cross2(pairs[i], pairs[j]))
    return total


@dataclass(frozen=True)
class AreaIdentityReport:
    """A(K) against the pairwise and signed edge-wedge sums."""

    area: Num
    pairwise_sum: Num
    signed_sum: Num

    @property
    def ok(self) -> bool:
        return self.area == self.pairwise_sum == self.signed_sum


def check_area_edge_identity(polygon: SymPolygon) -> AreaIdentityReport:
    """The polygon area equals sum |v_i ^ v_j| equals |sum v_i ^ v_j|
    over the first-half edge vectors, exactly in rational mode."""
    edges = polygon.edge_vectors()
    n = len(edges)
    pairwise = F(0)
    signed = F(0)
    for i in range(n):
        for j in range(i + 1, n):
            w = cross2(edges[i], edges[j])
            pairwise += abs(w)
            signed += w
    return AreaIdentityReport(
        area=polygon.area(), pairwise_sum=pairwise, signed_sum=abs(signed)
    )


@dataclass(frozen=True)
class SupportEdgeIdentityReport:
    """Per-pair identity p_i p_j |f_i ^ f_j| = |v_i ^ v_j| / A(K)^2 and the
    resulting sum value 1/A(K)."""

    pair_ok: bool
    sum_value: Num
    bound: Num

    @property
    def ok(self) -> bool:
        return self.pair_ok and self.sum_value == self.bound


def check_support_edge_identity(polygon: SymPolygon) -> SupportEdgeIdentityReport:
    edges = polygon.edge_vectors()
    fs = polygon.support
    ps = polygon.weights()
    area = polygon.area()
    n = len(edges)
    pair_ok = True
    total = F(0)
    for i in range(n):
        for j in range(i + 1, n):
            lhs = ps[i] * ps[j] * abs(cross2(fs[i], fs[j]))
            rhs = abs(cross2(edges[i], edges[j])) / (area * area)
            if lhs != rhs:
                pair_ok = False
            total += lhs
    return SupportEdgeIdentityReport(pair_ok=pair_ok, sum_value=total, bound=1 / area)


# ---------------------------------------------------------------------------
# mixed-area certificate for the weighted inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedAreaCertificate:
    """Exact certificate that sum p_i p_j |f_i ^ f_j| <= 1/A(K).

    The rescaled polygon K' (edge i scaled by p_i/q_i, zero-weight edges
    dropped) satisfies V(K, K') = A(K) and lhs = A(K')/A(K)^2; Minkowski's
    inequality then bounds A(K') by A(K)."""

    weights: tuple
    reference_weights: tuple
    kept: tuple
    scale: tuple
    kprime: Optional[SymPolygon]
    area: Num
    area_prime: Num
    mixed: Num
    lhs: Num
    minkowski_gap: Num

    @property
    def ok(self) -> bool:
        return (
            self.mixed == self.area
            and self.lhs * self.area * self.area == self.area_prime
            and self.minkowski_gap >= 0
            and self.area_prime <= self.area
        )

    def to_json_dict(self) -> dict:
        return {
            "weights": [format_number(p) for p in self.weights],
            "kept_edges": list(self.kept),
            "area": format_number(self.area),
            "area_prime": format_number(self.area_prime),
            "mixed_area": format_number(self.mixed),
            "lhs": format_number(self.lhs),
            "minkowski_gap": format_number(self.minkowski_gap),
            "ok": self.ok,
        }


def mixed_area_certificate(polygon: SymPolygon, ps: Sequence) -> MixedAreaCertificate:
    """Build and exactly verify the rescaled-polygon certificate for the
    given weights (nonnegative, summing to 1; zero-weight edges reduced
    away first)."""
    ps = tuple(ps)
    if len(ps) != polygon.n_edges:
        raise ValueError("one weight per edge pair required")
    if any(p < 0 for p in ps):
        raise ValueError("weights must be nonnegative")
    if sum(ps) != 1:
        raise ValueError("weights must sum to 1 exactly")
    qs = polygon.weights()
    area = polygon.area()
    kept = tuple(i for i, p in enumerate(ps) if p > 0)
    lhs = lhs_sum([polygon.support[i] for i in kept], [ps[i] for i in kept])

    if len(kept) < 2:
        # a single active functional: the left-hand side is zero
        return MixedAreaCertificate(
            weights=ps,
            reference_weights=qs,
            kept=kept,
            scale=tuple(ps[i] / qs[i] for i in kept),
            kprime=None,
            area=area,
            area_prime=F(0),
            mixed=area,
            lhs=lhs,
            minkowski_gap=F(0),
        )

    lam = {i: ps[i] / qs[i] for i in kept}
    edges = polygon.edge_vectors()
    scaled = [(lam[i] * edges[i][0], lam[i] * edges[i][1]) for i in kept]
    kprime = SymPolygon.from_edge_vectors(scaled)
    area_prime = kprime.area()

    # V(K, K') via the parallel-edge form sum_i h_i l'_i = sum_i lam_i h_i l_i
    mixed = sum(lam[i] * polygon.triangle_area_twice(i) for i in kept)
    from .polytope import mixed_area as general_mixed_area, minkowski_gap

    general = general_mixed_area(polygon, kprime)
    if general != mixed:
        raise CalibrationError("mixed-area routes disagree; internal error")
    gap = minkowski_gap(polygon, kprime)
    return MixedAreaCertificate(
        weights=ps,
        reference_weights=qs,
        kept=kept,
        scale=tuple(lam[i] for i in kept),
        kprime=kprime,
        area=area,
        area_prime=area_prime,
        mixed=mixed,
        lhs=lhs,
        minkowski_gap=gap,
    )


# ---------------------------------------------------------------------------
# reduction and polar-vertex maximization
# ---------------------------------------------------------------------------

def _canonical_sign(pair: tuple) -> tuple:
    for c in pair:
        if c != 0:
            return pair if c > 0 else (-pair[0], -pair[1])
    return pair


def reduce_functionals(fs: Sequence, ps: Sequence) -> tuple:
    """Merge functionals equal up to sign (weights add) and canonicalize
    signs (first nonzero coefficient positive).  Wedge absolute values are
    sign-invariant, so the inequality left-hand side is unchanged."""
    merged: dict = {}
    order = []
    for f, p in zip(fs, ps):
        key = _canonical_sign(_as_pair(f))
        if key not in merged:
            merged[key] = p
            order.append(key)
        else:
            merged[key] += p
    return (
        tuple(Covector(k) for k in order),
        tuple(merged[k] for k in order),
    )


def maximize_over_polar(
    polygon: SymPolygon, fs: Sequence, ps: Sequence, free_index: int
) -> tuple:
    """Exhaustively maximize the inequality left-hand side over placements
    of the free functional at the vertices of the polar polygon.  Returns
    (argmax covector, max value); the maximum over all of K* is attained
    at a vertex because the objective is convex in the free functional."""
    pairs = [_as_pair(f) for f in fs]
    if not 0 <= free_index < len(pairs):
        raise ValueError("free index out of range")
    polar = polar_polygon(polygon)
    best_value = None
    best_vertex = None
    for v in polar.vertices:
        trial = list(pairs)
        trial[free_index] = v
        value = lhs_sum(trial, ps)
        if best_value is None or value > best_value:
            best_value = value
            best_vertex = v
    return Covector(best_vertex), best_value


# ---------------------------------------------------------------------------
# LP search for calibrators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPSearchResult:
    """Outcome of the sampled calibrator LP.

    Feasibility of the sampled LP is necessary but *not* sufficient for a
    true calibrator: the witness only satisfies the sampled constraints.
    Infeasibility, however, certifies that no calibrator exists (the
    sampled constraints already rule it out); the Farkas certificate is
    exact."""

    status: str  # "feasible" | "infeasible"
    n_samples: int
    witness: Optional[TwoForm]
    certificate: Optional[FarkasCertificate]

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def to_json_dict(self) -> dict:
        d: dict = {
            "status": self.status,
            "n_samples": self.n_samples,
            "note": "sampled LP only: feasibility is necessary, not sufficient",
        }
        if self.witness is not None:
            d["witness"] = {
                f"{i},{j}": format_number(c) for (i, j), c in self.witness.items
            }
        if self.certificate is not None:
            d["certificate"] = {
                "ineq_mult": [format_number(m) for m in self.certificate.ineq_mult],
                "eq_mult": [format_number(m) for m in self.certificate.eq_mult],
            }
        return d


def lp_calibrator_search(
    density_coeff: Callable[[SimpleTwoVector], Num],
    plane: PlaneBasis,
    samples: Sequence[SimpleTwoVector],
) -> LPSearchResult:
    """Search for 2-form coefficients c with c(u1 ^ u2) = A(u1 ^ u2) and
    |c(sigma)| <= A(sigma) for every sample, by exact LP feasibility.

    `density_coeff` must return the density value in a fixed scale (the
    rational part for BH or HT); the equality is pinned with the + sign,
    the opposite calibrator being its negation."""
    dim = plane.dim
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    col = {p: k for k, p in enumerate(pairs)}
    n_vars = len(pairs)

    def minor_row(sigma: SimpleTwoVector) -> list:
        return [sigma.minor(i, j) for (i, j) in pairs]

    sigma_p = SimpleTwoVector(plane.u1, plane.u2)
    a_eq = [minor_row(sigma_p)]
    b_eq = [density_coeff(sigma_p)]
    a_ub = []
    b_ub = []
    for s in samples:
        if s.degenerate:
            raise ValueError("degenerate sample passed to the calibrator LP")
        row = minor_row(s)
        bound = density_coeff(s)
        a_ub.append(row)
        b_ub.append(bound)
        a_ub.append([-c for c in row])
        b_ub.append(bound)
    res = solve_feasibility_lazy(n_vars, a_ub, b_ub, a_eq, b_eq)
    if res.feasible:
        coeffs = {p: res.witness[col[p]] for p in pairs if res.witness[col[p]] != 0}
        return LPSearchResult(
            status="feasible",
            n_samples=len(samples),
            witness=TwoForm(dim, coeffs),
            certificate=None,
        )
    return LPSearchResult(
        status="infeasible",
        n_samples=len(samples),
        witness=None,
        certificate=res.certificate,
    )
