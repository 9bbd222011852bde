"""Scenario execution: turns validated requests into JSON-ready reports.

Status semantics: "ok" means every asserted invariant held; "violation"
means the run finished but found a counterexample (the report carries
the witness).  Malformed inputs raise ScenarioInputError, which the
service maps to HTTP 400 and the CLI to exit code 2.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..arith import PiTimes, coerce, format_number
from ..calibrate import (
    build_calibrator,
    check_area_edge_identity,
    check_polygon_inequality,
    check_support_edge_identity,
    lhs_sum,
    lp_calibrator_search,
    mixed_area_certificate,
    reduce_functionals,
    maximize_over_polar,
    verify_calibrator,
)
from ..density import AlphaDensity, BHDensity, HTDensity
from ..exterior import Covector, SimpleTwoVector, Vec
from ..kdim import mu_search
from ..polytope import (
    GeometryError,
    PlaneBasis,
    SymPolygon,
    SymPolytope,
    polar_polygon,
    section,
)
from ..rng import SplitMix64
from ..sampling import (
    random_plane,
    random_polar_point,
    random_simple_two_vector,
    random_sym_polytope,
    random_symmetric_polygon,
    random_weights,
)
from ..surfaces import PlanarDisc, semi_ellipticity_experiment
from .schemas import (
    CalibrateRequest,
    DensityRequest,
    KdimSearchRequest,
    LpSearchRequest,
    NormSpec,
    PropCheckRequest,
    ScenarioResponse,
    SectionRequest,
    SemiEllipticRequest,
)

F = Fraction


class ScenarioInputError(ValueError):
    """Malformed scenario input: maps to HTTP 400 / exit code 2."""


def _wrap_input_errors(fn):
    def inner(req):
        try:
            return fn(req)
        except (GeometryError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ScenarioInputError):
                raise
            raise ScenarioInputError(str(exc)) from exc

    return inner


def resolve_norm(spec: NormSpec, mode: str = "exact") -> SymPolytope:
    if spec.facets is not None:
        dim = spec.dim if spec.dim is not None else len(spec.facets[0])
        data = {"dim": dim, "facets": spec.facets}
        if spec.vertices is not None:
            data["vertices"] = spec.vertices
        body = SymPolytope.from_json_dict(data)  # cross-validates vertices
        if mode == "float":
            rows = [[float(c) for c in g.coeffs] for g in body.facets]
            return SymPolytope(body.dim, rows)
        return body
    if spec.builtin == "linf":
        body = SymPolytope.linf(spec.dim)
    elif spec.builtin == "l1":
        body = SymPolytope.l1(spec.dim)
    else:
        body = random_sym_polytope(SplitMix64(spec.seed), spec.dim, spec.facet_pairs)
    if mode == "float":
        rows = [[float(c) for c in g.coeffs] for g in body.facets]
        return SymPolytope(body.dim, rows)
    return body


def _parse_vec(row, mode: str) -> Vec:
    return Vec([coerce(c, mode) for c in row])


def _parse_plane(rows, mode: str) -> PlaneBasis:
    return PlaneBasis(_parse_vec(rows[0], mode), _parse_vec(rows[1], mode))


def _norm_meta(spec: NormSpec, body: SymPolytope) -> dict:
    return {
        "spec": spec.model_dump(exclude_none=True),
        "resolved": body.to_json_dict(),
    }


def _scalar(value) -> dict:
    if isinstance(value, PiTimes):
        return value.to_json()
    return {"value": format_number(value), "pi_power": 0}


# ---------------------------------------------------------------------------

@_wrap_input_errors
def run_section(req: SectionRequest) -> ScenarioResponse:
    body = resolve_norm(req.norm, req.mode)
    plane = _parse_plane(req.plane, req.mode)
    polygon = section(body, plane)
    report = {
        "command": "section",
        "mode": req.mode,
        "norm": _norm_meta(req.norm, body),
        "plane": req.plane,
        "polygon": polygon.to_json_dict(),
        "weights": [format_number(p) for p in polygon.weights()],
        "area": format_number(polygon.area()),
        "area_normalization": "euclidean-plane-coordinates",
    }
    return ScenarioResponse(command="section", status="ok", exit_code=0, report=report)


@_wrap_input_errors
def run_density(req: DensityRequest) -> ScenarioResponse:
    body = resolve_norm(req.norm, req.mode)
    sigma = SimpleTwoVector(
        _parse_vec(req.sigma[0], req.mode), _parse_vec(req.sigma[1], req.mode)
    )
    bh = BHDensity(body)(sigma)
    ht = HTDensity(body)(sigma)
    report = {
        "command": "density",
        "mode": req.mode,
        "norm": _norm_meta(req.norm, body),
        "sigma": req.sigma,
        "degenerate": sigma.degenerate,
        "bh": _scalar(bh),
        "ht": _scalar(ht),
        "bh_str": str(bh),
        "ht_str": str(ht),
    }
    if req.plane is not None:
        plane = _parse_plane(req.plane, req.mode)
        alpha = AlphaDensity.from_section(section(body, plane))(sigma)
        report["alpha"] = _scalar(alpha)
        report["alpha_str"] = str(alpha)
    elif req.which == "alpha":
        raise ScenarioInputError("the weighted density needs a plane")
    report["value_str"] = report[f"{req.which}_str"]
    return ScenarioResponse(command="density", status="ok", exit_code=0, report=report)


@_wrap_input_errors
def run_calibrate(req: CalibrateRequest) -> ScenarioResponse:
    body = resolve_norm(req.norm, req.mode)
    plane = _parse_plane(req.plane, req.mode)
    calib = build_calibrator(body, plane)
    result = verify_calibrator(
        calib, n_samples=req.samples, seed=req.seed, coord_bound=req.coord_bound
    )
    report = {
        "command": "calibrate",
        "mode": req.mode,
        "norm": _norm_meta(req.norm, body),
        "plane": req.plane,
        "form": {
            f"{i},{j}": format_number(c) for (i, j), c in calib.form.items
        },
        "pi_prefactor": True,
        "weights": [format_number(p) for p in calib.polygon.weights()],
        "verification": result.to_json_dict(),
    }
    if req.collect_samples:
        rng = SplitMix64(req.seed)
        from ..sampling import random_int_pair
        from ..density import BHDensity as _BH

        density = _BH(body)
        rows = []
        for _ in range(req.samples):
            v1, v2 = random_int_pair(rng, body.dim, req.coord_bound)
            s = SimpleTwoVector(
                Vec([F(c) for c in v1]), Vec([F(c) for c in v2])
            )
            omega = calib.form(s)
            bound = density.coeff(s)
            rows.append(
                {
                    "sigma": [list(map(str, v1)), list(map(str, v2))],
                    "omega": format_number(omega),
                    "density": format_number(bound),
                    "violation": format_number(abs(omega) - bound),
                }
            )
        report["samples"] = rows
    ok = result.ok
    return ScenarioResponse(
        command="calibrate",
        status="ok" if ok else "violation",
        exit_code=0 if ok else 1,
        report=report,
    )


@_wrap_input_errors
def run_prop_check(req: PropCheckRequest) -> ScenarioResponse:
    if req.mode != "exact":
        raise ScenarioInputError("identity checks are exact-mode only")
    rng = SplitMix64(req.seed)
    counts = {
        "area_edge_identity": 0,
        "support_edge_identity": 0,
        "mixed_area_certificate": 0,
        "polygon_inequality": 0,
        "reduction_invariance": 0,
        "polar_vertex_maximality": 0,
    }
    failure = None
    for trial in range(req.random_polygons):
        polygon = random_symmetric_polygon(rng, max_half_edges=req.max_half_edges)
        checks = []
        r1 = check_area_edge_identity(polygon)
        checks.append(("area_edge_identity", r1.ok))
        r2 = check_support_edge_identity(polygon)
        checks.append(("support_edge_identity", r2.ok))
        ps = random_weights(rng, polygon.n_edges, allow_zero=True)
        cert = mixed_area_certificate(polygon, ps)
        checks.append(("mixed_area_certificate", cert.ok))
        polar_verts = list(polar_polygon(polygon).vertices)
        fs = [random_polar_point(rng, polar_verts) for _ in range(req.functional_count)]
        qs = random_weights(rng, req.functional_count)
        ineq = check_polygon_inequality(polygon, fs, qs)
        checks.append(("polygon_inequality", ineq.ok))
        fs_dup = list(fs) + [fs[0]]
        qs_dup = random_weights(rng, req.functional_count + 1)
        before = lhs_sum(fs_dup, qs_dup)
        fs_red, qs_red = reduce_functionals(fs_dup, qs_dup)
        checks.append(("reduction_invariance", lhs_sum(fs_red, qs_red) == before))
        free = rng.randrange(req.functional_count)
        _, best = maximize_over_polar(polygon, fs, qs, free_index=free)
        checks.append(("polar_vertex_maximality", best >= lhs_sum(fs, qs)))
        for name, ok in checks:
            if ok:
                counts[name] += 1
            elif failure is None:
                failure = {
                    "trial": trial,
                    "check": name,
                    "polygon": polygon.to_json_dict(),
                }
    all_ok = failure is None
    report = {
        "command": "prop-check",
        "mode": req.mode,
        "seed": req.seed,
        "n_polygons": req.random_polygons,
        "passes": counts,
        "all_ok": all_ok,
    }
    if failure is not None:
        report["first_failure"] = failure
    return ScenarioResponse(
        command="prop-check",
        status="ok" if all_ok else "violation",
        exit_code=0 if all_ok else 1,
        report=report,
    )


@_wrap_input_errors
def run_semi_elliptic(req: SemiEllipticRequest) -> ScenarioResponse:
    if req.mode != "exact":
        raise ScenarioInputError("the experiment gap check is exact-mode only")
    body = resolve_norm(req.norm, req.mode)
    if req.plane is not None:
        plane = _parse_plane(req.plane, req.mode)
    else:
        plane = random_plane(SplitMix64(req.seed ^ 0x9E3779B9), body.dim)
    disc = PlanarDisc(
        plane=plane,
        boundary_points=tuple(
            (coerce(p[0], req.mode), coerce(p[1], req.mode)) for p in req.disc.points
        ),
    )
    result = semi_ellipticity_experiment(
        body, disc, trials=req.trials, seed=req.seed, ring=req.ring
    )
    report = {
        "command": "semi-elliptic",
        "mode": req.mode,
        "norm": _norm_meta(req.norm, body),
        "plane": [[format_number(c) for c in plane.u1.coords],
                  [format_number(c) for c in plane.u2.coords]],
        "disc": req.disc.points,
        "experiment": result.to_json_dict(),
    }
    return ScenarioResponse(
        command="semi-elliptic",
        status="ok" if result.ok else "violation",
        exit_code=0 if result.ok else 1,
        report=report,
    )


@_wrap_input_errors
def run_lp_search(req: LpSearchRequest) -> ScenarioResponse:
    if req.mode != "exact":
        raise ScenarioInputError("the LP search is exact-mode only")
    body = resolve_norm(req.norm, req.mode)
    plane = _parse_plane(req.plane, req.mode)
    density = BHDensity(body) if req.density == "bh" else HTDensity(body)
    rng = SplitMix64(req.seed)
    samples = [
        random_simple_two_vector(rng, body.dim, req.coord_bound)
        for _ in range(req.samples)
    ]
    result = lp_calibrator_search(density.coeff, plane, samples)
    report = {
        "command": "lp-search",
        "mode": req.mode,
        "norm": _norm_meta(req.norm, body),
        "plane": req.plane,
        "density": req.density,
        "seed": req.seed,
        "lp": result.to_json_dict(),
    }
    # an infeasible sampled LP for BH would contradict the guarantee; for
    # HT it is a legitimate finding (the density need not be convex)
    bad = (req.density == "bh") and not result.feasible
    return ScenarioResponse(
        command="lp-search",
        status="violation" if bad else "ok",
        exit_code=1 if bad else 0,
        report=report,
    )


@_wrap_input_errors
def run_kdim_search(req: KdimSearchRequest) -> ScenarioResponse:
    if req.mode != "exact":
        raise ScenarioInputError("the coefficient search is exact-mode only")
    body = resolve_norm(req.body, req.mode)
    if body.dim not in (2, 3):
        raise ScenarioInputError("the search body must live in dimension 2 or 3")
    result = mu_search(
        body,
        n_samples=req.samples,
        seed=req.seed,
        extra_pairs=req.extra_pairs,
        revalidation_samples=req.revalidation_samples,
    )
    from ..density import EPSILON_K

    report = {
        "command": "kdim-search",
        "mode": req.mode,
        "body": _norm_meta(req.body, body),
        "epsilon_k": str(EPSILON_K[body.dim]),
        "search": result.to_json_dict(),
    }
    bad = result.revalidation_violations > 0
    return ScenarioResponse(
        command="kdim-search",
        status="violation" if bad else "ok",
        exit_code=1 if bad else 0,
        report=report,
    )
