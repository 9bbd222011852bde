from fractions import Fraction

import pytest

from normcalib.calibrate import (
    CalibrationError,
    build_calibrator,
    check_area_edge_identity,
    check_polygon_inequality,
    check_support_edge_identity,
    lhs_sum,
    lp_calibrator_search,
    maximize_over_polar,
    mixed_area_certificate,
    reduce_functionals,
)
from normcalib.density import BHDensity, HTDensity
from normcalib.exterior import Covector, SimpleTwoVector, TwoForm, Vec
from normcalib.polytope import (
    GeometryError,
    PlaneBasis,
    SymPolygon,
    SymPolytope,
    halfplane_intersection,
)
from normcalib.rng import SplitMix64
from normcalib.sampling import (
    random_plane,
    random_polar_point,
    random_simple_two_vector,
    random_sym_polytope,
    random_symmetric_polygon,
    random_weights,
)

F = Fraction

SQUARE = halfplane_intersection([(F(1), F(0)), (F(0), F(1))])


def test_build_calibrator_square_2d():
    calib = build_calibrator(SymPolytope.linf(2), PlaneBasis.coordinate(2))
    assert calib.form == TwoForm(2, {(0, 1): F(1, 4)})


def test_build_calibrator_square_in_r3():
    # z-facets do not bound the section edges; same form as in the plane
    calib = build_calibrator(SymPolytope.linf(3), PlaneBasis.coordinate(3))
    assert calib.form == TwoForm(3, {(0, 1): F(1, 4)})


def test_calibrator_equality_on_skewed_basis():
    calib = build_calibrator(SymPolytope.linf(2), PlaneBasis.coordinate(2))
    s = SimpleTwoVector(Vec([1, 0]), Vec([1, 1]))
    assert calib.form(s) == F(1, 4)
    assert BHDensity(calib.ball).coeff(s) == F(1, 4)


def test_verify_square_calibrator_r3():
    from normcalib.calibrate import verify_calibrator

    calib = build_calibrator(SymPolytope.linf(3), PlaneBasis.coordinate(3))
    report = verify_calibrator(calib, n_samples=2000, seed=7)
    assert report.ok
    assert report.equality_residual.is_zero
    assert report.max_violation.coeff <= 0
    assert report.n_violations == 0


def test_verify_missing_coordinate_sample():
    calib = build_calibrator(SymPolytope.linf(3), PlaneBasis.coordinate(3))
    s = SimpleTwoVector(Vec([1, 0, 0]), Vec([0, 0, 1]))
    assert calib.form(s) == 0
    assert BHDensity(calib.ball).coeff(s) > 0


def test_verify_empty_report():
    from normcalib.calibrate import verify_calibrator

    calib = build_calibrator(SymPolytope.linf(3), PlaneBasis.coordinate(3))
    report = verify_calibrator(calib, n_samples=0, seed=1)
    assert report.max_violation is None
    assert report.equality_residual.is_zero


def test_verify_report_deterministic():
    from normcalib.calibrate import verify_calibrator

    calib = build_calibrator(SymPolytope.l1(3), PlaneBasis.coordinate(3))
    r1 = verify_calibrator(calib, n_samples=200, seed=42).to_json_dict()
    r2 = verify_calibrator(calib, n_samples=200, seed=42).to_json_dict()
    assert r1 == r2


# -- inequality chain ----------------------------------------------------------

def test_polygon_inequality_equality_case():
    report = check_polygon_inequality(SQUARE, SQUARE.support, SQUARE.weights())
    assert report.ok
    assert report.lhs_sum == report.bound == F(1, 4)
    assert report.lhs_abs == report.lhs_sum


def test_polygon_inequality_single_functional():
    report = check_polygon_inequality(SQUARE, [Covector([1, 0])], [F(1)])
    assert report.lhs_sum == 0
    assert report.ok


def test_polygon_inequality_scaled_functionals():
    fs = [(F(c0) / 2, F(c1) / 2) for (c0, c1) in SQUARE.support]
    report = check_polygon_inequality(SQUARE, fs, SQUARE.weights())
    assert report.lhs_sum == F(1, 4) / 4
    assert report.ok


def test_polygon_inequality_rejects_bad_support():
    with pytest.raises(GeometryError):
        check_polygon_inequality(SQUARE, [Covector([2, 0]), Covector([0, 1])], [F(1, 2), F(1, 2)])


def test_polygon_inequality_random_from_polar():
    rng = SplitMix64(314)
    for _ in range(100):
        k = random_symmetric_polygon(rng, max_half_edges=6)
        from normcalib.polytope import polar_polygon

        polar_verts = list(polar_polygon(k).vertices)
        n = rng.randint(1, 6)
        fs = [random_polar_point(rng, polar_verts) for _ in range(n)]
        ps = random_weights(rng, n)
        report = check_polygon_inequality(k, fs, ps)
        assert report.ok


def test_area_edge_identity_square_and_hexagon():
    r = check_area_edge_identity(SQUARE)
    assert r.ok and r.area == 4
    hexagon = SymPolygon.from_vertices(
        [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]
    )
    assert check_area_edge_identity(hexagon).ok


def test_support_edge_identity_square():
    r = check_support_edge_identity(SQUARE)
    assert r.ok
    assert r.sum_value == F(1, 4)


def test_identities_random_fuzz():
    rng = SplitMix64(1618)
    for _ in range(200):
        k = random_symmetric_polygon(rng)
        assert check_area_edge_identity(k).ok
        assert check_support_edge_identity(k).ok


# -- mixed-area certificate ------------------------------------------------------

def test_certificate_equality_case():
    cert = mixed_area_certificate(SQUARE, SQUARE.weights())
    assert cert.ok
    assert cert.kprime is not None
    assert set(cert.kprime.vertices) == set(SQUARE.vertices)
    assert cert.lhs == F(1, 4)
    assert cert.minkowski_gap == 0


def test_certificate_square_uneven_weights():
    cert = mixed_area_certificate(SQUARE, (F(3, 4), F(1, 4)))
    assert cert.ok
    assert cert.scale in ((F(3, 2), F(1, 2)), (F(1, 2), F(3, 2)))
    assert cert.area == 4
    assert cert.mixed == 4
    assert cert.area_prime == 3
    assert cert.lhs == F(3, 16)


def test_certificate_zero_weight_reduces():
    hexagon = SymPolygon.from_vertices(
        [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]
    )
    cert = mixed_area_certificate(hexagon, (F(1, 2), F(1, 2), F(0)))
    assert cert.kept == (0, 1)
    assert cert.ok


def test_certificate_single_positive_weight():
    cert = mixed_area_certificate(SQUARE, (F(1), F(0)))
    assert cert.kprime is None
    assert cert.lhs == 0
    assert cert.ok


def test_certificate_random_fuzz():
    rng = SplitMix64(2025)
    for _ in range(200):
        k = random_symmetric_polygon(rng, max_half_edges=6)
        ps = random_weights(rng, k.n_edges, allow_zero=True)
        cert = mixed_area_certificate(k, ps)
        assert cert.ok


# -- reduction and polar maximization ---------------------------------------------

def test_reduce_merges_equal_functionals():
    f = Covector([1, 2])
    fs, ps = reduce_functionals([f, f], [F(1, 3), F(2, 3)])
    assert fs == (f,)
    assert ps == (F(1),)


def test_reduce_merges_sign_flipped():
    f = Covector([1, -2])
    fs, ps = reduce_functionals([f, -f], [F(1, 4), F(3, 4)])
    assert len(fs) == 1
    assert ps == (F(1),)


def test_reduce_distinct_unchanged():
    fs_in = [Covector([1, 0]), Covector([0, 1])]
    fs, ps = reduce_functionals(fs_in, [F(1, 2), F(1, 2)])
    assert list(fs) == fs_in
    assert ps == (F(1, 2), F(1, 2))


def test_reduce_preserves_lhs():
    rng = SplitMix64(606)
    for _ in range(100):
        k = random_symmetric_polygon(rng, max_half_edges=5)
        from normcalib.polytope import polar_polygon

        polar_verts = list(polar_polygon(k).vertices)
        n = rng.randint(2, 6)
        fs = []
        for _ in range(n):
            f = random_polar_point(rng, polar_verts)
            if rng.randint(0, 1):
                f = -f
            fs.append(f)
        # duplicate one entry to force a merge
        fs.append(fs[0])
        ps = random_weights(rng, n + 1)
        before = lhs_sum(fs, ps)
        fs2, ps2 = reduce_functionals(fs, ps)
        assert lhs_sum(fs2, ps2) == before
        assert sum(ps2) == 1


def test_maximize_over_polar_square():
    fs = [Covector([1, 0]), Covector([1, 0])]
    best, value = maximize_over_polar(SQUARE, fs, (F(1, 2), F(1, 2)), free_index=1)
    assert tuple(best.coeffs) in ((0, 1), (0, -1))
    assert value == F(1, 4)


def test_maximize_over_polar_dominates_interior():
    rng = SplitMix64(7001)
    from normcalib.polytope import polar_polygon

    for _ in range(50):
        k = random_symmetric_polygon(rng, max_half_edges=5)
        polar_verts = list(polar_polygon(k).vertices)
        n = rng.randint(2, 5)
        fs = [random_polar_point(rng, polar_verts) for _ in range(n)]
        ps = random_weights(rng, n)
        idx = rng.randrange(n)
        _, best_value = maximize_over_polar(k, fs, ps, free_index=idx)
        assert best_value >= lhs_sum(fs, ps)


# -- LP search ----------------------------------------------------------------------

def test_lp_search_linf_r3_feasible():
    rng = SplitMix64(99)
    body = SymPolytope.linf(3)
    plane = PlaneBasis.coordinate(3)
    density = BHDensity(body)
    samples = [random_simple_two_vector(rng, 3) for _ in range(200)]
    result = lp_calibrator_search(density.coeff, plane, samples)
    assert result.feasible
    # the explicit construction satisfies every sampled constraint
    explicit = build_calibrator(body, plane).form
    for s in samples:
        assert abs(explicit(s)) <= density.coeff(s)
    # and so does the LP witness
    for s in samples:
        assert abs(result.witness(s)) <= density.coeff(s)
    sig = SimpleTwoVector(plane.u1, plane.u2)
    assert result.witness(sig) == density.coeff(sig)


def test_lp_search_equality_only():
    body = SymPolytope.linf(3)
    plane = PlaneBasis.coordinate(3)
    result = lp_calibrator_search(BHDensity(body).coeff, plane, [])
    assert result.feasible


def test_lp_search_feasible_with_plane_in_samples():
    # sampling the calibrated plane itself must not break feasibility,
    # and the explicit construction remains a witness
    rng = SplitMix64(321)
    body = random_sym_polytope(rng, 3, 7)
    plane = random_plane(rng, 3)
    density = BHDensity(body)
    samples = [SimpleTwoVector(plane.u1, plane.u2)] + [
        random_simple_two_vector(rng, 3) for _ in range(60)
    ]
    result = lp_calibrator_search(density.coeff, plane, samples)
    assert result.feasible
    explicit = build_calibrator(body, plane).form
    for s in samples:
        assert abs(explicit(s)) <= density.coeff(s)


def test_lp_search_rejects_degenerate_samples():
    body = SymPolytope.linf(3)
    plane = PlaneBasis.coordinate(3)
    bad = SimpleTwoVector(Vec([1, 2, 3]), Vec([2, 4, 6]))
    with pytest.raises(ValueError):
        lp_calibrator_search(BHDensity(body).coeff, plane, [bad])


def test_lp_search_ht_probe_runs():
    # exploratory HT probe: status is recorded, no assertion on feasibility
    rng = SplitMix64(12)
    body = random_sym_polytope(rng, 4, 6)
    plane = random_plane(rng, 4)
    density = HTDensity(body)
    samples = [random_simple_two_vector(rng, 4) for _ in range(40)]
    result = lp_calibrator_search(density.coeff, plane, samples)
    assert result.status in ("feasible", "infeasible")
    if not result.feasible:
        assert result.certificate is not None


def test_random_norm_calibrators_verify():
    rng = SplitMix64(555)
    for _ in range(5):
        body = random_sym_polytope(rng, 3, 8)
        plane = random_plane(rng, 3)
        calib = build_calibrator(body, plane)
        from normcalib.calibrate import verify_calibrator

        report = verify_calibrator(calib, n_samples=300, seed=rng.next_u64())
        assert report.ok
