from fractions import Fraction

import pytest

from normcalib.density import (
    EPSILON_K,
    AlphaDensity,
    BHDensity,
    HTDensity,
    enumerate_vertices,
    volume_k,
)
from normcalib.exterior import Covector, SimpleTwoVector, Vec
from normcalib.polytope import GeometryError, PlaneBasis, SymPolytope, section
from normcalib.rng import SplitMix64
from normcalib.sampling import random_plane, random_simple_two_vector, random_sym_polytope

from oracles import oracle_bh_coeff

F = Fraction


def sigma(v1, v2):
    return SimpleTwoVector(Vec(v1), Vec(v2))


def test_epsilon_constants():
    assert EPSILON_K[1].coeff == 2 and EPSILON_K[1].pi_power == 0
    assert EPSILON_K[2].coeff == 1 and EPSILON_K[2].pi_power == 1
    assert EPSILON_K[3].coeff == F(4, 3) and EPSILON_K[3].pi_power == 1


def test_bh_square_case():
    d = BHDensity(SymPolytope.linf(2))
    val = d(sigma([1, 0], [0, 1]))
    assert val.coeff == F(1, 4) and val.pi_power == 1
    assert str(val) == "pi/4"


def test_bh_unimodular_invariance():
    d = BHDensity(SymPolytope.linf(2))
    assert d.coeff(sigma([1, 0], [1, 1])) == F(1, 4)


def test_bh_l1_section():
    d = BHDensity(SymPolytope.l1(3))
    s = sigma([1, 0, 0], [0, 1, 0])
    assert d.coeff(s) == F(1, 2)
    rows = [g.coeffs for g in SymPolytope.l1(3).facets]
    assert d.coeff(s) == oracle_bh_coeff(rows, (1, 0, 0), (0, 1, 0))


def test_bh_degenerate_is_zero():
    d = BHDensity(SymPolytope.linf(3))
    assert d.coeff(sigma([1, 2, 3], [2, 4, 6])) == 0


def test_bh_round_trip_area_identity():
    # bh coeff * A(K) = 1 by construction
    rng = SplitMix64(21)
    for _ in range(25):
        body = random_sym_polytope(rng, 3, 6)
        d = BHDensity(body)
        s = random_simple_two_vector(rng, 3)
        disc = d.unit_disc(s)
        assert d.coeff(s) * disc.area() == 1


def test_bh_homogeneity_exact():
    rng = SplitMix64(33)
    body = random_sym_polytope(rng, 4, 8)
    d = BHDensity(body)
    h = HTDensity(body)
    for _ in range(20):
        s = random_simple_two_vector(rng, 4)
        lam = F(rng.randint(1, 7), rng.randint(1, 5))
        scaled = SimpleTwoVector(s.v1.scaled(lam), s.v2)
        assert d.coeff(scaled) == lam * d.coeff(s)
        assert h.coeff(scaled) == lam * h.coeff(s)
        neg = SimpleTwoVector(s.v1.scaled(-lam), s.v2)
        assert d.coeff(neg) == lam * d.coeff(s)


def test_basis_invariance_under_shear():
    rng = SplitMix64(55)
    body = random_sym_polytope(rng, 3, 7)
    d = BHDensity(body)
    h = HTDensity(body)
    plane = PlaneBasis.coordinate(3)
    a = AlphaDensity.from_section(section(body, plane))
    for _ in range(20):
        s = random_simple_two_vector(rng, 3)
        t = F(rng.randint(-5, 5), rng.randint(1, 3))
        sheared = SimpleTwoVector(s.v1, s.v2 + s.v1.scaled(t))
        assert d.coeff(sheared) == d.coeff(s)
        assert h.coeff(sheared) == h.coeff(s)
        assert a.coeff(sheared) == a.coeff(s)


def test_ht_square_case():
    h = HTDensity(SymPolytope.linf(2))
    val = h(sigma([1, 0], [0, 1]))
    assert val.coeff == 2 and val.pi_power == -1
    assert str(val) == "2/pi"


def test_ht_scaling():
    h = HTDensity(SymPolytope.linf(2))
    assert h.coeff(sigma([2, 0], [0, 1])) == 2 * h.coeff(sigma([1, 0], [0, 1]))


def _circle_norm(m: int) -> SymPolytope:
    # rational tangent directions via the half-angle parametrization
    rows = []
    for j in range(m):
        t = F(j, m)
        den = 1 + t * t
        p = ((1 - t * t) / den, 2 * t / den)
        rows.append([p[0], p[1]])
        rows.append([-p[1], p[0]])
    return SymPolytope(2, rows)


def test_bh_ht_converge_for_polyhedral_disc():
    s = sigma([1, 0], [0, 1])
    errs = []
    for m in (4, 16):
        body = _circle_norm(m)
        bh = float(BHDensity(body)(s))
        ht = float(HTDensity(body)(s))
        assert bh < 1 and ht < 1  # circumscribed / inscribed approximations
        errs.append(max(1 - bh, 1 - ht))
    assert errs[1] < errs[0]
    assert errs[1] < 0.01


def test_alpha_square_case():
    a = AlphaDensity(
        functionals=(Covector([1, 0]), Covector([0, 1])),
        weights=(F(1, 2), F(1, 2)),
    )
    val = a(sigma([1, 0], [0, 1]))
    assert val.coeff == F(1, 4) and val.pi_power == 1


def test_alpha_degenerate_zero():
    a = AlphaDensity(
        functionals=(Covector([1, 0]), Covector([0, 1])),
        weights=(F(1, 2), F(1, 2)),
    )
    assert a.coeff(sigma([3, 5], [3, 5])) == 0


def test_alpha_equals_bh_on_calibrated_plane():
    body = SymPolytope.l1(3)
    plane = PlaneBasis.coordinate(3)
    alpha = AlphaDensity.from_section(section(body, plane))
    bh = BHDensity(body)
    s = SimpleTwoVector(plane.u1, plane.u2)
    assert alpha.coeff(s) == bh.coeff(s)
    # any other basis of the same plane too
    s2 = SimpleTwoVector(plane.u1 + plane.u2.scaled(3), plane.u2.scaled(F(2, 5)))
    assert alpha.coeff(s2) == bh.coeff(s2)


def test_alpha_below_bh_sampled():
    rng = SplitMix64(2718)
    body = random_sym_polytope(rng, 3, 8)
    plane = random_plane(rng, 3)
    alpha = AlphaDensity.from_section(section(body, plane))
    bh = BHDensity(body)
    for _ in range(10_000):
        s = random_simple_two_vector(rng, 3)
        assert alpha.coeff(s) <= bh.coeff(s)


def test_alpha_rejects_bad_weights():
    with pytest.raises(ValueError):
        AlphaDensity(functionals=(Covector([1, 0]),), weights=(F(1, 2),))


# -- volumes -------------------------------------------------------------------

def cube_constraints():
    cons = []
    for i in range(3):
        e = [F(0)] * 3
        e[i] = F(1)
        cons.append((tuple(e), F(1)))
        cons.append((tuple(-c for c in e), F(1)))
    return cons


def test_volume_cube():
    assert volume_k(cube_constraints(), 3) == 8


def test_volume_octahedron():
    import itertools

    cons = [
        (tuple(map(F, signs)), F(1))
        for signs in itertools.product((1, -1), repeat=3)
    ]
    assert volume_k(cons, 3) == F(4, 3)


def test_volume_square_2d():
    cons = [
        ((F(1), F(0)), F(1)),
        ((F(-1), F(0)), F(1)),
        ((F(0), F(1)), F(1)),
        ((F(0), F(-1)), F(1)),
    ]
    assert volume_k(cons, 2) == 4


def test_volume_permutation_invariance():
    base = [
        ((F(-1), F(0), F(0)), F(1)),
        ((F(0), F(-1), F(0)), F(1)),
        ((F(0), F(0), F(-1)), F(1)),
        ((F(1), F(1), F(1)), F(1)),
    ]
    permuted = [
        ((c[1], c[2], c[0]), b) for c, b in base
    ]
    assert volume_k(base, 3) == volume_k(permuted, 3)


def test_volume_unbounded_raises():
    cons = [
        ((F(1), F(0), F(0)), F(1)),
        ((F(-1), F(0), F(0)), F(1)),
        ((F(0), F(1), F(0)), F(1)),
        ((F(0), F(-1), F(0)), F(1)),
        ((F(0), F(0), F(1)), F(1)),
    ]
    with pytest.raises(GeometryError):
        volume_k(cons, 3)


def test_volume_redundant_constraints_ignored():
    cons = cube_constraints() + [((F(1), F(1), F(1)), F(10)), ((F(2), F(0), F(0)), F(2))]
    assert volume_k(cons, 3) == 8
