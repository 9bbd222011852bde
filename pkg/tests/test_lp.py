from fractions import Fraction

import pytest

from normcalib.lp import (
    FarkasCertificate,
    LPResult,
    solve_feasibility,
    solve_feasibility_lazy,
)
from normcalib.rng import SplitMix64

F = Fraction


def check_witness(res, a_ub, b_ub, a_eq=(), b_eq=()):
    assert res.feasible
    x = res.witness
    for row, b in zip(a_ub, b_ub):
        assert sum(c * v for c, v in zip(row, x)) <= b
    for row, b in zip(a_eq, b_eq):
        assert sum(c * v for c, v in zip(row, x)) == b


def test_trivial_feasible_no_constraints():
    res = solve_feasibility(3)
    assert res.feasible
    assert res.witness == (0, 0, 0)


def test_simple_box():
    a_ub = [[F(1), F(0)], [F(-1), F(0)], [F(0), F(1)], [F(0), F(-1)]]
    b_ub = [F(1), F(1), F(1), F(1)]
    res = solve_feasibility(2, a_ub, b_ub)
    check_witness(res, a_ub, b_ub)


def test_equality_with_negative_rhs():
    a_eq = [[F(2), F(1)]]
    b_eq = [F(-3)]
    res = solve_feasibility(2, a_eq=a_eq, b_eq=b_eq)
    check_witness(res, [], [], a_eq, b_eq)


def test_infeasible_pair_with_certificate():
    # x <= -1 and -x <= 0 (i.e. x >= 0): empty
    a_ub = [[F(1)], [F(-1)]]
    b_ub = [F(-1), F(0)]
    res = solve_feasibility(1, a_ub, b_ub)
    assert not res.feasible
    cert = res.certificate
    assert all(m >= 0 for m in cert.ineq_mult)
    combo = sum(m * row[0] for m, row in zip(cert.ineq_mult, a_ub))
    rhs = sum(m * b for m, b in zip(cert.ineq_mult, b_ub))
    assert combo == 0 and rhs < 0


def test_infeasible_equalities():
    a_eq = [[F(1), F(1)], [F(1), F(1)]]
    b_eq = [F(1), F(2)]
    res = solve_feasibility(2, a_eq=a_eq, b_eq=b_eq)
    assert not res.feasible
    cert = res.certificate
    combo0 = sum(m * row[0] for m, row in zip(cert.eq_mult, a_eq))
    combo1 = sum(m * row[1] for m, row in zip(cert.eq_mult, a_eq))
    rhs = sum(m * b for m, b in zip(cert.eq_mult, b_eq))
    assert combo0 == combo1 == 0 and rhs < 0


def test_exact_rational_solution():
    # x = 1/3, y = 5/7 forced by equalities
    a_eq = [[F(3), F(0)], [F(0), F(7)]]
    b_eq = [F(1), F(5)]
    res = solve_feasibility(2, a_eq=a_eq, b_eq=b_eq)
    assert res.witness == (F(1, 3), F(5, 7))


def test_degenerate_does_not_cycle():
    # classic Beale-style degeneracy, feasibility form
    a_ub = [
        [F(1, 4), F(-8), F(-1), F(9)],
        [F(1, 2), F(-12), F(-1, 2), F(3)],
        [F(0), F(0), F(1), F(0)],
    ]
    b_ub = [F(0), F(0), F(1)]
    a_eq = [[F(1), F(1), F(1), F(1)]]
    b_eq = [F(1)]
    res = solve_feasibility(4, a_ub, b_ub, a_eq, b_eq)
    check_witness(res, a_ub, b_ub, a_eq, b_eq)


def test_lazy_matches_dense_on_random_instances():
    rng = SplitMix64(404)
    for _ in range(40):
        n = rng.randint(1, 4)
        m = rng.randint(1, 25)
        a_ub = [[F(rng.randint(-5, 5)) for _ in range(n)] for _ in range(m)]
        b_ub = [F(rng.randint(-3, 6)) for _ in range(m)]
        dense = solve_feasibility(n, a_ub, b_ub)
        lazy = solve_feasibility_lazy(n, a_ub, b_ub, batch=4)
        assert dense.feasible == lazy.feasible
        if lazy.feasible:
            check_witness(lazy, a_ub, b_ub)
        else:
            cert = lazy.certificate
            combo = [
                sum(m_ * row[k] for m_, row in zip(cert.ineq_mult, a_ub))
                for k in range(n)
            ]
            rhs = sum(m_ * b for m_, b in zip(cert.ineq_mult, b_ub))
            assert all(c == 0 for c in combo) and rhs < 0


def test_lazy_large_feasible_set():
    # 500 inequality rows around a known feasible point
    rng = SplitMix64(808)
    n = 4
    target = [F(1, 2), F(-1, 3), F(2), F(0)]
    a_ub, b_ub = [], []
    for _ in range(500):
        row = [F(rng.randint(-9, 9)) for _ in range(n)]
        margin = F(rng.randint(0, 5))
        a_ub.append(row)
        b_ub.append(sum(c * x for c, x in zip(row, target)) + margin)
    res = solve_feasibility_lazy(n, a_ub, b_ub)
    check_witness(res, a_ub, b_ub)
