"""Exact-rational linear-programming feasibility.

The core is a dense phase-1 simplex over Fractions with Bland's rule, so
there are no tolerances anywhere: a feasible outcome carries a witness
that satisfies every constraint exactly, an infeasible outcome carries a
Farkas certificate (nonnegative multipliers for the inequalities, free
multipliers for the equalities, combining to 0 = negative), re-verified
against the original rows before being returned.

Problem form:  find x in R^n  with  A_ub x <= b_ub  and  A_eq x = b_eq.
Variables are free; the solver splits them into differences of
nonnegatives internally.

For constraint sets in the thousands the dense tableau is too slow, so
:func:`solve_feasibility_lazy` grows an active subset of the inequality
rows, checking candidate witnesses against all rows by exact substitution
between rounds; results are identical, only faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

F = Fraction


class LPError(RuntimeError):
    """Internal solver failure (certificate failed its own verification)."""


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers proving infeasibility: ineq_mult >= 0, eq_mult free,
    sum_i ineq_mult[i] * A_ub[i] + sum_j eq_mult[j] * A_eq[j] = 0 while the
    same combination of right-hand sides is negative."""

    ineq_mult: tuple
    eq_mult: tuple


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    witness: Optional[tuple] = None
    certificate: Optional[FarkasCertificate] = None


def _verify_witness(witness, a_ub, b_ub, a_eq, b_eq) -> bool:
    for row, b in zip(a_ub, b_ub):
        if sum(c * x for c, x in zip(row, witness)) > b:
            return False
    for row, b in zip(a_eq, b_eq):
        if sum(c * x for c, x in zip(row, witness)) != b:
            return False
    return True


def _verify_certificate(cert, a_ub, b_ub, a_eq, b_eq, n_vars) -> bool:
    if any(m < 0 for m in cert.ineq_mult):
        return False
    combo = [F(0)] * n_vars
    rhs = F(0)
    for m, row, b in zip(cert.ineq_mult, a_ub, b_ub):
        if m == 0:
            continue
        for k in range(n_vars):
            combo[k] += m * row[k]
        rhs += m * b
    for m, row, b in zip(cert.eq_mult, a_eq, b_eq):
        if m == 0:
            continue
        for k in range(n_vars):
            combo[k] += m * row[k]
        rhs += m * b
    return all(c == 0 for c in combo) and rhs < 0


def solve_feasibility(
    n_vars: int,
    a_ub: Sequence[Sequence[F]] = (),
    b_ub: Sequence[F] = (),
    a_eq: Sequence[Sequence[F]] = (),
    b_eq: Sequence[F] = (),
) -> LPResult:
    """Dense exact phase-1 simplex with Bland's rule."""
    a_ub = [list(map(F, r)) for r in a_ub]
    b_ub = [F(b) for b in b_ub]
    a_eq = [list(map(F, r)) for r in a_eq]
    b_eq = [F(b) for b in b_eq]
    rows = []
    rhs = []
    row_kind = []  # ("ub"|"eq", original index, sign flip)
    for i, (r, b) in enumerate(zip(a_ub, b_ub)):
        rows.append(list(r))
        rhs.append(b)
        row_kind.append(("ub", i, 1))
    for j, (r, b) in enumerate(zip(a_eq, b_eq)):
        rows.append(list(r))
        rhs.append(b)
        row_kind.append(("eq", j, 1))
    m = len(rows)
    if m == 0:
        return LPResult(feasible=True, witness=tuple(F(0) for _ in range(n_vars)))

    # columns: x+ (n), x- (n), slack (one per ub row), artificial (one per row)
    n_slack = len(a_ub)
    n_struct = 2 * n_vars + n_slack
    ncols = n_struct + m
    tab = []
    for r in range(m):
        sign = 1
        if rhs[r] < 0:
            sign = -1
        kind, orig, _ = row_kind[r]
        row_kind[r] = (kind, orig, sign)
        row = [F(0)] * (ncols + 1)
        for k in range(n_vars):
            row[k] = sign * rows[r][k]
            row[n_vars + k] = -sign * rows[r][k]
        if kind == "ub":
            row[2 * n_vars + orig] = F(sign)
        row[n_struct + r] = F(1)
        row[ncols] = sign * rhs[r]
        tab.append(row)

    basis = [n_struct + r for r in range(m)]
    # phase-1 objective: minimize sum of artificials; reduced costs z_j - c_j
    obj = [F(0)] * (ncols + 1)
    for r in range(m):
        for c in range(ncols + 1):
            obj[c] += tab[r][c]
    for r in range(m):
        obj[n_struct + r] -= F(1)

    max_iter = 20000
    for _ in range(max_iter):
        # Bland: entering = smallest column with positive reduced cost
        enter = -1
        for c in range(ncols):
            if obj[c] > 0:
                enter = c
                break
        if enter < 0:
            break
        # ratio test, Bland ties by smallest basis variable
        leave = -1
        best = None
        for r in range(m):
            if tab[r][enter] > 0:
                ratio = tab[r][ncols] / tab[r][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[r] < basis[leave]
                ):
                    best = ratio
                    leave = r
        if leave < 0:
            raise LPError("phase-1 objective unbounded; should be impossible")
        piv = tab[leave][enter]
        prow = tab[leave]
        if piv != 1:
            for c in range(ncols + 1):
                prow[c] /= piv
        for r in range(m):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                row = tab[r]
                for c in range(ncols + 1):
                    row[c] -= f * prow[c]
        if obj[enter] != 0:
            f = obj[enter]
            for c in range(ncols + 1):
                obj[c] -= f * prow[c]
        basis[leave] = enter
    else:
        raise LPError("simplex iteration limit exceeded")

    value = obj[ncols]
    if value == 0:
        x = [F(0)] * n_vars
        for r in range(m):
            if basis[r] < n_vars:
                x[basis[r]] += tab[r][ncols]
            elif basis[r] < 2 * n_vars:
                x[basis[r] - n_vars] -= tab[r][ncols]
        witness = tuple(x)
        if not _verify_witness(witness, a_ub, b_ub, a_eq, b_eq):
            raise LPError("witness failed exact verification")
        return LPResult(feasible=True, witness=witness)

    # infeasible: simplex multipliers live in the objective row under the
    # artificial columns (y_r = obj[art_r] + 1); map back through row signs
    ineq_mult = [F(0)] * len(a_ub)
    eq_mult = [F(0)] * len(a_eq)
    for r in range(m):
        y = obj[n_struct + r] + 1
        kind, orig, sign = row_kind[r]
        if kind == "ub":
            ineq_mult[orig] = -sign * y
        else:
            eq_mult[orig] = -sign * y
    cert = FarkasCertificate(tuple(ineq_mult), tuple(eq_mult))
    if not _verify_certificate(cert, a_ub, b_ub, a_eq, b_eq, n_vars):
        raise LPError("Farkas certificate failed exact verification")
    return LPResult(feasible=False, certificate=cert)


def solve_feasibility_lazy(
    n_vars: int,
    a_ub: Sequence[Sequence[F]] = (),
    b_ub: Sequence[F] = (),
    a_eq: Sequence[Sequence[F]] = (),
    b_eq: Sequence[F] = (),
    batch: int = 32,
) -> LPResult:
    """Active-set wrapper: identical answers, small tableaus.

    Solves with the equalities plus a growing subset of inequality rows;
    between rounds the candidate witness is substituted into every
    inequality exactly and the most violated rows join the active set.
    """
    a_ub = [list(map(F, r)) for r in a_ub]
    b_ub = [F(b) for b in b_ub]
    active: list[int] = []
    in_active = set()
    while True:
        res = solve_feasibility(
            n_vars,
            [a_ub[i] for i in active],
            [b_ub[i] for i in active],
            a_eq,
            b_eq,
        )
        if not res.feasible:
            ineq_mult = [F(0)] * len(a_ub)
            for pos, i in enumerate(active):
                ineq_mult[i] = res.certificate.ineq_mult[pos]
            cert = FarkasCertificate(tuple(ineq_mult), res.certificate.eq_mult)
            if not _verify_certificate(cert, a_ub, b_ub, a_eq, b_eq, n_vars):
                raise LPError("lifted Farkas certificate failed verification")
            return LPResult(feasible=False, certificate=cert)
        witness = res.witness
        violations = []
        for i, (row, b) in enumerate(zip(a_ub, b_ub)):
            if i in in_active:
                continue
            excess = sum(c * x for c, x in zip(row, witness)) - b
            if excess > 0:
                violations.append((excess, i))
        if not violations:
            return LPResult(feasible=True, witness=witness)
        violations.sort(key=lambda t: (-t[0], t[1]))
        for _, i in violations[:batch]:
            active.append(i)
            in_active.add(i)
