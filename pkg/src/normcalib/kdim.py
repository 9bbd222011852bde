"""Exploratory harness for the k-dimensional coefficient criterion,
k in {2, 3}: the sup-norm embedding of a polytopal norm, evaluation of
antisymmetric coefficient sums against instance volumes, and an
exact-rational LP search for coefficient collections.

For k = 2 the product-of-weights collection is a guaranteed witness; for
k = 3 nothing is known, and a sample-feasible outcome is *never* a
theorem: reports say "sample-feasible"/"sample-infeasible" and carry a
fresh-sample revalidation count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith import Num, det, format_number
from .density import volume_k
from .exterior import Covector
from .lp import FarkasCertificate, solve_feasibility_lazy
from .polytope import GeometryError, PlaneBasis, SymPolytope, section, section_area_int
from .rng import SplitMix64

F = Fraction


@dataclass(frozen=True)
class MuCoefficients:
    """Antisymmetric coefficient table over strictly increasing k-tuples."""

    k: int
    n: int
    values: tuple  # sorted ((tuple, coeff), ...)

    def __init__(self, k: int, n: int, values):
        if k > n:
            raise ValueError("k must not exceed n")
        clean = {}
        for key, val in dict(values).items():
            idx = tuple(key)
            if len(idx) != k or list(idx) != sorted(set(idx)):
                raise ValueError(f"key {key!r} is not a strictly increasing {k}-tuple")
            if idx[0] < 0 or idx[-1] >= n:
                raise ValueError(f"key {key!r} out of range for n = {n}")
            clean[idx] = val
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", tuple(sorted(clean.items())))

    def get(self, idx: tuple) -> Num:
        for key, val in self.values:
            if key == idx:
                return val
        return F(0)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "values": {
                ",".join(map(str, key)): format_number(val) for key, val in self.values
            },
        }


@dataclass(frozen=True)
class KInstance:
    """One test instance: a symmetric polytope K' given by pairs
    |a_i . x| <= b_i (integer data) and functionals with f_i <= 1 on K'."""

    k: int
    constraint_pairs: tuple  # ((coeff tuple of ints, rhs int), ...)
    functionals: tuple  # Covector on R^k, one per index 1..n

    def expanded_rows(self) -> list:
        rows = []
        for a, b in self.constraint_pairs:
            rows.append((a, b))
            rows.append((tuple(-c for c in a), b))
        return rows

    def volume(self) -> Num:
        if self.k == 2:
            # clear denominators: A{|a.x| <= b} = L^2 * A{|(aL/b).x| <= 1}
            big_l = 1
            for _, b in self.constraint_pairs:
                big_l = big_l * b // math.gcd(big_l, b)
            cons = [
                (a[0] * big_l // b, a[1] * big_l // b)
                for a, b in self.constraint_pairs
            ]
            return big_l * big_l * section_area_int(cons)
        return volume_k(self.expanded_rows(), self.k, assume_bounded=True)

    def validate_support(self) -> None:
        """Check f_i <= 1 at every vertex of K' (exact)."""
        from .density import enumerate_vertices

        verts = enumerate_vertices(self.expanded_rows(), self.k, assume_bounded=True)
        for f in self.functionals:
            for v in verts:
                if f(v) > 1:
                    raise GeometryError("functional exceeds 1 on the instance polytope")


def facet_matrix(body: SymPolytope) -> list:
    return [tuple(g.coeffs) for g in body.facets]


def embed_linf(body: SymPolytope) -> list:
    """The isometric embedding x -> (f_1(x), ..., f_n(x)) into the
    sup-norm space, returned as the n x k matrix of facet functionals.

    Verified at the vertices: the image of every vertex has sup norm
    exactly 1 (the gauge of the polytope agrees with the pullback norm).
    """
    rows = facet_matrix(body)
    for v in body.vertices():
        if max(abs(sum(c * x for c, x in zip(row, v))) for row in rows) != 1:
            raise GeometryError("embedding is not isometric at a vertex")
    return rows


def mu_lhs_signed(mu: MuCoefficients, functionals: Sequence) -> Num:
    """sum over tuples of mu_T * det(selected functional rows)."""
    rows = [tuple(f.coeffs) if isinstance(f, Covector) else tuple(f) for f in functionals]
    total = F(0)
    for idx, coeff in mu.values:
        if coeff == 0:
            continue
        total += coeff * det([rows[i] for i in idx])
    return total


def mu_lhs(mu: MuCoefficients, inst: KInstance) -> Num:
    """|sum mu_T det(f_T)|, the left side of the volume inequality."""
    return abs(mu_lhs_signed(mu, inst.functionals))


def product_weight_mu(body: SymPolytope) -> MuCoefficients:
    """The k = 2 witness: |mu_ij| = p_i p_j with p the triangle-fan weight
    of the edge supported by facet i (0 for non-binding facets).

    Each entry carries the sign of det(f_i, f_j) so that the reference
    instance attains equality regardless of the facet storage order; the
    inequality side only sees |mu_ij| and is unaffected.
    """
    if body.dim != 2:
        raise ValueError("product weights are the planar construction")
    polygon = section(body, PlaneBasis.coordinate(2))
    p = {j: F(0) for j in range(len(body.facets))}
    weights = polygon.weights()
    for e, j in enumerate(polygon.facet_index):
        p[j] = weights[e]
    n = len(body.facets)
    rows = facet_matrix(body)
    values = {}
    for i in range(n):
        for j in range(i + 1, n):
            if p[i] and p[j]:
                d = det([rows[i], rows[j]])
                sign = 1 if d > 0 else -1
                values[(i, j)] = sign * p[i] * p[j]
    return MuCoefficients(2, n, values)


# ---------------------------------------------------------------------------
# instance sampling
# ---------------------------------------------------------------------------

def _int_rows_of(body: SymPolytope) -> list:
    rows = []
    for g in body.facets:
        row = []
        for c in g.coeffs:
            f = F(c)
            if f.denominator != 1:
                # clear the denominator jointly with the rhs (|a.x| <= b form)
                return _rational_pairs_of(body)
            row.append(f.numerator)
        rows.append((tuple(row), 1))
    return rows


def _rational_pairs_of(body: SymPolytope) -> list:
    pairs = []
    for g in body.facets:
        fracs = [F(c) for c in g.coeffs]
        big_l = 1
        for f in fracs:
            big_l = big_l * f.denominator // math.gcd(big_l, f.denominator)
        pairs.append((tuple(int(f * big_l) for f in fracs), big_l))
    return pairs


def sample_instance(
    body: SymPolytope, rng: SplitMix64, extra_pairs: int = 2, coord_bound: int = 3
) -> KInstance:
    """K' = K cut by random symmetric half-space pairs, with the facet
    functionals randomly rescaled by nonzero rationals in [-1, 1].

    Keeps vol(K') exactly computable and the support condition valid by
    construction (|c| <= 1 and K' inside K).
    """
    k = body.dim
    pairs = list(_int_rows_of(body))
    for _ in range(extra_pairs):
        while True:
            a = tuple(rng.randint(-coord_bound, coord_bound) for _ in range(k))
            if any(a):
                break
        b = rng.randint(1, 3)
        pairs.append((a, b))
    functionals = []
    for g in body.facets:
        den = rng.randint(1, 4)
        num = rng.randint(1, den)
        c = F(num, den) if rng.randint(0, 1) else F(-num, den)
        functionals.append(Covector([c * x for x in g.coeffs]))
    return KInstance(k=k, constraint_pairs=tuple(pairs), functionals=tuple(functionals))


def reference_instance(body: SymPolytope) -> KInstance:
    """The equality-case instance: K' = K and f_i = f_i^K."""
    return KInstance(
        k=body.dim,
        constraint_pairs=tuple(_int_rows_of(body)),
        functionals=tuple(body.facets),
    )


# ---------------------------------------------------------------------------
# LP search and revalidation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuSearchReport:
    k: int
    n: int
    seed: int
    n_samples: int
    status: str  # "sample-feasible" | "sample-infeasible"
    equality_sign: Optional[int]
    witness: Optional[MuCoefficients]
    certificate: Optional[FarkasCertificate]
    revalidation_samples: int = 0
    revalidation_violations: int = 0

    def to_json_dict(self) -> dict:
        d: dict = {
            "k": self.k,
            "n": self.n,
            "seed": self.seed,
            "n_samples": self.n_samples,
            "status": self.status,
            "note": "sampled search only; a feasible witness is not a theorem",
            "revalidation_samples": self.revalidation_samples,
            "revalidation_violations": self.revalidation_violations,
        }
        if self.equality_sign is not None:
            d["equality_sign"] = self.equality_sign
        if self.witness is not None:
            d["witness"] = self.witness.to_json_dict()
        if self.certificate is not None:
            d["certificate"] = {
                "ineq_mult": [format_number(m) for m in self.certificate.ineq_mult],
                "eq_mult": [format_number(m) for m in self.certificate.eq_mult],
            }
        return d


def revalidate_mu(
    mu: MuCoefficients,
    body: SymPolytope,
    n_samples: int,
    seed: int,
    extra_pairs: int = 2,
) -> int:
    """Count exact violations of mu_lhs <= 1/vol on fresh instances."""
    rng = SplitMix64(seed)
    violations = 0
    for _ in range(n_samples):
        inst = sample_instance(body, rng, extra_pairs=extra_pairs)
        if mu_lhs(mu, inst) * inst.volume() > 1:
            violations += 1
    return violations


def mu_search(
    body: SymPolytope,
    n_samples: int,
    seed: int,
    extra_pairs: int = 2,
    revalidation_samples: int = 0,
) -> MuSearchReport:
    """Exact LP search for coefficients satisfying the sampled volume
    inequalities with equality on the reference instance (both equality
    signs attempted).  Returns a witness valid on every sample, or the
    infeasibility certificate of the sampled system."""
    k = body.dim
    if k not in (2, 3):
        raise ValueError("the search is implemented for k = 2 and k = 3")
    n = len(body.facets)
    tuples = list(itertools.combinations(range(n), k))
    col = {t: i for i, t in enumerate(tuples)}
    rng = SplitMix64(seed)

    ref = reference_instance(body)
    ref_rows = [tuple(f.coeffs) for f in ref.functionals]
    ref_dets = [det([ref_rows[i] for i in t]) for t in tuples]
    ref_bound = 1 / ref.volume()

    instances = [sample_instance(body, rng, extra_pairs=extra_pairs) for _ in range(n_samples)]
    a_ub: list = []
    b_ub: list = []
    for inst in instances:
        rows = [tuple(f.coeffs) for f in inst.functionals]
        dets = [det([rows[i] for i in t]) for t in tuples]
        bound = 1 / inst.volume()
        a_ub.append(dets)
        b_ub.append(bound)
        a_ub.append([-d for d in dets])
        b_ub.append(bound)

    last_certificate = None
    for sign in (1, -1):
        res = solve_feasibility_lazy(
            len(tuples),
            a_ub,
            b_ub,
            a_eq=[ref_dets],
            b_eq=[sign * ref_bound],
        )
        if res.feasible:
            witness = MuCoefficients(
                k, n, {t: res.witness[col[t]] for t in tuples if res.witness[col[t]] != 0}
            )
            violations = 0
            if revalidation_samples:
                violations = revalidate_mu(
                    witness, body, revalidation_samples, seed=rng.next_u64(),
                    extra_pairs=extra_pairs,
                )
            return MuSearchReport(
                k=k,
                n=n,
                seed=seed,
                n_samples=n_samples,
                status="sample-feasible",
                equality_sign=sign,
                witness=witness,
                certificate=None,
                revalidation_samples=revalidation_samples,
                revalidation_violations=violations,
            )
        last_certificate = res.certificate
    return MuSearchReport(
        k=k,
        n=n,
        seed=seed,
        n_samples=n_samples,
        status="sample-infeasible",
        equality_sign=None,
        witness=None,
        certificate=last_certificate,
        revalidation_samples=0,
        revalidation_violations=0,
    )
