"""Exterior-algebra kernel: vectors, covectors, constant-coefficient 2-forms
and k-forms, wedge products, and evaluation on simple k-vectors.

Everything is an immutable value and every operation is a pure function,
so instances can be shared freely across parallel workers.  Coefficients
are exact rationals or floats, never mixed (see :mod:`normcalib.arith`).

Index conventions are 0-based; a 2-form is stored sparsely as a map from
pairs (i, j), i < j, to the coefficient of dx_i ^ dx_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import ModeMixError, Num, check_uniform_mode, det, promote


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions."""


def _as_tuple(values: Iterable) -> tuple:
    t = tuple(promote(v) for v in values)
    check_uniform_mode(t)
    return t


@dataclass(frozen=True)
class Vec:
    """A point/vector of the ambient space, dimension >= 2."""

    coords: tuple

    def __init__(self, coords: Iterable):
        t = _as_tuple(coords)
        if len(t) < 2:
            raise ValueError("ambient dimension must be >= 2")
        object.__setattr__(self, "coords", t)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> Num:
        return self.coords[i]

    def __add__(self, other: "Vec") -> "Vec":
        if len(other.coords) != len(self.coords):
            raise DimensionMismatch("vector dimensions differ")
        return Vec(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Vec") -> "Vec":
        if len(other.coords) != len(self.coords):
            raise DimensionMismatch("vector dimensions differ")
        return Vec(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Vec":
        return Vec(-a for a in self.coords)

    def scaled(self, s) -> "Vec":
        s = promote(s)
        return Vec(s * a for a in self.coords)

    @staticmethod
    def basis(i: int, dim: int) -> "Vec":
        return Vec(Fraction(1 if j == i else 0) for j in range(dim))


@dataclass(frozen=True)
class Covector:
    """A linear function on the ambient space, f(v) = sum_i coeffs[i] v[i]."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", _as_tuple(coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> Num:
        return self.coeffs[i]

    def __call__(self, v) -> Num:
        coords = v.coords if isinstance(v, Vec) else v
        if len(coords) != len(self.coeffs):
            raise DimensionMismatch("covector applied to vector of wrong dimension")
        return sum(c * x for c, x in zip(self.coeffs, coords))

    def __neg__(self) -> "Covector":
        return Covector(-c for c in self.coeffs)

    def scaled(self, s) -> "Covector":
        s = promote(s)
        return Covector(s * c for c in self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


@dataclass(frozen=True)
class SimpleTwoVector:
    """A simple 2-vector v1 ^ v2, stored as the representing pair."""

    v1: Vec
    v2: Vec

    def __post_init__(self):
        if self.v1.dim != self.v2.dim:
            raise DimensionMismatch("v1 and v2 live in different dimensions")

    @property
    def dim(self) -> int:
        return self.v1.dim

    @property
    def degenerate(self) -> bool:
        """True when v1, v2 are linearly dependent (all 2x2 minors vanish)."""
        a, b = self.v1.coords, self.v2.coords
        n = len(a)
        for i in range(n):
            for j in range(i + 1, n):
                if a[i] * b[j] - a[j] * b[i] != 0:
                    return False
        return True

    def minor(self, i: int, j: int) -> Num:
        a, b = self.v1.coords, self.v2.coords
        return a[i] * b[j] - a[j] * b[i]


def _clean_coeffs(dim: int, coeffs: Mapping, k: int) -> dict:
    out = {}
    for key, val in coeffs.items():
        idx = tuple(key)
        if len(idx) != k or any(not isinstance(i, int) for i in idx):
            raise ValueError(f"coefficient key {key!r} is not a {k}-index tuple")
        if list(idx) != sorted(set(idx)):
            raise ValueError(f"coefficient key {key!r} must be strictly increasing")
        if idx[-1] >= dim or idx[0] < 0:
            raise ValueError(f"coefficient key {key!r} out of range for dim {dim}")
        v = promote(val)
        if v != 0:
            out[idx] = v
    check_uniform_mode(out.values())
    return out


@dataclass(frozen=True)
class TwoForm:
    """Constant-coefficient exterior 2-form, sparse over basis dx_i ^ dx_j."""

    dim: int
    items: tuple

    def __init__(self, dim: int, coeffs: Mapping):
        clean = _clean_coeffs(dim, coeffs, 2)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "items", tuple(sorted(clean.items())))
        object.__setattr__(self, "coeffs", clean)

    def __call__(self, sigma: SimpleTwoVector) -> Num:
        return eval_two_form(self, sigma)

    def __add__(self, other: "TwoForm") -> "TwoForm":
        if other.dim != self.dim:
            raise DimensionMismatch("2-form dimensions differ")
        merged = dict(self.coeffs)
        for k, v in other.coeffs.items():
            merged[k] = merged.get(k, 0) + v
        return TwoForm(self.dim, merged)

    def __neg__(self) -> "TwoForm":
        return TwoForm(self.dim, {k: -v for k, v in self.coeffs.items()})

    def scaled(self, s) -> "TwoForm":
        s = promote(s)
        return TwoForm(self.dim, {k: s * v for k, v in self.coeffs.items()})

    def coefficient(self, i: int, j: int) -> Num:
        if i == j:
            return Fraction(0)
        if i < j:
            return self.coeffs.get((i, j), Fraction(0))
        return -self.coeffs.get((j, i), Fraction(0))

    @staticmethod
    def zero(dim: int) -> "TwoForm":
        return TwoForm(dim, {})


@dataclass(frozen=True)
class KForm:
    """Constant-coefficient exterior k-form, k in {2, 3, 4}."""

    k: int
    dim: int
    items: tuple

    def __init__(self, k: int, dim: int, coeffs: Mapping):
        if not 2 <= k <= 4:
            raise ValueError("k must be between 2 and 4")
        clean = _clean_coeffs(dim, coeffs, k)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "items", tuple(sorted(clean.items())))
        object.__setattr__(self, "coeffs", clean)

    def __call__(self, vectors: Sequence[Vec]) -> Num:
        return eval_k_form(self, vectors)


def wedge(f: Covector, g: Covector) -> TwoForm:
    """The wedge product f ^ g, i.e. (f^g)(v, w) = f(v)g(w) - f(w)g(v)."""
    if f.dim != g.dim:
        raise DimensionMismatch("covector dimensions differ")
    coeffs = {}
    for i in range(f.dim):
        for j in range(i + 1, f.dim):
            c = f.coeffs[i] * g.coeffs[j] - f.coeffs[j] * g.coeffs[i]
            if c != 0:
                coeffs[(i, j)] = c
    return TwoForm(f.dim, coeffs)


def eval_two_form(omega: TwoForm, sigma: SimpleTwoVector) -> Num:
    """omega(v1 ^ v2) = sum_{i<j} c_ij (v1_i v2_j - v1_j v2_i)."""
    if omega.dim != sigma.dim:
        raise DimensionMismatch("form and 2-vector dimensions differ")
    a, b = sigma.v1.coords, sigma.v2.coords
    vec_float = isinstance(a[0], float)
    total = 0.0 if vec_float else Fraction(0)
    for (i, j), c in omega.coeffs.items():
        if isinstance(c, float) != vec_float:
            raise ModeMixError("form coefficients and vector entries use different modes")
        total += c * (a[i] * b[j] - a[j] * b[i])
    return total


def planar_wedge_norm(f: Covector, g: Covector) -> Num:
    """|f ^ g| in the Euclidean structure of the plane: |det [f; g]|.

    Only defined in ambient dimension 2, where a 2-form is one number.
    """
    if f.dim != 2 or g.dim != 2:
        raise DimensionMismatch("planar wedge norm needs 2-dimensional covectors")
    return abs(f.coeffs[0] * g.coeffs[1] - f.coeffs[1] * g.coeffs[0])


def planar_wedge(f: Covector, g: Covector) -> Num:
    """Signed planar wedge det [f; g] (the coefficient of dx ^ dy)."""
    if f.dim != 2 or g.dim != 2:
        raise DimensionMismatch("planar wedge needs 2-dimensional covectors")
    return f.coeffs[0] * g.coeffs[1] - f.coeffs[1] * g.coeffs[0]


def eval_k_form(omega: KForm, vectors: Sequence[Vec]) -> Num:
    """Alternating multilinear evaluation via k x k minors.

    (dx_{i_1} ^ ... ^ dx_{i_k})(v_1, ..., v_k) is the determinant of the
    matrix whose (a, b) entry is (v_b)_{i_a}.
    """
    if len(vectors) != omega.k:
        raise ValueError(f"expected {omega.k} vectors, got {len(vectors)}")
    coords = []
    for v in vectors:
        c = v.coords if isinstance(v, Vec) else tuple(promote(x) for x in v)
        if len(c) != omega.dim:
            raise DimensionMismatch("vector dimension differs from form dimension")
        coords.append(c)
    total = Fraction(0) if not isinstance(coords[0][0], float) else 0.0
    for idx, c in omega.coeffs.items():
        minor = det([[coords[b][i] for b in range(omega.k)] for i in idx])
        total += c * minor
    return total
