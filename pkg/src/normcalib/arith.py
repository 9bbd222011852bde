"""Arithmetic layer shared by every module.

Two arithmetic modes exist: exact mode carries `fractions.Fraction`
(ints are promoted on construction), float mode carries `float`.
Identities are asserted in exact mode; sampling sweeps may run in float
mode with tolerances.  Mixing the two inside one computation is a bug,
so public constructors call :func:`check_uniform_mode`.

The circle constant never enters exact computations numerically: every
quantity that is a rational multiple (or rational divided by) pi is
carried as a :class:`PiTimes` value holding the rational coefficient and
the power of pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Num = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)


class ModeMixError(TypeError):
    """Raised when exact rationals and floats meet in one computation."""


def is_exact(x: Num) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def promote(x) -> Num:
    """Normalize an input number: ints become Fractions, floats stay floats."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def check_uniform_mode(values: Iterable[Num]) -> None:
    """Reject collections that mix exact rationals with floats."""
    saw_exact = saw_float = False
    for v in values:
        if isinstance(v, float):
            saw_float = True
        else:
            saw_exact = True
        if saw_exact and saw_float:
            raise ModeMixError("exact rationals and floats mixed in one computation")


def coerce(x, mode: str) -> Num:
    """Bring a scalar into the requested arithmetic mode."""
    if mode == EXACT:
        v = promote(x)
        if isinstance(v, float):
            raise ModeMixError("float input in exact mode")
        return v
    if mode == FLOAT:
        return float(parse_rational(x)) if isinstance(x, str) else float(x)
    raise ValueError(f"unknown mode {mode!r}")


def parse_rational(s: str) -> Fraction:
    """Parse 'p/q' or 'p' strings (whitespace tolerated)."""
    return Fraction(s.strip())


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_number(x: Num) -> str:
    """Lossless serialization: 'p/q' for rationals, 17 significant digits for floats."""
    if isinstance(x, float):
        return repr(x)
    return format_rational(x)


@dataclass(frozen=True)
class PiTimes:
    """A scalar of the form coeff * pi**pi_power with pi_power in {-1, 0, 1}.

    Comparisons and addition are only defined between values of the same
    power (pi > 0, so ordering follows the coefficients); that is all the
    inequality chains here need.
    """

    coeff: Num
    pi_power: int = 1

    def __post_init__(self):
        if self.pi_power not in (-1, 0, 1):
            raise ValueError("pi_power must be -1, 0 or 1")

    def _check(self, other: "PiTimes") -> None:
        if self.pi_power != other.pi_power:
            raise ValueError("incompatible pi powers")

    def __neg__(self) -> "PiTimes":
        return PiTimes(-self.coeff, self.pi_power)

    def __abs__(self) -> "PiTimes":
        return PiTimes(abs(self.coeff), self.pi_power)

    def __add__(self, other: "PiTimes") -> "PiTimes":
        self._check(other)
        return PiTimes(self.coeff + other.coeff, self.pi_power)

    def __sub__(self, other: "PiTimes") -> "PiTimes":
        self._check(other)
        return PiTimes(self.coeff - other.coeff, self.pi_power)

    def scaled(self, s: Num) -> "PiTimes":
        return PiTimes(self.coeff * s, self.pi_power)

    def __lt__(self, other: "PiTimes") -> bool:
        self._check(other)
        return self.coeff < other.coeff

    def __le__(self, other: "PiTimes") -> bool:
        self._check(other)
        return self.coeff <= other.coeff

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    def __float__(self) -> float:
        return float(self.coeff) * math.pi ** self.pi_power

    def __str__(self) -> str:
        if isinstance(self.coeff, float):
            return repr(float(self))
        c = self.coeff
        if self.pi_power == 0 or c == 0:
            return format_rational(c)
        p, q = c.numerator, c.denominator
        if self.pi_power == 1:
            num = "pi" if p == 1 else ("-pi" if p == -1 else f"{p}*pi")
            return num if q == 1 else f"{num}/{q}"
        # pi_power == -1
        den = "pi" if q == 1 else f"({q}*pi)"
        return f"{p}/{den}"

    def to_json(self) -> dict:
        return {"value": format_number(self.coeff), "pi_power": self.pi_power}


def det(rows: Sequence[Sequence[Num]]) -> Num:
    """Determinant by Gaussian elimination; exact for Fraction entries."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    for col in range(n):
        pivot_row = None
        if isinstance(m[col][col], float):
            # partial pivoting for floats
            best = 0.0
            for r in range(col, n):
                if abs(m[r][col]) > best:
                    best = abs(m[r][col])
                    pivot_row = r
        else:
            for r in range(col, n):
                if m[r][col] != 0:
                    pivot_row = r
                    break
        if pivot_row is None:
            return m[0][0] * 0  # zero of the right mode
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign = -sign
        piv = m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            factor = m[r][col] / piv
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    result = m[0][0]
    for i in range(1, n):
        result = result * m[i][i]
    return sign * result


def solve2(a11: Num, a12: Num, b1: Num, a21: Num, a22: Num, b2: Num) -> tuple[Num, Num]:
    """Solve the 2x2 system [[a11,a12],[a21,a22]] x = (b1,b2) by Cramer."""
    d = a11 * a22 - a12 * a21
    if d == 0:
        raise ZeroDivisionError("singular 2x2 system")
    return (b1 * a22 - b2 * a12) / d, (a11 * b2 - a21 * b1) / d


def solve_square(rows: Sequence[Sequence[Num]], rhs: Sequence[Num]):
    """Solve a small square linear system; returns None if singular."""
    n = len(rows)
    m = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        pivot_row = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            return None
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
        piv = m[col][col]
        for r in range(n):
            if r == col or m[r][col] == 0:
                continue
            factor = m[r][col] / piv
            for c in range(col, n + 1):
                m[r][c] -= factor * m[col][c]
    return tuple(m[i][n] / m[i][i] for i in range(n))
