"""Exact 2x2 lattice arithmetic.

Everything here is decision-grade: matrices carry Python ints or
``fractions.Fraction`` entries, so determinants, inverses, products and the
two eigenvalue-flavoured predicates (`is_expanding`,
`inverse_norm_below_one`) are computed without any floating point.  The
predicates are algebraic case splits on characteristic polynomials, which
keeps them correct arbitrarily close to the unit circle where a numeric
eigenvalue solve could misclassify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]
Vec2 = tuple[Scalar, Scalar]


@dataclass(frozen=True)
class Mat2:
    """A 2x2 matrix [[a, b], [c, d]] over exact scalars (int or Fraction).

    Integer-entried instances play the role of lattice maps (the M_n and
    Q_n of a Moran system); Fraction-entried instances appear as exact
    inverses and reduced system matrices.
    """

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1, 0, 0, 1)

    @staticmethod
    def scalar(t: Scalar) -> "Mat2":
        return Mat2(t, 0, 0, t)

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Scalar]]) -> "Mat2":
        (a, b), (c, d) = rows
        return Mat2(a, b, c, d)

    @staticmethod
    def from_columns(col1: Vec2, col2: Vec2) -> "Mat2":
        return Mat2(col1[0], col2[0], col1[1], col2[1])

    def rows(self) -> tuple[tuple[Scalar, Scalar], tuple[Scalar, Scalar]]:
        return ((self.a, self.b), (self.c, self.d))

    def entries(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def trace(self) -> Scalar:
        return self.a + self.d

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def is_integral(self) -> bool:
        return all(
            isinstance(e, int) or (isinstance(e, Fraction) and e.denominator == 1)
            for e in self.entries()
        )

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def scale(self, t: Scalar) -> "Mat2":
        return Mat2(self.a * t, self.b * t, self.c * t, self.d * t)

    def apply(self, v: Vec2) -> Vec2:
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def inverse(self) -> "Mat2":
        """Exact inverse with Fraction entries; raises on det == 0."""
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("matrix is singular")
        return Mat2(
            Fraction(self.d, 1) / det,
            Fraction(-self.b, 1) / det,
            Fraction(-self.c, 1) / det,
            Fraction(self.a, 1) / det,
        )

    def as_float_rows(self) -> list[list[float]]:
        return [[float(self.a), float(self.b)], [float(self.c), float(self.d)]]


IDENTITY = Mat2.identity()


def det(m: Mat2) -> Scalar:
    """Exact determinant."""
    return m.det()


def mat_product(matrices: Iterable[Mat2]) -> Mat2:
    """Left-to-right exact product of a nonempty sequence of matrices."""
    mats = list(matrices)
    if not mats:
        raise ValueError("mat_product needs at least one matrix")
    acc = mats[0]
    for m in mats[1:]:
        acc = acc * m
    return acc


def is_expanding(m: Mat2) -> bool:
    """True iff both eigenvalues of m have modulus strictly greater than 1.

    Algebraic test on p(x) = x^2 - t x + d with t = tr(m), d = det(m):
    complex pair (t^2 < 4d) has common modulus sqrt(d), so expansion is
    d > 1; for real eigenvalues both roots must avoid [-1, 1], which is
    p(1) p(-1) > 0 minus the branch where both roots sit inside (-1, 1)
    (there |t| <= 2 and p(+-1) > 0), plus |d| > 1.
    """
    t = m.trace()
    d = m.det()
    if t * t < 4 * d:
        return d > 1
    p1 = 1 - t + d
    pm1 = 1 + t + d
    if abs(d) <= 1 or p1 * pm1 <= 0:
        return False
    return not (p1 > 0 and pm1 > 0 and abs(t) <= 2)


def in_gl2_2z(m: Mat2) -> bool:
    """True iff every entry is an even integer and det(m) != 0."""
    if not m.is_integral():
        return False
    return all(int(e) % 2 == 0 for e in m.entries()) and m.det() != 0


def gram_trace_det(m: Mat2) -> tuple[Scalar, Scalar]:
    """(trace, det) of m^t m, the Gram matrix carrying the singular values."""
    a, b, c, d = m.entries()
    s = a * a + b * b + c * c + d * d
    dd = m.det()
    return s, dd * dd


def inverse_norm_below_one(m: Mat2) -> bool:
    """Exact test for ||m^{-1}|| < 1 (operator norm, Euclidean).

    Equivalent to both eigenvalues of m^t m exceeding 1, i.e. the smallest
    singular value exceeding 1: with s = tr(m^t m) and q(x) the
    characteristic polynomial of m^t m, this is q(1) > 0 and s > 2.
    """
    if m.det() == 0:
        raise ZeroDivisionError("matrix is singular")
    s, det_gram = gram_trace_det(m)
    q1 = 1 - s + det_gram
    return q1 > 0 and s > 2


@dataclass(frozen=True)
class ResidueSet:
    """The n^2 representatives F_n = {0,...,n-1}^2 of Z^2 / n Z^2."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"residue set needs n >= 2, got {self.n}")

    def vectors(self) -> list[Vec2]:
        return [(i, j) for j in range(self.n) for i in range(self.n)]

    def punctured(self) -> list[Vec2]:
        """F_n with the origin removed (n^2 - 1 vectors)."""
        return [v for v in self.vectors() if v != (0, 0)]

    def __len__(self) -> int:
        return self.n * self.n

    def __contains__(self, v: Vec2) -> bool:
        return all(isinstance(x, int) and 0 <= x < self.n for x in v)


def residue_set(n: int) -> ResidueSet:
    """F_n = {(l1, l2): l_i in {0..n-1}}, the standard complete residue grid."""
    return ResidueSet(n)


# --- certified rational bounds -------------------------------------------
#
# Decision paths stay exact, but truncation bounds and scan thresholds need
# rational majorants of irrational norms.  These helpers return Fractions
# verified against the exact quantity by comparison, never by rounding alone.

PI_UPPER = Fraction(355, 113)  # 355/113 > pi


def _sqrt_scaled(x: Fraction) -> tuple[int, int, int]:
    """(floor_sqrt, scaled_value, scale) with scale = q * 2^m chosen so the
    integer square root carries at least 12 significant digits."""
    p, q = x.numerator, x.denominator
    n = p * q
    m = 0
    target_bits = 81  # 10^24 < 2^81
    if n.bit_length() < target_bits:
        m = (target_bits - n.bit_length() + 1) // 2
        n <<= 2 * m
    return math.isqrt(n), n, q << m


def sqrt_upper(x: Scalar) -> Fraction:
    """A rational r with r >= sqrt(x) >= 0, within relative 1e-12 of it."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative input")
    if x == 0:
        return Fraction(0)
    s, n, scale = _sqrt_scaled(x)
    if s * s == n:
        return Fraction(s, scale)
    return Fraction(s + 1, scale)


def sqrt_lower(x: Scalar) -> Fraction:
    """A rational r with 0 <= r <= sqrt(x), within relative 1e-12 of it."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative input")
    if x == 0:
        return Fraction(0)
    s, _, scale = _sqrt_scaled(x)
    return Fraction(s, scale)


def operator_norm_upper(m: Mat2) -> Fraction:
    """Certified rational upper bound for ||m|| (largest singular value)."""
    s, det_gram = gram_trace_det(m)
    disc = s * s - 4 * det_gram
    lam_up = (Fraction(s) + sqrt_upper(disc)) / 2
    return sqrt_upper(lam_up)


def inverse_norm_upper(m: Mat2) -> Fraction:
    """Certified rational upper bound for ||m^{-1}|| = 1/sigma_min(m)."""
    s, det_gram = gram_trace_det(m)
    disc = s * s - 4 * det_gram
    # sigma_min^2 = (s - sqrt(disc))/2, but also det_gram / lambda_max,
    # which stays positive under the rational majorant of lambda_max.
    lam_up = (Fraction(s) + sqrt_upper(disc)) / 2
    sig_min_sq_low = Fraction(det_gram) / lam_up
    direct = (Fraction(s) - sqrt_upper(disc)) / 2
    if direct > sig_min_sq_low:
        sig_min_sq_low = direct
    return sqrt_upper(Fraction(1) / sig_min_sq_low)


def norm_sq(v: Vec2) -> Scalar:
    x, y = v
    return x * x + y * y
