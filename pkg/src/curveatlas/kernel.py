"""Exact arithmetic substrate: rationals, real quadratic extensions, and
sparse bivariate polynomials with integer coefficients.

Rationals are ``fractions.Fraction`` throughout: it already guarantees the
canonical form we need (positive denominator, gcd(num, den) = 1, structural
equality, hashable).  This module adds the pieces the rest of the package
needs on top of that: exact square roots, quadratic extension elements
a + b*sqrt(m), and polynomial evaluation that stays exact over either field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Mapping, Optional, Union

Rational = Fraction

Scalar = Union[int, Fraction]


class MixedRadicandError(ValueError):
    """Arithmetic between quadratic elements of different radicands."""


def integer_sqrt(n: int) -> Optional[int]:
    """Exact square root of a nonnegative integer, or None if not a square."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def integer_cbrt(n: int) -> int:
    """Floor of the real cube root of n (sign-symmetric for negative n)."""
    if n < 0:
        return -integer_cbrt_ceilneg(-n)
    if n == 0:
        return 0
    # Newton iteration on integers, seeded from the bit length.
    x = 1 << (n.bit_length() // 3 + 1)
    while True:
        y = (2 * x + n // (x * x)) // 3
        if y >= x:
            break
        x = y
    while x * x * x > n:
        x -= 1
    return x


def integer_cbrt_ceilneg(n: int) -> int:
    # helper for negative inputs: -floor(cbrt(-n)) would round toward zero;
    # we want the floor convention only for exactness tests, so round so that
    # integer_cbrt(-8) == -2 and integer_cbrt(-9) == -3.
    r = integer_cbrt(n)
    if r * r * r == n:
        return r
    return r + 1


def rational_sqrt(x: Rational) -> Optional[Rational]:
    """The nonnegative square root of x when x is a square in Q, else None.

    Works on numerator and denominator separately; both must be perfect
    squares of integers (they are coprime, so this is equivalent).
    """
    if x < 0:
        return None
    rn = integer_sqrt(x.numerator)
    if rn is None:
        return None
    rd = integer_sqrt(x.denominator)
    if rd is None:
        return None
    return Fraction(rn, rd)


def is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class QuadRat:
    """Element a + b*sqrt(m) of the real quadratic field Q(sqrt(m)).

    m is a fixed squarefree integer > 1 per value; operations between
    elements of different radicands raise MixedRadicandError.  Plain
    rationals and ints coerce freely (they live in every such field).
    """

    m: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if self.m <= 1 or not is_squarefree(self.m):
            raise ValueError(f"radicand must be squarefree and > 1, got {self.m}")
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _coerce(self, other) -> "QuadRat":
        if isinstance(other, QuadRat):
            if other.m != self.m:
                raise MixedRadicandError(
                    f"mixed radicands {self.m} and {other.m}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRat(self.m, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.m, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat(self.m, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(self.m, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadRat(
            self.m,
            self.a * o.a + self.m * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic element")
        c = self * o.conjugate()
        return QuadRat(self.m, c.a / n, c.b / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return 1 / (self ** (-e))
        out = QuadRat(self.m, Fraction(1), Fraction(0))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadRat):
            if other.m != self.m:
                # equal only if both are actually rational and agree
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.m, self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conjugate(self) -> "QuadRat":
        return QuadRat(self.m, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.m * self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadRat({self.a} + {self.b}*sqrt({self.m}))"

    def __str__(self):
        return f"{self.a}+{self.b}*sqrt({self.m})"


#: Field element: a rational or a quadratic extension element.
FieldElement = Union[int, Fraction, QuadRat]


def conjugate(x: FieldElement) -> FieldElement:
    return x.conjugate() if isinstance(x, QuadRat) else x


class BivarPoly:
    """Sparse polynomial sum c_ij x^i y^j with integer coefficients.

    Immutable; evaluation is exact over Fraction or QuadRat inputs and uses
    nested Horner over the sparse support.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, int]):
        cleaned = {}
        for (i, j), c in terms.items():
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if c != 0:
                cleaned[(i, j)] = int(c)
        self.terms = cleaned

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __call__(self, x: FieldElement, y: FieldElement) -> FieldElement:
        return self.evaluate(x, y)

    def evaluate(self, x: FieldElement, y: FieldElement) -> FieldElement:
        """Horner evaluation: group terms by x-degree, Horner in y inside,
        then Horner in x across (possibly gapped) degrees."""
        if not self.terms:
            return Fraction(0)
        by_x: dict = {}
        for (i, j), c in self.terms.items():
            by_x.setdefault(i, {})[j] = c
        acc = None
        prev_i = None
        for i in sorted(by_x, reverse=True):
            inner = _horner_univariate(by_x[i], y)
            if acc is None:
                acc = inner
            else:
                acc = acc * _power(x, prev_i - i) + inner
            prev_i = i
        if prev_i:
            acc = acc * _power(x, prev_i)
        return acc

    def partial_x(self) -> "BivarPoly":
        return BivarPoly(
            {(i - 1, j): c * i for (i, j), c in self.terms.items() if i > 0}
        )

    def partial_y(self) -> "BivarPoly":
        return BivarPoly(
            {(i, j - 1): c * j for (i, j), c in self.terms.items() if j > 0}
        )

    def specialize_x(self, x0: int) -> dict:
        """Coefficients {j: c} of the univariate polynomial in y at x = x0."""
        out: dict = {}
        for (i, j), c in self.terms.items():
            out[j] = out.get(j, 0) + c * x0**i
        return {j: c for j, c in out.items() if c != 0}

    def degree_y(self) -> int:
        return max((j for (_, j) in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "BivarPoly(0)"
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            s = f"{c:+d}"
            if i:
                s += f"*x^{i}" if i > 1 else "*x"
            if j:
                s += f"*y^{j}" if j > 1 else "*y"
            parts.append(s)
        return "BivarPoly(" + " ".join(parts) + ")"


def _power(x: FieldElement, e: int) -> FieldElement:
    if e == 0:
        return 1
    return x**e


def _horner_univariate(coeffs: Mapping[int, int], y: FieldElement):
    acc = None
    prev_j = None
    for j in sorted(coeffs, reverse=True):
        c = coeffs[j]
        if acc is None:
            acc = c if isinstance(c, Fraction) else Fraction(c)
        else:
            acc = acc * _power(y, prev_j - j) + c
        prev_j = j
    if prev_j:
        acc = acc * _power(y, prev_j)
    return acc
