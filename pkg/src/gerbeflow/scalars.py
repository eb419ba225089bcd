"""Exact scalar arithmetic for operator entries.

Every exact matrix entry in this package is a value of the form

    (a + b*sqrt(2)) * e^(2*pi*i*q)        a, b, q rational

which closes under multiplication and covers everything the exact
checks need: integers and rationals (ladder/loop operators), +-sqrt(2)
(Clifford generators on the unit spinor basis) and exact circle phases
(charge-diagonal transition functions).  Addition is defined only when
both operands carry the same phase ray; the exact verification paths
never need more, and mixed sums raise loudly instead of degrading to
floats silently.

Canonical form: q is reduced into [0, 1/2) with any sign folded into the
magnitude, so equality is structural.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Union

SQRT2 = 2 ** 0.5

Rational = Union[int, Fraction]


class InexactAdditionError(ArithmeticError):
    """Raised when two exact scalars with different phase rays are added."""


class ExactScalar:
    __slots__ = ("a", "b", "q")

    def __init__(self, a: Rational = 0, b: Rational = 0, q: Rational = 0):
        a = Fraction(a)
        b = Fraction(b)
        q = Fraction(q) % 1
        if a == 0 and b == 0:
            q = Fraction(0)
        elif q >= Fraction(1, 2):
            # fold e^(pi*i) into the magnitude sign
            q -= Fraction(1, 2)
            a, b = -a, -b
        self.a = a
        self.b = b
        self.q = q

    # -- constructors ------------------------------------------------

    @classmethod
    def from_rational(cls, r: Rational) -> "ExactScalar":
        return cls(r, 0, 0)

    @classmethod
    def phase(cls, q: Rational) -> "ExactScalar":
        """The unit phase e^(2*pi*i*q)."""
        return cls(1, 0, q)

    @classmethod
    def sqrt2(cls, coeff: Rational = 1) -> "ExactScalar":
        return cls(0, coeff, 0)

    # -- predicates --------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0 and self.q == 0

    def is_rational(self) -> bool:
        return self.b == 0 and self.q == 0

    # -- arithmetic --------------------------------------------------

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.q + other.q,
        )

    __rmul__ = __mul__

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.q == other.q:
            return ExactScalar(self.a + other.a, self.b + other.b, self.q)
        # same ray, opposite magnitude signs (q differs by the folded half turn)
        if (self.q - other.q) % Fraction(1, 2) == 0:
            return ExactScalar(self.a - other.a, self.b - other.b, self.q)
        raise InexactAdditionError(
            f"cannot add exact scalars on distinct phase rays ({self.q} vs {other.q})"
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.q)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.a, self.b, -self.q)

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("exact scalar inverse of zero")
        # 1/(a + b*sqrt2) = (a - b*sqrt2)/(a^2 - 2 b^2)
        den = self.a * self.a - 2 * self.b * self.b
        if den == 0:
            raise ZeroDivisionError("degenerate quadratic magnitude")
        return ExactScalar(self.a / den, -self.b / den, -self.q)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ExactScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- conversions -------------------------------------------------

    def to_complex(self) -> complex:
        mag = float(self.a) + float(self.b) * SQRT2
        return mag * cmath.exp(2j * cmath.pi * float(self.q))

    def __complex__(self) -> complex:
        return self.to_complex()

    # -- plumbing ----------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.a, self.b, self.q) == (other.a, other.b, other.q)

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __repr__(self):
        if self.b == 0:
            mag = str(self.a)
        else:
            mag = f"({self.a}+{self.b}*sqrt2)"
        if self.q == 0:
            return mag
        return f"{mag}*e2pi({self.q})"


def _coerce(value):
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactScalar(value, 0, 0)
    return NotImplemented


ONE = ExactScalar(1)
ZERO = ExactScalar(0)


# ---------------------------------------------------------------------------
# mixed-mode helpers used by the sparse operator layer

def is_exact(v) -> bool:
    return isinstance(v, (int, Fraction, ExactScalar))


def scalar_is_zero(v) -> bool:
    if isinstance(v, ExactScalar):
        return v.is_zero()
    return v == 0


def scalar_mul(x, y):
    if isinstance(x, (float, complex)) or isinstance(y, (float, complex)):
        return to_complex(x) * to_complex(y)
    if isinstance(x, ExactScalar) or isinstance(y, ExactScalar):
        return _coerce(x) * _coerce(y)
    return x * y


def scalar_add(x, y):
    if isinstance(x, (float, complex)) or isinstance(y, (float, complex)):
        return to_complex(x) + to_complex(y)
    if isinstance(x, ExactScalar) or isinstance(y, ExactScalar):
        return _coerce(x) + _coerce(y)
    return x + y


def scalar_neg(x):
    return -x


def scalar_conj(x):
    if isinstance(x, ExactScalar):
        return x.conjugate()
    if isinstance(x, complex):
        return x.conjugate()
    return x


def scalar_inv(x):
    if isinstance(x, ExactScalar):
        return x.inverse()
    if isinstance(x, int):
        if x in (1, -1):
            return x
        return Fraction(1, x)
    if isinstance(x, Fraction):
        return 1 / x
    return 1.0 / x


def to_complex(v) -> complex:
    if isinstance(v, ExactScalar):
        return v.to_complex()
    return complex(v)
