"""Exact arithmetic in the sixth cyclotomic field Q(xi6).

Elements are stored as ``a + b*xi6`` with rational ``a``, ``b`` and the
relation ``xi6**2 = xi6 - 1``.  Every root of unity of order 1, 2, 3 or 6 is a
power of ``xi6``, which is all the fixed-point computations need.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

XI6_COMPLEX = cmath.exp(1j * cmath.pi / 3)


class Cyc6:
    """Immutable element ``a + b*xi6`` of Q(xi6)."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: Scalar = 0, b: Scalar = 0) -> None:
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @classmethod
    def xi(cls) -> Cyc6:
        return cls(0, 1)

    @staticmethod
    def _coerce(other: object) -> Cyc6 | None:
        if isinstance(other, Cyc6):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc6(other)
        return None

    def __repr__(self) -> str:
        return f"Cyc6({self._a}, {self._b})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return f"{self._b}*xi6"
        sign = "+" if self._b > 0 else "-"
        return f"{self._a} {sign} {abs(self._b)}*xi6"

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b

    def __hash__(self) -> int:
        return hash((self._a, self._b))

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __neg__(self) -> Cyc6:
        return Cyc6(-self._a, -self._b)

    def __add__(self, other: object) -> Cyc6:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc6(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __sub__(self, other: object) -> Cyc6:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc6(self._a - o._a, self._b - o._b)

    def __rsub__(self, other: object) -> Cyc6:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> Cyc6:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a + b x)(c + d x) with x^2 = x - 1
        a, b, c, d = self._a, self._b, o._a, o._b
        return Cyc6(a * c - b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm to Q, ``a^2 + ab + b^2``."""
        a, b = self._a, self._b
        return a * a + a * b + b * b

    def conj(self) -> Cyc6:
        """Complex conjugation, sending xi6 to xi6**5 = 1 - xi6."""
        return Cyc6(self._a + self._b, -self._b)

    def inv(self) -> Cyc6:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Cyc6 inverse of zero")
        c = self.conj()
        return Cyc6(c._a / n, c._b / n)

    def __truediv__(self, other: object) -> Cyc6:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other: object) -> Cyc6:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int) -> Cyc6:
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inv()
        result = Cyc6(1)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_rational(self) -> bool:
        return self._b == 0

    def to_complex(self) -> tuple[float, float]:
        z = float(self._a) + float(self._b) * XI6_COMPLEX
        return (z.real, z.imag)

    def to_json(self) -> dict:
        return {
            "a": [self._a.numerator, self._a.denominator],
            "b": [self._b.numerator, self._b.denominator],
        }

    @classmethod
    def from_json(cls, data: dict) -> Cyc6:
        try:
            an, ad = data["a"]
            bn, bd = data["b"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed Cyc6 JSON: {data!r}") from exc
        return cls(Fraction(int(an), int(ad)), Fraction(int(bn), int(bd)))


def mul(x: Cyc6, y: Cyc6) -> Cyc6:
    return x * y


def inv(x: Cyc6) -> Cyc6:
    return x.inv()


def conj(x: Cyc6) -> Cyc6:
    return x.conj()


def to_complex(x: Cyc6) -> tuple[float, float]:
    return x.to_complex()


_POWERS = (
    Cyc6(1, 0),
    Cyc6(0, 1),
    Cyc6(-1, 1),
    Cyc6(-1, 0),
    Cyc6(0, -1),
    Cyc6(1, -1),
)


def xi6_power(e: int) -> Cyc6:
    """``xi6**e`` for any integer ``e`` (reduced mod 6)."""
    return _POWERS[e % 6]


def root_of_unity(n: int, k: int) -> Cyc6:
    """The primitive-root power ``xi_n**k``, realized as ``xi6**(6k/n)``."""
    if n <= 0 or 6 % n:
        raise ValueError(f"order {n} does not divide 6")
    return xi6_power((6 // n) * k)
