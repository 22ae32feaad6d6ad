"""Positive reals of the form sqrt(a/b), kept exact by storing the square."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_EVEN, Context, Decimal, localcontext
from fractions import Fraction


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


class SqrtRational:
    __slots__ = ("square",)

    def __init__(self, square):
        square = Fraction(square)
        if square < 0:
            raise ValueError("square of a real value cannot be negative")
        self.square = square

    @classmethod
    def of(cls, value) -> SqrtRational:
        """Wrap a nonnegative rational value (not its square)."""
        if isinstance(value, SqrtRational):
            return value
        value = Fraction(value)
        if value < 0:
            raise ValueError("only nonnegative values are supported")
        return cls(value * value)

    def is_rational(self) -> bool:
        return _is_square(self.square.numerator) and _is_square(self.square.denominator)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"sqrt({self.square}) is irrational")
        return Fraction(math.isqrt(self.square.numerator), math.isqrt(self.square.denominator))

    def _coerce(self, other) -> Fraction | None:
        if isinstance(other, SqrtRational):
            return other.square
        if isinstance(other, (int, Fraction)):
            if other < 0:
                raise ValueError("only nonnegative factors are supported")
            return Fraction(other) ** 2
        return None

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SqrtRational(self.square * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SqrtRational(self.square / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return SqrtRational(o / self.square)

    def __pow__(self, e: int):
        return SqrtRational(self.square ** e)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, float) else None
        if o is None:
            return NotImplemented
        return self.square == o

    def __hash__(self):
        return hash(("sqrt", self.square))

    def __lt__(self, other):
        return self.square < self._coerce(other)

    def __le__(self, other):
        return self.square <= self._coerce(other)

    def __gt__(self, other):
        return self.square > self._coerce(other)

    def __ge__(self, other):
        return self.square >= self._coerce(other)

    def to_decimal(self, prec: int = 50) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = prec + 10
            v = (Decimal(self.square.numerator) / Decimal(self.square.denominator)).sqrt()
        return Context(prec=prec, rounding=ROUND_HALF_EVEN).plus(v)

    def __float__(self):
        return float(self.to_decimal(30))

    def decimal(self, sig: int = 7) -> str:
        """Rounded half-even to ``sig`` significant digits, e.g. '0.0625' or '1.953125e-06'."""
        rounded = Context(prec=sig, rounding=ROUND_HALF_EVEN).plus(self.to_decimal(sig + 20))
        return format(rounded, f".{sig}g")

    def expression(self) -> str:
        if self.is_rational():
            return str(self.as_fraction())
        return f"sqrt({self.square})"

    def __repr__(self):
        return f"SqrtRational({self.expression()} ~ {self.decimal()})"

    def to_json(self) -> dict:
        return {"exact": self.expression(), "square": str(self.square), "decimal": self.decimal()}
