"""Polynomials and rational functions in t over a finite field.

Coefficients are field codes (see :mod:`mwlattice.field_tower`), stored
low-to-high with no trailing zeros; the zero polynomial is the empty tuple
and has degree ``-inf``.

The ``p*`` functions work on plain sequences and are what the hot loops use;
:class:`Poly` and :class:`RationalFunction` wrap them with operators.
"""

from __future__ import annotations

import json
import math
from typing import Sequence

from .field_tower import FieldCtx, FieldElement

NEG_INF = -math.inf


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def pdeg(a: Sequence[int]):
    return len(a) - 1 if a else NEG_INF


def padd(F: FieldCtx, a, b) -> list:
    add = F.add
    if len(a) < len(b):
        a, b = b, a
    res = list(a)
    for i, y in enumerate(b):
        if y:
            res[i] = add(res[i], y)
    return _trim(res)


def pneg(F: FieldCtx, a) -> list:
    neg = F.neg
    return [neg(x) for x in a]


def psub(F: FieldCtx, a, b) -> list:
    sub = F.sub
    res = list(a)
    if len(b) > len(res):
        res.extend([0] * (len(b) - len(res)))
    for i, y in enumerate(b):
        if y:
            res[i] = sub(res[i], y)
    return _trim(res)


def pscale(F: FieldCtx, a, c: int) -> list:
    if not c:
        return []
    mul = F.mul
    return [mul(x, c) for x in a]


def pmul(F: FieldCtx, a, b) -> list:
    if not a or not b:
        return []
    add, mul = F.add, F.mul
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    res[i + j] = add(res[i + j], mul(x, y))
    return _trim(res)


def pdivmod(F: FieldCtx, a, b) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], rem
    sub, mul = F.sub, F.mul
    inv_lc = F.inv(b[-1])
    quo = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        c = mul(c, inv_lc)
        shift = k - db
        quo[shift] = c
        for i in range(db):
            bi = b[i]
            if bi:
                rem[shift + i] = sub(rem[shift + i], mul(c, bi))
        rem[k] = 0
    return _trim(quo), _trim(rem[:db])


def pmod(F: FieldCtx, a, b) -> list:
    return pdivmod(F, a, b)[1]


def pmonic(F: FieldCtx, a) -> list:
    if not a or a[-1] == 1:
        return list(a)
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F: FieldCtx, a, b) -> list:
    """Monic gcd; gcd(0, 0) = 0."""
    a, b = list(a), list(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pderiv(F: FieldCtx, a) -> list:
    mul = F.mul
    return _trim([mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def peval(F: FieldCtx, a, x: int) -> int:
    add, mul = F.add, F.mul
    acc = 0
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def ppow(F: FieldCtx, a, e: int) -> list:
    if e < 0:
        raise ValueError("negative polynomial power")
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = pmul(F, result, base)
        e >>= 1
        if e:
            base = pmul(F, base, base)
    return result


def ppowmod(F: FieldCtx, a, e: int, m) -> list:
    result = [1]
    base = pmod(F, a, m)
    while e:
        if e & 1:
            result = pmod(F, pmul(F, result, base), m)
        e >>= 1
        if e:
            base = pmod(F, pmul(F, base, base), m)
    return result


def root_multiplicity(F: FieldCtx, a, alpha: int) -> int:
    """Multiplicity of (t - alpha) in a nonzero polynomial, by repeated synthetic division."""
    if not a:
        raise ValueError("multiplicity at a root of the zero polynomial")
    add, mul = F.add, F.mul
    count = 0
    cur = list(a)
    while len(cur) > 1:
        quo = [0] * (len(cur) - 1)
        acc = 0
        for k in range(len(cur) - 1, 0, -1):
            acc = add(mul(acc, alpha), cur[k])
            quo[k - 1] = acc
        rem = add(mul(acc, alpha), cur[0])
        if rem:
            break
        count += 1
        cur = quo
    return count


def squarefree_decomposition(F: FieldCtx, a) -> dict[int, list]:
    """{multiplicity: squarefree monic factor} for a nonzero polynomial, valid in characteristic p."""
    if not a:
        raise ValueError("squarefree decomposition of zero")
    out: dict[int, list] = {}
    _sqf(F, pmonic(F, a), 1, out)
    return {k: v for k, v in sorted(out.items()) if len(v) > 1}


def _sqf(F: FieldCtx, f, mult: int, out: dict) -> None:
    p = F.p
    if len(f) <= 1:
        return
    df = pderiv(F, f)
    if not df:
        _sqf(F, _pth_root(F, f), mult * p, out)
        return
    c = pgcd(F, f, df)
    w = pdivmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = pgcd(F, w, c)
        z = pdivmod(F, w, y)[0]
        if len(z) > 1:
            prev = out.get(i * mult, [1])
            out[i * mult] = pmul(F, prev, z)
        i += 1
        w = y
        c = pdivmod(F, c, y)[0]
    if len(c) > 1:
        _sqf(F, _pth_root(F, c), mult * p, out)


def _pth_root(F: FieldCtx, f) -> list:
    p = F.p
    # inverse Frobenius on coefficients: c -> c^(p^(s-1))
    e = p ** (F.s - 1)
    return _trim([F.pow(f[i], e) for i in range(0, len(f), p)])


class Poly:
    """Immutable polynomial in t over a :class:`FieldCtx`."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs=()):
        self.ctx = ctx
        self.coeffs = tuple(_trim(list(coeffs)))

    @classmethod
    def from_ints(cls, ctx: FieldCtx, ints: Sequence[int]) -> Poly:
        """Coefficients given as integers, reduced into the prime subfield."""
        return cls(ctx, [ctx.from_int(k) for k in ints])

    @classmethod
    def const(cls, ctx: FieldCtx, c) -> Poly:
        code = c.code if isinstance(c, FieldElement) else ctx.from_int(c)
        return cls(ctx, [code])

    @classmethod
    def t(cls, ctx: FieldCtx) -> Poly:
        return cls(ctx, [0, 1])

    @classmethod
    def monomial(cls, ctx: FieldCtx, n: int, c=1) -> Poly:
        code = c.code if isinstance(c, FieldElement) else ctx.from_int(c)
        return cls(ctx, [0] * n + [code])

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self) -> FieldElement:
        return FieldElement(self.ctx, self.coeffs[-1] if self.coeffs else 0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ctx is not self.ctx:
                raise ValueError("polynomials over different fields")
            return other.coeffs
        if isinstance(other, FieldElement):
            return (other.code,) if other.code else ()
        if isinstance(other, int):
            c = self.ctx.from_int(other)
            return (c,) if c else ()
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly(self.ctx, padd(self.ctx, self.coeffs, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly(self.ctx, psub(self.ctx, self.coeffs, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly(self.ctx, psub(self.ctx, b, self.coeffs))

    def __neg__(self):
        return Poly(self.ctx, pneg(self.ctx, self.coeffs))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return Poly(self.ctx, pmul(self.ctx, self.coeffs, b))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return Poly(self.ctx, ppow(self.ctx, self.coeffs, e))

    def divrem(self, other) -> tuple[Poly, Poly]:
        b = self._coerce(other)
        q, r = pdivmod(self.ctx, self.coeffs, b)
        return Poly(self.ctx, q), Poly(self.ctx, r)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def gcd(self, other) -> Poly:
        return Poly(self.ctx, pgcd(self.ctx, self.coeffs, self._coerce(other)))

    def monic(self) -> Poly:
        return Poly(self.ctx, pmonic(self.ctx, self.coeffs))

    def derivative(self) -> Poly:
        return Poly(self.ctx, pderiv(self.ctx, self.coeffs))

    def __call__(self, x) -> FieldElement:
        code = x.code if isinstance(x, FieldElement) else self.ctx.from_int(x)
        return FieldElement(self.ctx, peval(self.ctx, self.coeffs, code))

    evaluate = __call__

    def multiplicity(self, alpha) -> int:
        code = alpha.code if isinstance(alpha, FieldElement) else self.ctx.from_int(alpha)
        return root_multiplicity(self.ctx, self.coeffs, code)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx is other.ctx and self.coeffs == other.coeffs
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self.coeffs == tuple(b)

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def to_text(self) -> str:
        """Fixture format: JSON list of coefficient codes, low to high."""
        return json.dumps(list(self.coeffs), separators=(",", ":"))

    @classmethod
    def from_text(cls, ctx: FieldCtx, text: str) -> Poly:
        vals = json.loads(text)
        if not isinstance(vals, list) or not all(isinstance(v, int) for v in vals):
            raise ValueError(f"bad polynomial literal: {text!r}")
        if any(v < 0 or v >= ctx.r for v in vals):
            # plain integers outside the code range are read in the prime subfield
            return cls.from_ints(ctx, vals)
        return cls(ctx, vals)


class RationalFunction:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, num, den=None, *, ctx: FieldCtx | None = None, canonical: bool = False):
        if isinstance(num, Poly):
            ctx = num.ctx
            n = num.coeffs
        else:
            n = tuple(num)
        if ctx is None:
            raise ValueError("field context required")
        if den is None:
            d = (1,)
        elif isinstance(den, Poly):
            d = den.coeffs
        else:
            d = tuple(den)
        if not d:
            raise ZeroDivisionError("rational function with zero denominator")
        self.ctx = ctx
        if canonical:
            self.num, self.den = tuple(n), tuple(d)
        else:
            self.num, self.den = _canon(ctx, n, d)

    @classmethod
    def _raw(cls, ctx, num, den) -> RationalFunction:
        obj = object.__new__(cls)
        obj.ctx, obj.num, obj.den = ctx, num, den
        return obj

    @classmethod
    def from_poly(cls, p: Poly) -> RationalFunction:
        return cls._raw(p.ctx, p.coeffs, (1,))

    @classmethod
    def const(cls, ctx: FieldCtx, c) -> RationalFunction:
        return cls.from_poly(Poly.const(ctx, c))

    @property
    def numerator(self) -> Poly:
        return Poly(self.ctx, self.num)

    @property
    def denominator(self) -> Poly:
        return Poly(self.ctx, self.den)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.ctx is not self.ctx:
                raise ValueError("rational functions over different fields")
            return other.num, other.den
        if isinstance(other, Poly):
            if other.ctx is not self.ctx:
                raise ValueError("rational functions over different fields")
            return other.coeffs, (1,)
        if isinstance(other, FieldElement):
            return ((other.code,) if other.code else ()), (1,)
        if isinstance(other, int):
            c = self.ctx.from_int(other)
            return ((c,) if c else ()), (1,)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _rf_add(self.ctx, self.num, self.den, *o)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.ctx, tuple(pneg(self.ctx, self.num)), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _rf_add(self.ctx, self.num, self.den, tuple(pneg(self.ctx, o[0])), o[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _rf_mul(self.ctx, self.num, self.den, *o)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        F = self.ctx
        lc_inv = F.inv(self.num[-1])
        return RationalFunction._raw(F, tuple(pscale(F, self.den, lc_inv)),
                                     tuple(pscale(F, self.num, lc_inv)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o[0]:
            raise ZeroDivisionError("division by the zero rational function")
        F = self.ctx
        lc_inv = F.inv(o[0][-1])
        return _rf_mul(F, self.num, self.den, tuple(pscale(F, o[1], lc_inv)),
                       tuple(pscale(F, o[0], lc_inv)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        F = self.ctx
        if e < 0:
            return self.inverse() ** (-e)
        # coprime stays coprime under powers
        return RationalFunction._raw(F, tuple(ppow(F, self.num, e)), tuple(ppow(F, self.den, e)))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == tuple(o[0]) and self.den == tuple(o[1])

    def __hash__(self):
        return hash((id(self.ctx), self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"RF({list(self.num)})"
        return f"RF({list(self.num)} / {list(self.den)})"

    # valuations and height
    def ord_infinity(self) -> int:
        if not self.num:
            raise ValueError("valuation of zero")
        return (len(self.den) - 1) - (len(self.num) - 1)

    def ord_at(self, alpha) -> int:
        if not self.num:
            raise ValueError("valuation of zero")
        F = self.ctx
        code = alpha.code if isinstance(alpha, FieldElement) else F.from_int(alpha)
        return root_multiplicity(F, self.num, code) - root_multiplicity(F, self.den, code)

    def naive_height(self) -> int:
        return naive_height_x(self)


def _canon(F: FieldCtx, n, d) -> tuple[tuple, tuple]:
    if not n:
        return (), (1,)
    if len(d) > 1:
        g = pgcd(F, n, d)
        if len(g) > 1:
            n = pdivmod(F, n, g)[0]
            d = pdivmod(F, d, g)[0]
    lc = d[-1]
    if lc != 1:
        inv = F.inv(lc)
        n = pscale(F, n, inv)
        d = pscale(F, d, inv)
    return tuple(n), tuple(d)


def _rf_add(F, an, ad, bn, bd) -> RationalFunction:
    if ad == bd:
        if ad == (1,):
            return RationalFunction._raw(F, tuple(padd(F, an, bn)), ad)
        n, d = _canon(F, padd(F, an, bn), ad)
        return RationalFunction._raw(F, n, d)
    if bd == (1,):
        return RationalFunction._raw(F, tuple(padd(F, an, pmul(F, bn, ad))), ad)
    if ad == (1,):
        return RationalFunction._raw(F, tuple(padd(F, pmul(F, an, bd), bn)), bd)
    n = padd(F, pmul(F, an, bd), pmul(F, bn, ad))
    n, d = _canon(F, n, pmul(F, ad, bd))
    return RationalFunction._raw(F, n, d)


def _rf_mul(F, an, ad, bn, bd) -> RationalFunction:
    if not an or not bn:
        return RationalFunction._raw(F, (), (1,))
    # cross-cancel so the product stays in lowest terms
    if len(bd) > 1 and len(an) > 1:
        g = pgcd(F, an, bd)
        if len(g) > 1:
            an = pdivmod(F, an, g)[0]
            bd = pdivmod(F, bd, g)[0]
    if len(ad) > 1 and len(bn) > 1:
        g = pgcd(F, bn, ad)
        if len(g) > 1:
            bn = pdivmod(F, bn, g)[0]
            ad = pdivmod(F, ad, g)[0]
    n = pmul(F, an, bn)
    d = pmul(F, ad, bd)
    lc = d[-1]
    if lc != 1:
        inv = F.inv(lc)
        n, d = pscale(F, n, inv), pscale(F, d, inv)
    return RationalFunction._raw(F, tuple(n), tuple(d))


def ord_at(x: RationalFunction, alpha) -> int:
    return x.ord_at(alpha)


def ord_infinity(x: RationalFunction) -> int:
    return x.ord_infinity()


def naive_height_x(x: RationalFunction) -> int:
    """max(deg num, deg den) of a canonical rational function; 0 for constants."""
    return max(len(x.num), len(x.den)) - 1 if x.num else 0
