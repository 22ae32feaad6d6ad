"""Elliptic curves over F_r(t) in long Weierstrass form, and the explicit point families.

Two families are built here:

* E1:  y^2 = x^3 + t^q - t  over F_r(t), q = p^c with p = -1 mod 6, c odd;
* the Legendre curve y^2 = x(x+1)(x+u^d) over GF(p^{2f})(u), d = p^f + 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .field_tower import (
    FieldCtx,
    FieldElement,
    InvalidFamilyError,
    is_prime,
    make_field,
    solve_beta,
    solve_sigma,
    sufficiency_failures,
)
from .funcring import Poly, RationalFunction, pmul, ppow


class ConstructionError(RuntimeError):
    """An explicit point failed the curve equation."""


@dataclass(frozen=True, eq=False)
class WeierstrassCurve:
    """y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6, coefficients in F_r[t]."""

    ctx: FieldCtx
    a1: Poly
    a2: Poly
    a3: Poly
    a4: Poly
    a6: Poly
    name: str = ""

    def __post_init__(self):
        for a in (self.a1, self.a2, self.a3, self.a4, self.a6):
            if a.ctx is not self.ctx:
                raise ValueError("curve coefficients over different fields")
        if self.discriminant().is_zero():
            raise ValueError("singular Weierstrass model (zero discriminant)")
        rf = RationalFunction.from_poly
        object.__setattr__(self, "_rf", tuple(rf(a) for a in self.coefficients))

    @classmethod
    def short(cls, a4: Poly, a6: Poly, name: str = "") -> WeierstrassCurve:
        zero = Poly(a4.ctx)
        return cls(a4.ctx, zero, zero, zero, a4, a6, name)

    @property
    def coefficients(self) -> tuple[Poly, Poly, Poly, Poly, Poly]:
        return self.a1, self.a2, self.a3, self.a4, self.a6

    def is_short(self) -> bool:
        return not (self.a1 or self.a2 or self.a3)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + a2 * 4
        b4 = a4 * 2 + a1 * a3
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> Poly:
        b2, b4, b6, b8 = self.b_invariants()
        return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9

    def c4(self) -> Poly:
        b2, b4, _, _ = self.b_invariants()
        return b2 * b2 - b4 * 24

    def point(self, x, y) -> CurvePoint:
        """Build a point, coercing polynomials, and check it lies on the curve."""
        P = CurvePoint(_as_rf(self.ctx, x), _as_rf(self.ctx, y))
        if not on_curve(self, P):
            raise ValueError("point is not on the curve")
        return P

    def to_json(self) -> dict:
        return {
            "field": self.ctx.to_json(),
            "a": [list(a.coeffs) for a in self.coefficients],
        }


def _as_rf(ctx, v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Poly):
        return RationalFunction.from_poly(v)
    return RationalFunction.const(ctx, v)


class CurvePoint:
    """Affine point (x, y) with rational-function coordinates, or the identity."""

    __slots__ = ("x", "y")

    def __init__(self, x: RationalFunction | None = None, y: RationalFunction | None = None):
        if (x is None) != (y is None):
            raise ValueError("both coordinates or neither")
        self.x = x
        self.y = y

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def key(self):
        if self.x is None:
            return None
        return (self.x.num, self.x.den, self.y.num, self.y.den)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if self.x is None:
            return "CurvePoint(O)"
        return f"CurvePoint(x={self.x!r}, y={self.y!r})"

    def to_json(self) -> dict:
        if self.x is None:
            return {"identity": True}
        return {
            "x_num": list(self.x.num), "x_den": list(self.x.den),
            "y_num": list(self.y.num), "y_den": list(self.y.den),
        }

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj: dict) -> CurvePoint:
        if obj.get("identity"):
            return IDENTITY
        x = RationalFunction(Poly(ctx, obj["x_num"]), Poly(ctx, obj["x_den"]))
        y = RationalFunction(Poly(ctx, obj["y_num"]), Poly(ctx, obj["y_den"]))
        return cls(x, y)


IDENTITY = CurvePoint()


def _check_ctx(E: WeierstrassCurve, *points: CurvePoint) -> None:
    for P in points:
        if P.x is not None and (P.x.ctx is not E.ctx or P.y.ctx is not E.ctx):
            raise ValueError("point and curve live over different fields")


def on_curve(E: WeierstrassCurve, P: CurvePoint) -> bool:
    _check_ctx(E, P)
    if P.is_identity:
        return True
    a1, a2, a3, a4, a6 = E._rf
    x, y = P.x, P.y
    lhs = y * y
    if a1:
        lhs = lhs + a1 * x * y
    if a3:
        lhs = lhs + a3 * y
    x2 = x * x
    rhs = x2 * x + a6
    if a2:
        rhs = rhs + a2 * x2
    if a4:
        rhs = rhs + a4 * x
    return lhs == rhs


def neg(E: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    _check_ctx(E, P)
    if P.is_identity:
        return P
    a1, _, a3, _, _ = E._rf
    y = -P.y
    if a1:
        y = y - a1 * P.x
    if a3:
        y = y - a3
    return CurvePoint(P.x, y)


def add(E: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-and-tangent addition in long Weierstrass form."""
    _check_ctx(E, P, Q)
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    a1, a2, a3, a4, a6 = E._rf
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        s = y1 + y2
        if a1:
            s = s + a1 * x2
        if a3:
            s = s + a3
        if not s:
            return IDENTITY
        # tangent; s = 2 y1 + a1 x1 + a3 here
        x1sq = x1 * x1
        num = x1sq * 3
        if a2:
            num = num + a2 * x1 * 2
        if a4:
            num = num + a4
        if a1:
            num = num - a1 * y1
        lam = num / s
        nu_num = -(x1sq * x1) + a6 * 2
        if a4:
            nu_num = nu_num + a4 * x1
        if a3:
            nu_num = nu_num - a3 * y1
        nu = nu_num / s
    else:
        dx = x2 - x1
        lam = (y2 - y1) / dx
        nu = (y1 * x2 - y2 * x1) / dx
    x3 = lam * lam - x1 - x2
    if a1:
        x3 = x3 + a1 * lam
    if a2:
        x3 = x3 - a2
    slope = lam + a1 if a1 else lam
    y3 = -(slope * x3) - nu
    if a3:
        y3 = y3 - a3
    return CurvePoint(x3, y3)


def sub(E: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return add(E, P, neg(E, Q))


def double(E: WeierstrassCurve, P: CurvePoint) -> CurvePoint:
    return add(E, P, P)


def mul_scalar(E: WeierstrassCurve, n: int, P: CurvePoint) -> CurvePoint:
    if n < 0:
        return mul_scalar(E, -n, neg(E, P))
    result = IDENTITY
    addend = P
    while n:
        if n & 1:
            result = add(E, result, addend)
        n >>= 1
        if n:
            addend = double(E, addend)
    return result


def dedup_up_to_sign(E: WeierstrassCurve, points) -> list[CurvePoint]:
    """Keep the first of each {P, -P} pair, in input order; drops the identity."""
    seen = set()
    out = []
    for P in points:
        if P.is_identity or P in seen:
            continue
        seen.add(P)
        seen.add(neg(E, P))
        out.append(P)
    return out


def points_to_json(E: WeierstrassCurve, points) -> str:
    payload = {"field": E.ctx.to_json(), "points": [P.to_json() for P in points]}
    return json.dumps(payload, separators=(",", ":"))


def points_from_json(text: str) -> tuple[FieldCtx, list[CurvePoint]]:
    obj = json.loads(text)
    fld = obj["field"]
    ctx = make_field(fld["p"], fld["s"])
    if list(ctx.modulus) != list(fld["modulus_coeffs"]):
        raise ValueError("point file was written with a different field modulus")
    return ctx, [CurvePoint.from_json(ctx, o) for o in obj["points"]]


# -- E1: y^2 = x^3 + t^q - t ---------------------------------------------------

@dataclass(frozen=True)
class CurveE1Params:
    p: int
    c: int
    s: int

    def __post_init__(self):
        failed = sufficiency_failures(self.p, self.c, self.s)
        if failed:
            raise InvalidFamilyError(
                f"r = {self.p}^{self.s} is not sufficiently large for q = {self.p}^{self.c}: "
                f"fails {', '.join(failed)}")

    @property
    def q(self) -> int:
        return self.p ** self.c

    @property
    def r(self) -> int:
        return self.p ** self.s

    @property
    def rank(self) -> int:
        return 2 * (self.q - 1)

    def field(self) -> FieldCtx:
        return make_field(self.p, self.s)


@dataclass(frozen=True)
class ExplicitSeedSet:
    sigmas: tuple[FieldElement, ...]
    betas: tuple[FieldElement, ...]
    q: int

    def __post_init__(self):
        if len(self.sigmas) != 6 * (self.q - 1):
            raise ValueError(f"expected {6 * (self.q - 1)} sigma values, got {len(self.sigmas)}")
        if len(self.betas) != self.q:
            raise ValueError(f"expected {self.q} beta values, got {len(self.betas)}")

    @classmethod
    def solve(cls, params: CurveE1Params) -> ExplicitSeedSet:
        F = params.field()
        return cls(solve_sigma(F, params.q), solve_beta(F, params.q), params.q)


def e1_curve(params: CurveE1Params) -> WeierstrassCurve:
    F = params.field()
    a6 = Poly.monomial(F, params.q) - Poly.t(F)
    return WeierstrassCurve.short(Poly(F), a6, name=f"E1(q={params.q}, r={params.p}^{params.s})")


def is_e1_curve(E: WeierstrassCurve) -> int | None:
    """Return q if E is y^2 = x^3 + t^q - t for a power q of the characteristic."""
    if not E.is_short() or E.a4:
        return None
    a6 = E.a6.coeffs
    F = E.ctx
    q = len(a6) - 1
    if q < 2 or a6[-1] != 1 or a6[1] != F.neg(1) or any(a6[i] for i in range(len(a6)) if i not in (1, q)):
        return None
    k = q
    while k % F.p == 0:
        k //= F.p
    return q if k == 1 else None


def e1_explicit_points(params: CurveE1Params, seeds: ExplicitSeedSet | None = None,
                       E: WeierstrassCurve | None = None) -> list[CurvePoint]:
    """The 6q(q-1) points x = s^2 (t - g)^((q+1)/3), y = s^3 (t - g^q)^((q+1)/2), g = beta/s^6.

    The second coordinate is ambiguous as printed; candidates from both
    readings (g or g^q in y) and both signs are generated and only those on
    the curve are kept.
    """
    F = params.field()
    E = E or e1_curve(params)
    seeds = seeds or ExplicitSeedSet.solve(params)
    q = params.q
    ex, ey = (q + 1) // 3, (q + 1) // 2
    seen: set = set()
    out: list[CurvePoint] = []
    for sig in seeds.sigmas:
        s2 = F.pow(sig.code, 2)
        s3 = F.pow(sig.code, 3)
        s6 = F.pow(sig.code, 6)
        for beta in seeds.betas:
            g = F.div(beta.code, s6)
            x = RationalFunction._raw(F, tuple(pmul(F, [s2], ppow(F, [F.neg(g), 1], ex))), (1,))
            for shift in (F.pow(g, q), g):
                base = ppow(F, [F.neg(shift), 1], ey)
                for c in (s3, F.neg(s3)):
                    y = RationalFunction._raw(F, tuple(pmul(F, [c], base)), (1,))
                    P = CurvePoint(x, y)
                    if P in seen or not on_curve(E, P):
                        continue
                    seen.add(P)
                    out.append(P)
    expected = 6 * q * (q - 1)
    if len(out) != expected:
        raise ConstructionError(
            f"explicit construction produced {len(out)} points on the curve, expected {expected}")
    return out


# -- Legendre curve -----------------------------------------------------------

@dataclass(frozen=True)
class LegendreParams:
    p: int
    f: int
    d: int = field(init=False)

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise InvalidFamilyError(f"p={self.p} must be an odd prime")
        if self.f < 1:
            raise InvalidFamilyError("f must be a positive integer")
        object.__setattr__(self, "d", self.p ** self.f + 1)

    @property
    def rank(self) -> int:
        return self.d - 2

    def field(self) -> FieldCtx:
        # p^f = -1 mod d, so mu_d first appears in GF(p^{2f})
        return make_field(self.p, 2 * self.f)

    def zeta(self) -> FieldElement:
        F = self.field()
        z = F.pow(F.gen, (F.r - 1) // self.d)
        return FieldElement(F, z)


def legendre_curve(params: LegendreParams) -> WeierstrassCurve:
    """y^2 = x(x+1)(x+u^d), with u playing the role of the polynomial variable."""
    F = params.field()
    ud = Poly.monomial(F, params.d)
    zero = Poly(F)
    return WeierstrassCurve(F, zero, ud + 1, zero, ud, zero,
                            name=f"Legendre(p={params.p}, f={params.f})")


def legendre_explicit_points(params: LegendreParams, E: WeierstrassCurve | None = None) -> list[CurvePoint]:
    """P_i = (z^i u, z^i u (z^i u + 1)^(d/2)) for i = 0..d-1."""
    F = params.field()
    E = E or legendre_curve(params)
    zeta = params.zeta().code
    out = []
    for i in range(params.d):
        zi = F.pow(zeta, i)
        x = [0, zi]
        y = pmul(F, x, ppow(F, [1, zi], params.d // 2))
        P = CurvePoint(RationalFunction._raw(F, tuple(x), (1,)), RationalFunction._raw(F, tuple(y), (1,)))
        if not on_curve(E, P):
            raise ConstructionError(f"Legendre point P_{i} is not on the curve")
        out.append(P)
    return out
