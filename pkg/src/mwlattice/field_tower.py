"""Finite fields GF(p^s) and the two seed equations of the explicit E1 points.

Elements are stored as dense integer codes: the element
c_0 + c_1 x + ... + c_{s-1} x^{s-1} of GF(p)[x]/(m(x)) has code
sum(c_i * p**i).  Code 0 is zero and code 1 is one in every field.

Three arithmetic backends share that encoding:

* ``prime``  -- s == 1, plain modular arithmetic;
* ``table``  -- r <= TABLE_LIMIT, exp/log/Zech tables over a primitive element;
* ``poly``   -- anything larger, schoolbook multiplication modulo m(x).
"""

from __future__ import annotations

import itertools
import math
from array import array
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

TABLE_LIMIT = 1 << 21


class InvalidFamilyError(ValueError):
    """Parameters outside the p = -1 mod 6, odd-c curve family."""


class NoSolutionError(ArithmeticError):
    """A seed equation has no solution in the requested field."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; fine for r - 1 at desk scale."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_exponent(q: int, p: int) -> int | None:
    """Return c with q == p**c (c >= 1), else None."""
    if q < p:
        return None
    c = 0
    while q % p == 0:
        q //= p
        c += 1
    return c if q == 1 else None


# -- GF(p)[x] helpers used only while choosing the modulus -------------------

def _gfp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _gfp_mulmod(a, b, m, p):
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _gfp_mod(res, m, p)


def _gfp_mod(a, m, p):
    a = _gfp_trim(list(a))
    dm = len(m) - 1
    inv_lc = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lc % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _gfp_trim(a)
    return a


def _gfp_gcd(a, b, p):
    a, b = _gfp_trim(list(a)), _gfp_trim(list(b))
    while b:
        a, b = b, _gfp_mod(a, b, p)
    return a


def _gfp_powmod(base, e, m, p):
    result = [1]
    base = _gfp_mod(base, m, p)
    while e:
        if e & 1:
            result = _gfp_mulmod(result, base, m, p)
        base = _gfp_mulmod(base, base, m, p)
        e >>= 1
    return result


def is_irreducible_gfp(m: list[int], p: int) -> bool:
    """Ben-Or test for a monic polynomial over GF(p) (low-to-high coefficients)."""
    s = len(m) - 1
    if s == 1:
        return True
    if m[0] == 0:
        return False
    xp = [0, 1]
    for _ in range(s // 2):
        xp = _gfp_powmod(xp, p, m, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        g = _gfp_gcd(m, _gfp_trim(diff), p)
        if len(g) > 1:
            return False
    return True


def least_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree s, low-degree-first order."""
    if s == 1:
        return (0, 1)
    # a zero constant term means x divides m, so c0 starts at 1
    for low in itertools.product(range(1, p), *[range(p)] * (s - 1)):
        m = list(low) + [1]
        if is_irreducible_gfp(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# -- the field ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(p^s) with a fixed modulus.  Use :func:`make_field` to build one."""

    p: int
    s: int
    modulus: tuple[int, ...]
    r: int = field(init=False)
    backend: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", self.p ** self.s)
        if self.s == 1:
            backend = "prime"
        elif self.r <= TABLE_LIMIT:
            backend = "table"
        else:
            backend = "poly"
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "_powers", [self.p ** i for i in range(self.s)])
        gen = self._find_generator()
        object.__setattr__(self, "gen", gen)
        if backend == "table":
            self._build_tables()
        self._bind_ops()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, s={self.s}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return make_field, (self.p, self.s)

    # digits <-> codes
    def to_coeffs(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.s):
            a, c = divmod(a, p)
            out.append(c)
        return out

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.s:
            raise ValueError("too many coefficients for this field")
        return sum((c % self.p) * w for c, w in zip(coeffs, self._powers))

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    # generic (poly-basis) arithmetic; always available
    def _add_poly(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        p = self.p
        res, w = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            res += ((x + y) % p) * w
            w *= p
        return res

    def _neg_poly(self, a: int) -> int:
        p = self.p
        res, w = 0, 1
        while a:
            a, x = divmod(a, p)
            res += ((-x) % p) * w
            w *= p
        return res

    def _mul_poly(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        p, s = self.p, self.s
        if s == 1:
            return a * b % p
        da, db = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * s - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        m = self.modulus
        for k in range(2 * s - 2, s - 1, -1):
            c = prod[k] % p
            if c:
                base = k - s
                for i in range(s):
                    prod[base + i] -= c * m[i]
        return sum((prod[i] % p) * w for i, w in enumerate(self._powers))

    def _pow_poly(self, a: int, e: int) -> int:
        if e < 0:
            a = self._pow_poly(a, self.r - 2)
            e = -e
        result = 1
        while e:
            if e & 1:
                result = self._mul_poly(result, a)
            a = self._mul_poly(a, a)
            e >>= 1
        return result

    def _find_generator(self) -> int:
        n = self.r - 1
        if n == 1:
            return 1
        primes = list(factorize(n))
        for g in range(2, self.r):
            if all(self._pow_poly(g, n // ell) != 1 for ell in primes):
                return g
        raise AssertionError("multiplicative group is cyclic")  # unreachable

    def _build_tables(self):
        p, s, r = self.p, self.s, self.r
        n = r - 1
        m = np.array(self.modulus[:s], dtype=np.int64)
        block = math.isqrt(n) + 1
        digits = np.zeros((n, s), dtype=np.int64)
        cur = 1
        for k in range(min(block, n)):
            digits[k] = self.to_coeffs(cur)
            cur = self._mul_poly(cur, self.gen)
        step = np.array(self.to_coeffs(cur), dtype=np.int64)  # gen**block
        for start in range(block, n, block):
            src = digits[start - block:start]
            acc = np.zeros_like(src)
            shifted = src.copy()
            for j in range(s):
                if step[j]:
                    acc = (acc + step[j] * shifted) % p
                top = shifted[:, s - 1].copy()
                shifted[:, 1:] = shifted[:, :-1]
                shifted[:, 0] = 0
                shifted = (shifted - np.outer(top, m)) % p
            stop = min(start + block, n)
            digits[start:stop] = acc[: stop - start]
        weights = np.array(self._powers, dtype=np.int64)
        exp_codes = digits @ weights
        log = np.full(r, -1, dtype=np.int64)
        log[exp_codes] = np.arange(n, dtype=np.int64)
        if np.any(log[1:] < 0):
            raise AssertionError("generator is not primitive")
        d0 = exp_codes % p
        plus_one = exp_codes - d0 + (d0 + 1) % p
        zech = np.where(plus_one == 0, -1, log[plus_one])
        object.__setattr__(self, "_exp", _as_array(exp_codes))
        object.__setattr__(self, "_log", _as_array(log))
        object.__setattr__(self, "_zech", _as_array(zech))

    def _bind_ops(self):
        p, r = self.p, self.r
        if self.backend == "prime":
            add = lambda a, b: (a + b) % p
            neg = lambda a: (-a) % p
            sub = lambda a, b: (a - b) % p
            mul = lambda a, b: a * b % p
            inv = lambda a: _raise_zero_div() if a == 0 else pow(a, p - 2, p)

            def power(a, e):
                if a == 0:
                    if e < 0:
                        _raise_zero_div()
                    return 1 if e == 0 else 0
                return pow(a, e % (p - 1), p)

        elif self.backend == "table":
            exp, log, zech = self._exp, self._log, self._zech
            n = r - 1
            half = 0 if p == 2 else n // 2

            def add(a, b):
                if not a:
                    return b
                if not b:
                    return a
                la = log[a]
                z = zech[(log[b] - la) % n]
                if z < 0:
                    return 0
                return exp[(la + z) % n]

            def neg(a):
                return exp[(log[a] + half) % n] if a else 0

            def sub(a, b):
                if not b:
                    return a
                return add(a, exp[(log[b] + half) % n])

            def mul(a, b):
                if not a or not b:
                    return 0
                return exp[(log[a] + log[b]) % n]

            def inv(a):
                if not a:
                    _raise_zero_div()
                return exp[(-log[a]) % n]

            def power(a, e):
                if not a:
                    if e < 0:
                        _raise_zero_div()
                    return 1 if e == 0 else 0
                return exp[(log[a] * e) % n]

        else:
            add = self._add_poly
            neg = self._neg_poly
            sub = lambda a, b: self._add_poly(a, self._neg_poly(b))
            mul = self._mul_poly

            def inv(a):
                if not a:
                    _raise_zero_div()
                return self._pow_poly(a, r - 2)

            def power(a, e):
                if not a:
                    if e < 0:
                        _raise_zero_div()
                    return 1 if e == 0 else 0
                return self._pow_poly(a, e % (r - 1))

        for name, fn in (("add", add), ("neg", neg), ("sub", sub), ("mul", mul),
                         ("inv", inv), ("pow", power)):
            object.__setattr__(self, name, fn)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, k: int = 1) -> int:
        """a -> a^(p^k)."""
        return self.pow(a, self.p ** k)

    # convenience
    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.from_coeffs(value))
        return FieldElement(self, self.from_int(int(value)))

    def elements(self):
        return (FieldElement(self, c) for c in range(self.r))

    def units(self):
        return (FieldElement(self, c) for c in range(1, self.r))

    @property
    def generator(self) -> FieldElement:
        return FieldElement(self, self.gen)

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "modulus_coeffs": list(self.modulus)}


def _as_array(a: np.ndarray) -> array:
    out = array("q")
    out.frombytes(np.ascontiguousarray(a, dtype=np.int64).tobytes())
    return out


def _raise_zero_div():
    raise ZeroDivisionError("inverse of zero in a finite field")


@lru_cache(maxsize=None)
def make_field(p: int, s: int) -> FieldCtx:
    """GF(p^s) with the lexicographically least monic irreducible modulus."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if s < 1:
        raise ValueError("s must be a positive integer")
    return FieldCtx(p, s, least_irreducible(p, s))


class FieldElement:
    __slots__ = ("ctx", "code")

    def __init__(self, ctx: FieldCtx, code: int):
        self.ctx = ctx
        self.code = code

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.to_coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.ctx, self.ctx.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.ctx, self.ctx.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.ctx, self.ctx.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.ctx, self.ctx.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.ctx, self.ctx.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return FieldElement(self.ctx, self.ctx.div(b, self.code))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.ctx, self.ctx.pow(self.code, e))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.code))

    def frobenius(self, k: int = 1):
        return FieldElement(self.ctx, self.ctx.frobenius(self.code, k))

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __repr__(self):
        return f"GF({self.ctx.p}^{self.ctx.s})<{self.coeffs}>"


# -- the E1 family conditions ------------------------------------------------

def _check_family(p: int, c: int) -> None:
    if not is_prime(p) or p <= 3 or p % 6 != 5:
        raise InvalidFamilyError(f"p={p} must be a prime > 3 with p = -1 mod 6")
    if c < 1 or c % 2 == 0:
        raise InvalidFamilyError(f"c={c} must be a positive odd integer")


def sufficiency_failures(p: int, c: int, s: int) -> list[str]:
    """Names of the violated 'sufficiently large' conditions (empty if r = p^s qualifies)."""
    _check_family(p, c)
    if s < 1:
        raise ValueError("s must be a positive integer")
    failed = []
    if s % c:
        failed.append("c | s")
    if ((p + 1) * s) % 8:
        failed.append("8 | (p+1)s")
    if (p ** s - 1) % (3 * (p ** c - 1)):
        failed.append("3(p^c-1) | p^s-1")
    return failed


def is_sufficiently_large(p: int, c: int, s: int) -> bool:
    return not sufficiency_failures(p, c, s)


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError("a must be a unit mod n")
    order = n_phi = _euler_phi(n)
    for ell in factorize(n_phi):
        while order % ell == 0 and pow(a, order // ell, n) == 1:
            order //= ell
    return order


def _euler_phi(n: int) -> int:
    out = n
    for ell in factorize(n):
        out -= out // ell
    return out


def min_sufficient_s(p: int, c: int) -> int:
    _check_family(p, c)
    bound = math.lcm(c, 8, multiplicative_order(p, 3 * (p ** c - 1)))
    for s in range(1, bound + 1):
        if is_sufficiently_large(p, c, s):
            return s
    raise AssertionError("lcm bound always qualifies")  # unreachable


# -- seed equations ----------------------------------------------------------

def _exponent_of(ctx: FieldCtx, q: int) -> int:
    c = prime_power_exponent(q, ctx.p)
    if c is None:
        raise ValueError(f"q={q} is not a power of p={ctx.p}")
    return c


def solve_sigma(ctx: FieldCtx, q: int) -> tuple[FieldElement, ...]:
    """All sigma with sigma^(6(q-1)) = -1, sorted by code."""
    _exponent_of(ctx, q)
    order = 12 * (q - 1)
    if (ctx.r - 1) % order:
        raise NoSolutionError(
            f"12(q-1)={order} does not divide r-1={ctx.r - 1}; no sigma in GF({ctx.p}^{ctx.s})")
    h = ctx.pow(ctx.gen, (ctx.r - 1) // order)
    sols = sorted(ctx.pow(h, 2 * k + 1) for k in range(6 * (q - 1)))
    minus_one = ctx.neg(1)
    for sig in sols:
        if ctx.pow(sig, 6 * (q - 1)) != minus_one:
            raise AssertionError("sigma construction violated its defining relation")
    return tuple(FieldElement(ctx, c) for c in sols)


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int):
    """Solve A x = b over GF(p).  Returns (particular solution, kernel basis)."""
    n_rows, n_cols = len(rows), len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n_cols):
        piv = next((i for i in range(row, n_rows) if aug[i][col] % p), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], p - 2, p)
        aug[row] = [v * inv % p for v in aug[row]]
        for i in range(n_rows):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(v - f * w) % p for v, w in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == n_rows:
            break
    if any(all(v == 0 for v in r[:-1]) and r[-1] for r in aug):
        return None, []
    x = [0] * n_cols
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    kernel = []
    for free in (c for c in range(n_cols) if c not in pivots):
        v = [0] * n_cols
        v[free] = 1
        for i, col in enumerate(pivots):
            v[col] = (-aug[i][free]) % p
        kernel.append(v)
    return x, kernel


def beta_system(ctx: FieldCtx, q: int) -> list[list[int]]:
    """Matrix over GF(p) of beta -> beta^q + beta in the power basis (columns = images of x^i)."""
    _exponent_of(ctx, q)
    cols = []
    for i in range(ctx.s):
        xi = ctx.from_coeffs([0] * i + [1])
        cols.append(ctx.to_coeffs(ctx.add(ctx.pow(xi, q), xi)))
    return [[cols[j][i] for j in range(ctx.s)] for i in range(ctx.s)]


def solve_beta(ctx: FieldCtx, q: int) -> tuple[FieldElement, ...]:
    """All beta with beta^q + beta = 1, sorted by code."""
    p = ctx.p
    mat = beta_system(ctx, q)
    rhs = ctx.to_coeffs(1)
    x0, kernel = _solve_mod_p(mat, rhs, p)
    if x0 is None:
        raise NoSolutionError(f"beta^q + beta = 1 is inconsistent over GF({p}^{ctx.s})")
    sols = []
    for combo in itertools.product(range(p), repeat=len(kernel)):
        v = list(x0)
        for coef, kv in zip(combo, kernel):
            if coef:
                v = [(a + coef * b) % p for a, b in zip(v, kv)]
        sols.append(ctx.from_coeffs(v))
    sols.sort()
    for b in sols:
        if ctx.add(ctx.pow(b, q), b) != 1:
            raise AssertionError("beta solution fails its defining relation")
    return tuple(FieldElement(ctx, c) for c in sols)
