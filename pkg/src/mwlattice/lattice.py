"""Exact Gram-matrix lattice algebra.

Everything here runs over ``Fraction`` / ``int``; floats appear only in the
packing density and the Euclidean embedding.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .exact import SqrtRational


class LatticeError(ArithmeticError):
    pass


class NotPSDError(LatticeError):
    """A Gram matrix turned out not to be positive semidefinite."""


class RankTooLargeError(LatticeError):
    pass


def _lcm_denominators(rows) -> int:
    scale = 1
    for row in rows:
        for v in row:
            scale = math.lcm(scale, Fraction(v).denominator)
    return scale


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"Gram matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @property
    def n_gen(self) -> int:
        return len(self.entries)

    @property
    def scale(self) -> int:
        return _lcm_denominators(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_json(self) -> str:
        s = self.scale
        upper = [int(self.entries[i][j] * s) for i in range(self.n_gen) for j in range(i, self.n_gen)]
        return json.dumps({"n_gen": self.n_gen, "scale": s, "entries": upper}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> GramMatrix:
        obj = json.loads(text)
        n, s, vals = obj["n_gen"], obj["scale"], obj["entries"]
        if len(vals) != n * (n + 1) // 2:
            raise ValueError("entry count does not match n_gen")
        rows = [[Fraction(0)] * n for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = Fraction(next(it), s)
        return cls(tuple(map(tuple, rows)))


def exact_det(rows) -> Fraction:
    """Determinant by fraction-free Bareiss elimination on the integer-scaled matrix."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = _lcm_denominators(rows)
    a = [[int(Fraction(v) * scale) for v in row] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], scale ** n)


def exact_rank(rows) -> int:
    m = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    n_cols = len(m[0]) if m else 0
    for col in range(n_cols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class LatticeBasis:
    """Gram matrix of a Z-basis; positive definite."""

    gram: tuple[tuple[Fraction, ...], ...]
    det: Fraction = field(default=None)

    def __post_init__(self):
        g = tuple(tuple(Fraction(v) for v in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if self.det is None:
            object.__setattr__(self, "det", exact_det(g))
        if g and self.det <= 0:
            raise NotPSDError("basis Gram matrix is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def to_gram_matrix(self) -> GramMatrix:
        return GramMatrix(self.gram)


# -- Gram assembly ------------------------------------------------------------

def gram_from_points(points: Sequence, pair: Callable, negate: Callable | None = None) -> GramMatrix:
    """(i, j) -> <P_i, P_j>, after dropping repeats and P/-P duplicates when ``negate`` is given."""
    if negate is not None:
        seen, kept = set(), []
        for P in points:
            if P in seen:
                continue
            seen.add(P)
            seen.add(negate(P))
            kept.append(P)
        points = kept
    n = len(points)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = Fraction(pair(points[i], points[j]))
            rows[i][j] = rows[j][i] = v
    return GramMatrix(tuple(map(tuple, rows)))


# -- saturation ---------------------------------------------------------------

class _IncrementalGramSchmidt:
    """Greedy independent subset of generators, maintained in Gram-Schmidt form.

    ``pair(i, j)`` returns the inner product of generators i and j; calls are
    cached, so a lazily evaluated pairing is computed at most once per pair.
    """

    def __init__(self, pair: Callable[[int, int], Fraction]):
        self._pair = pair
        self._cache: dict[tuple[int, int], Fraction] = {}
        self.basis: list[int] = []
        self.mu: list[list[Fraction]] = []   # mu[j][l], l < j
        self.norms: list[Fraction] = []      # squared lengths of the orthogonalized vectors

    def pair(self, i: int, j: int) -> Fraction:
        key = (i, j) if i <= j else (j, i)
        v = self._cache.get(key)
        if v is None:
            v = Fraction(self._pair(*key))
            self._cache[key] = v
        return v

    def project(self, k: int) -> tuple[list[Fraction], Fraction]:
        mu_k: list[Fraction] = []
        for j, bj in enumerate(self.basis):
            acc = self.pair(k, bj)
            row = self.mu[j]
            for l in range(j):
                if row[l] and mu_k[l]:
                    acc -= row[l] * mu_k[l] * self.norms[l]
            mu_k.append(acc / self.norms[j])
        resid = self.pair(k, k) - sum(m * m * d for m, d in zip(mu_k, self.norms))
        if resid < 0:
            raise NotPSDError(f"generator {k} has negative residual norm {resid}")
        return mu_k, resid

    def offer(self, k: int) -> bool:
        mu_k, resid = self.project(k)
        if resid == 0:
            return False
        self.basis.append(k)
        self.mu.append(mu_k)
        self.norms.append(resid)
        return True

    def coordinates(self, k: int) -> list[Fraction]:
        """Coordinates of generator k in terms of the current independent subset."""
        if k in self.basis:
            return [Fraction(int(b == k)) for b in self.basis]
        mu_k, resid = self.project(k)
        if resid != 0:
            raise LatticeError(f"generator {k} is outside the span of the selected subset")
        n = len(self.basis)
        c = [Fraction(0)] * n
        for j in range(n - 1, -1, -1):
            acc = mu_k[j]
            for l in range(j + 1, n):
                acc -= self.mu[l][j] * c[l]
            c[j] = acc
        return c

    def subset_gram(self) -> list[list[Fraction]]:
        b = self.basis
        return [[self.pair(i, j) for j in b] for i in b]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_basis(rows: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Upper-triangular basis of the Z-row-span of full-rank integer rows (Hermite form)."""
    basis: list[list[int] | None] = [None] * n
    for row in rows:
        v = list(row)
        for j in range(n):
            if v[j] == 0:
                continue
            b = basis[j]
            if b is None:
                basis[j] = v if v[j] > 0 else [-x for x in v]
                break
            a, c = b[j], v[j]
            if c % a == 0:
                f = c // a
                v = [vv - f * bb for vv, bb in zip(v, b)]
                continue
            g, x, y = _xgcd(a, c)
            if g < 0:
                g, x, y = -g, -x, -y
            ag, cg = a // g, c // g
            basis[j] = [x * bb + y * vv for bb, vv in zip(b, v)]
            v = [cg * bb - ag * vv for bb, vv in zip(b, v)]
    if any(b is None for b in basis):
        raise LatticeError("rows do not span a full-rank lattice")
    # reduce entries above each pivot into [0, pivot)
    for j in range(n - 1, -1, -1):
        pj = basis[j]
        for i in range(j):
            bi = basis[i]
            f = bi[j] // pj[j]
            if f:
                basis[i] = [x - f * y for x, y in zip(bi, pj)]
    return basis


def _finish(gs: _IncrementalGramSchmidt, n_gen: int) -> LatticeBasis:
    n = len(gs.basis)
    if n == 0:
        raise LatticeError("generators span the zero lattice")
    coords = [gs.coordinates(k) for k in range(n_gen)]
    denom = _lcm_denominators(coords)
    int_rows = [[int(c * denom) for c in row] for row in coords]
    H = hermite_basis(int_rows, n)
    GB = gs.subset_gram()
    # basis vector i = (1/denom) * sum_j H[i][j] b_j
    HG = [[sum(H[i][k] * GB[k][j] for k in range(n) if H[i][k]) for j in range(n)] for i in range(n)]
    d2 = denom * denom
    gram = [[sum(HG[i][k] * H[j][k] for k in range(n) if H[j][k]) / d2 for j in range(n)]
            for i in range(n)]
    for i in range(n):
        for j in range(i):
            gram[i][j] = gram[j][i]
    det_gb = math.prod(gs.norms, start=Fraction(1))
    index_num = math.prod(H[i][i] for i in range(n))
    det = det_gb * Fraction(index_num, denom ** n) ** 2
    return LatticeBasis(tuple(map(tuple, gram)), det)


def saturate(g: GramMatrix) -> LatticeBasis:
    """Basis Gram of the lattice generated by every generator of ``g``."""
    gs = _IncrementalGramSchmidt(lambda i, j: g.entries[i][j])
    for k in range(g.n_gen):
        gs.offer(k)
    return _finish(gs, g.n_gen)


def saturate_generated(points: Sequence, pair: Callable, expected_rank: int | None = None,
                       jobs: int = 1) -> LatticeBasis:
    """Like ``saturate(gram_from_points(points, pair))`` without the full Gram.

    Only pairings against a greedily chosen independent subset are evaluated
    (about n * len(points) of them).  ``expected_rank`` lets the scan stop
    offering generators once that rank is reached; every generator is still
    checked against the span afterwards.  With ``jobs > 1`` those remaining
    pairings are spread over forked worker processes.
    """
    gs = _IncrementalGramSchmidt(lambda i, j: pair(points[i], points[j]))
    for k in range(len(points)):
        if expected_rank is not None and len(gs.basis) >= expected_rank:
            break
        gs.offer(k)
    if expected_rank is not None:
        if jobs > 1:
            _prefill_parallel(gs, points, pair, jobs)
        # a generator outside the span means the expected rank was too small
        for k in range(len(points)):
            _, resid = gs.project(k)
            if resid:
                gs.offer(k)
    return _finish(gs, len(points))


_WORK: tuple | None = None


def _pair_worker(chunk):
    points, pair = _WORK
    return [(i, j, Fraction(pair(points[i], points[j]))) for i, j in chunk]


def _prefill_parallel(gs: _IncrementalGramSchmidt, points, pair, jobs: int) -> None:
    import multiprocessing as mp

    todo = []
    for k in range(len(points)):
        for b in gs.basis + [k]:
            key = (k, b) if k <= b else (b, k)
            if key not in gs._cache:
                todo.append(key)
    todo = sorted(set(todo))
    if not todo:
        return
    global _WORK
    _WORK = (points, pair)
    try:
        size = max(1, len(todo) // (8 * jobs))
        chunks = [todo[i:i + size] for i in range(0, len(todo), size)]
        with mp.get_context("fork").Pool(jobs) as pool:
            for part in pool.imap(_pair_worker, chunks):
                for i, j, v in part:
                    gs._cache[(i, j)] = v
    finally:
        _WORK = None


def covolume(b: LatticeBasis) -> SqrtRational:
    return SqrtRational(b.det)


# -- densities ----------------------------------------------------------------

def unit_ball_volume_ratio(n: int) -> tuple[Fraction, int]:
    """pi^(n/2) / Gamma(n/2 + 1) as (rational coefficient, power of pi)."""
    if n < 1:
        raise ValueError("dimension must be positive")
    if n % 2 == 0:
        k = n // 2
        return Fraction(1, math.factorial(k)), k
    k = (n + 1) // 2
    # Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!)
    return Fraction(4 ** k * math.factorial(k), math.factorial(2 * k)), (n - 1) // 2


def density_from_normalized(n: int, delta) -> float:
    coef, pi_power = unit_ball_volume_ratio(n)
    if isinstance(delta, SqrtRational):
        value = delta * coef
        return float(value) * math.pi ** pi_power
    return float(delta) * float(coef) * math.pi ** pi_power


@dataclass(frozen=True)
class DensityReport:
    n: int
    n_min: Fraction
    det: Fraction
    rho_sq: Fraction
    delta: SqrtRational
    density: float

    @property
    def covolume(self) -> SqrtRational:
        return SqrtRational(self.det)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "n_min": str(self.n_min),
            "det": str(self.det),
            "rho_squared": str(self.rho_sq),
            "delta": self.delta.to_json(),
            "density": self.density,
        }


def normalized_center_density(n: int, n_min, det) -> DensityReport:
    """det^(-1/2) * (N_min / 4)^(n/2)."""
    n_min, det = Fraction(n_min), Fraction(det)
    if n < 1 or n_min <= 0 or det <= 0:
        raise ValueError("need n >= 1, N_min > 0 and det > 0")
    rho_sq = n_min / 4
    delta = SqrtRational(rho_sq ** n / det)
    return DensityReport(n, n_min, det, rho_sq, delta, density_from_normalized(n, delta))


# -- reduction and short vectors ----------------------------------------------

def _gram_of(T, G):
    n = len(T)
    TG = [[sum(T[i][k] * G[k][j] for k in range(n) if T[i][k]) for j in range(n)] for i in range(n)]
    return [[sum(TG[i][k] * T[j][k] for k in range(n) if T[j][k]) for j in range(n)] for i in range(n)]


def _gso(G):
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            acc = G[i][j] - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))
            mu[i][j] = acc / B[j]
        B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
    return mu, B


def lll_reduce(gram, delta: Fraction = Fraction(3, 4)) -> tuple[list[list[Fraction]], list[list[int]]]:
    """Exact LLL on a Gram matrix.  Returns (reduced Gram, transform T) with reduced = T G T^t."""
    G = [[Fraction(v) for v in row] for row in gram]
    n = len(G)
    T = [[int(i == j) for j in range(n)] for i in range(n)]
    k = 1
    while k < n:
        mu, B = _gso(G)
        for j in range(k - 1, -1, -1):
            m = round(mu[k][j])
            if m:
                T[k] = [a - m * b for a, b in zip(T[k], T[j])]
                G = _gram_of(T, [[Fraction(v) for v in row] for row in gram])
                mu, B = _gso(G)
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            T[k], T[k - 1] = T[k - 1], T[k]
            G = _gram_of(T, [[Fraction(v) for v in row] for row in gram])
            k = max(k - 1, 1)
    return G, T


MAX_ENUM_RANK = 12


def shortest_vector(b: LatticeBasis, bound=None) -> tuple[Fraction, list[int]]:
    """Exact minimum nonzero norm and a witness (coefficients in ``b``'s basis).

    Fincke-Pohst enumeration over the LLL-reduced Gram; ``bound`` caps the
    search radius (default: the shortest reduced basis vector).
    """
    n = b.rank
    if n > MAX_ENUM_RANK:
        raise RankTooLargeError(f"rank {n} exceeds the enumeration limit {MAX_ENUM_RANK}")
    G, T = lll_reduce(b.gram)
    mu, Bn = _gso(G)
    if bound is None:
        i0 = min(range(n), key=lambda i: G[i][i])
        best, best_x = G[i0][i0], [int(i == i0) for i in range(n)]
    else:
        best, best_x = Fraction(bound), None
    x = [0] * n

    def search(i: int, partial: Fraction):
        nonlocal best, best_x
        c = -sum(mu[j][i] * x[j] for j in range(i + 1, n))
        room = best - partial
        if room < 0:
            return
        radius = math.sqrt(float(room / Bn[i]))
        for v in range(math.floor(float(c) - radius) - 1, math.ceil(float(c) + radius) + 2):
            norm = partial + Bn[i] * (v - c) ** 2
            if norm > best:
                continue
            x[i] = v
            if i > 0:
                search(i - 1, norm)
            elif any(x) and (norm < best or best_x is None):
                best, best_x = norm, list(x)
        x[i] = 0

    search(n - 1, Fraction(0))
    if best_x is None:
        raise LatticeError("no nonzero vector within the supplied bound")
    coeffs = [sum(best_x[i] * T[i][j] for i in range(n)) for j in range(n)]
    return best, coeffs


def is_e8(b: LatticeBasis) -> bool:
    if b.rank != 8 or b.det != 1:
        return False
    if any(v.denominator != 1 for row in b.gram for v in row):
        return False
    if any(b.gram[i][i] % 2 for i in range(8)):
        return False
    return shortest_vector(b)[0] == 2


def euclidean_embedding(b: LatticeBasis) -> np.ndarray:
    """Rows are coordinates of the basis vectors; upper triangular, dot products reproduce the Gram."""
    A = np.array([[float(v) for v in row] for row in b.gram])
    n = len(A)
    J = np.eye(n)[::-1]
    try:
        L = np.linalg.cholesky(J @ A @ J)
    except np.linalg.LinAlgError as exc:
        raise LatticeError("numerically singular Gram matrix") from exc
    U = J @ L @ J
    recon = U @ U.T
    err = np.max(np.abs(recon - A)) / max(1.0, np.max(np.abs(A)))
    if err > 1e-9:
        raise LatticeError(f"embedding reconstruction error {err:.2e}")
    return U
