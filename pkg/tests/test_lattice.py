import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mwlattice.ecff import neg
from mwlattice.heights import e1_pairing, legendre_gram
from mwlattice.lattice import (
    GramMatrix,
    LatticeBasis,
    LatticeError,
    NotPSDError,
    RankTooLargeError,
    density_from_normalized,
    euclidean_embedding,
    exact_det,
    exact_rank,
    gram_from_points,
    is_e8,
    lll_reduce,
    normalized_center_density,
    saturate,
    saturate_generated,
    shortest_vector,
)


def _gram(vectors):
    return GramMatrix([[sum(a * b for a, b in zip(u, v)) for v in vectors] for u in vectors])


def _minor_gcd_squared(vectors, k):
    g = 0
    for rows in itertools.combinations(vectors, k):
        g = math.gcd(g, round(np.linalg.det(np.array(rows, dtype=float))))
    return g * g


E8_CARTAN = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
]


def test_exact_det_and_rank():
    assert exact_det([[2, 1], [1, 2]]) == 3
    assert exact_det([[Fraction(1, 2), 0], [0, Fraction(2, 3)]]) == Fraction(1, 3)
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_det(E8_CARTAN) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_exact_det_matches_float(m):
    assert abs(float(exact_det(m)) - np.linalg.det(np.array(m, dtype=float))) < 1e-6


def test_saturate_redundant_multiple():
    v = (1, 1, 1)
    b = saturate(_gram([v, v, tuple(2 * x for x in v)]))
    assert b.rank == 1
    assert b.det == 3


def test_saturate_fills_in_missing_index():
    # (2,0) and (1,1) generate an index-2 sublattice of Z^2
    b = saturate(_gram([(2, 0), (1, 1)]))
    assert b.det == 4
    # adding (1,0) gives all of Z^2
    assert saturate(_gram([(2, 0), (1, 1), (1, 0)])).det == 1


vec3 = st.lists(st.integers(-4, 4), min_size=3, max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.lists(vec3, min_size=3, max_size=6), st.randoms(use_true_random=False))
def test_saturation_det_is_minor_gcd_squared(vectors, rnd):
    assume(np.linalg.matrix_rank(np.array(vectors, dtype=float)) == 3)
    expected = _minor_gcd_squared(vectors, 3)
    b = saturate(_gram(vectors))
    assert b.rank == 3
    assert b.det == expected
    # generator order and duplicated generators do not matter
    shuffled = list(vectors)
    rnd.shuffle(shuffled)
    shuffled.append(shuffled[0])
    assert saturate(_gram(shuffled)).det == expected


def test_saturate_legendre_oracles():
    assert saturate(GramMatrix(legendre_gram(4))).det == Fraction(9, 16)
    assert saturate(GramMatrix(legendre_gram(6))).det == Fraction(25, 12) ** 2
    assert saturate(GramMatrix(legendre_gram(10))).det == Fraction(43046721, 6400)


def test_saturate_legendre_parity_class():
    # one parity class for d = 6: three points, one relation
    g = legendre_gram(6)
    cls = [[g[i][j] for j in (0, 2, 4)] for i in (0, 2, 4)]
    b = saturate(GramMatrix(cls))
    assert b.rank == 2
    assert b.det == Fraction(25, 12)


def test_lazy_and_full_saturation_agree(e1_q5_reduced):
    params, E, points = e1_q5_reduced
    pair = e1_pairing(E)
    full = saturate(gram_from_points(points, pair))
    lazy = saturate_generated(points, pair, expected_rank=params.rank)
    assert full.rank == lazy.rank == 8
    assert full.det == lazy.det == 1
    assert is_e8(full) and is_e8(lazy)


def test_gram_from_points_drops_sign_duplicates(e1_q5_reduced):
    _, E, points = e1_q5_reduced
    pair = e1_pairing(E)
    mixed = points[:5] + [neg(E, P) for P in points[:5]] + points[:2]
    g = gram_from_points(mixed, pair, negate=lambda P: neg(E, P))
    assert g == gram_from_points(points[:5], pair)
    assert g[0, 1] == pair(points[0], points[1])
    assert gram_from_points(mixed, pair).n_gen == 12


def test_gram_matrix_json_roundtrip():
    g = GramMatrix(legendre_gram(6))
    assert GramMatrix.from_json(g.to_json()) == g
    assert g.scale == 6
    with pytest.raises(ValueError):
        GramMatrix([[1, 2], [3, 1]])


def test_basis_must_be_positive_definite():
    with pytest.raises(NotPSDError):
        LatticeBasis([[1, 2], [2, 1]])


def test_density_examples():
    assert normalized_center_density(8, 2, 1).delta == Fraction(1, 16)
    assert normalized_center_density(2, Fraction(3, 8), Fraction(9, 16)).delta == Fraction(1, 8)
    assert normalized_center_density(4, Fraction(5, 12), Fraction(25, 12) ** 2).delta == Fraction(1, 192)
    with pytest.raises(ValueError):
        normalized_center_density(2, 0, 1)


def test_density_from_normalized_anchors():
    assert density_from_normalized(8, Fraction(1, 16)) == pytest.approx(math.pi ** 4 / 384, rel=1e-12)
    assert density_from_normalized(1, Fraction(1, 2)) == pytest.approx(1.0, rel=1e-12)
    hex_delta = normalized_center_density(2, 1, Fraction(3, 4)).delta
    assert density_from_normalized(2, hex_delta) == pytest.approx(math.pi / math.sqrt(12), rel=1e-12)
    # odd dimension through Gamma(k + 1/2): unit ball in R^3 has volume 4 pi / 3
    assert density_from_normalized(3, 1) == pytest.approx(4 * math.pi / 3, rel=1e-12)


def test_lll_is_unimodular_change_of_basis():
    g = _gram([(1, 0, 0), (7, 1, 0), (13, 5, 1)]).entries
    G, T = lll_reduce(g)
    assert abs(exact_det(T)) == 1
    n = len(T)
    again = [[sum(T[i][k] * g[k][l] * T[j][l] for k in range(n) for l in range(n)) for j in range(n)]
             for i in range(n)]
    assert again == [list(r) for r in G]
    assert sorted(G[i][i] for i in range(n)) == [1, 1, 1]


def _ambient_minimum(vectors):
    """Shortest nonzero vector of the full-rank lattice spanned by integer rows, by exhaustive search."""
    k = len(vectors[0])
    V = np.array(vectors, dtype=float)
    bound = min(sum(x * x for x in v) for v in vectors)
    r = math.isqrt(bound)
    best = None
    for u in itertools.product(range(-r, r + 1), repeat=k):
        n = sum(x * x for x in u)
        if n == 0 or n > bound or (best is not None and n >= best):
            continue
        # u is in the lattice iff it is an integer combination of the rows
        coeffs, *_ = np.linalg.lstsq(V.T, np.array(u, dtype=float), rcond=None)
        if np.allclose(V.T @ coeffs, u) and np.allclose(coeffs, np.round(coeffs)):
            best = n
    return best if best is not None else bound


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_shortest_vector_matches_exhaustive_search(vectors):
    assume(round(abs(np.linalg.det(np.array(vectors, dtype=float)))) != 0)
    b = LatticeBasis(_gram(vectors).entries)
    norm, coeffs = shortest_vector(b)
    assert norm == _ambient_minimum(vectors)
    # the witness has the claimed norm
    assert sum(coeffs[i] * b.gram[i][j] * coeffs[j] for i in range(3) for j in range(3)) == norm
    assert any(coeffs)


def test_shortest_vector_rank_limit():
    with pytest.raises(RankTooLargeError):
        shortest_vector(LatticeBasis([[int(i == j) for j in range(13)] for i in range(13)]))
    with pytest.raises(LatticeError):
        shortest_vector(LatticeBasis([[4]]), bound=1)


def test_is_e8():
    assert is_e8(LatticeBasis(E8_CARTAN))
    assert not is_e8(LatticeBasis([[int(i == j) for j in range(8)] for i in range(8)]))
    # even with minimum 2, but det 256
    assert not is_e8(LatticeBasis([[2 * int(i == j) for j in range(8)] for i in range(8)]))
    assert shortest_vector(LatticeBasis(E8_CARTAN))[0] == 2


def test_euclidean_embedding():
    b = LatticeBasis(E8_CARTAN)
    U = euclidean_embedding(b)
    assert np.allclose(U @ U.T, np.array(E8_CARTAN, dtype=float), atol=1e-12)
    assert np.allclose(U, np.triu(U))


def test_q5_lattice_has_240_roots(e1_q5_reduced):
    params, E, points = e1_q5_reduced
    b = saturate_generated(points, e1_pairing(E), expected_rank=params.rank)
    G, _ = lll_reduce(b.gram)
    Gi = np.array([[int(v) for v in row] for row in G])
    X = np.array(list(itertools.product(range(-2, 3), repeat=8)))
    norms = np.einsum("ij,jk,ik->i", X, Gi, X)
    assert int(np.sum(norms == 2)) == 240
    assert int(np.sum(norms == 0)) == 1
