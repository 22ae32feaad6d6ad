from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwlattice.ecff import (
    IDENTITY,
    LegendreParams,
    WeierstrassCurve,
    add,
    double,
    legendre_curve,
    legendre_explicit_points,
    mul_scalar,
    neg,
)
from mwlattice.field_tower import InvalidFamilyError, make_field
from mwlattice.funcring import Poly
from mwlattice.heights import (
    NotNiceError,
    canonical_height_e1,
    combination,
    e1_min_norm,
    e1_pairing,
    legendre_gram,
    legendre_height,
    legendre_min_norm_bound,
    legendre_pairing,
    limit_height_probe,
    model_degree,
    naive_height,
    nice_check,
    nice_height,
)
from mwlattice.lattice import exact_rank


def test_explicit_points_have_height_q_plus_1_over_3(e1_q5):
    _, E, points = e1_q5
    assert {canonical_height_e1(E, P) for P in points} == {2}
    assert e1_min_norm(5) == 2 and e1_min_norm(11) == 4 and e1_min_norm(17) == 6


def test_canonical_height_rejects_other_curves():
    L = LegendreParams(3, 1)
    E = legendre_curve(L)
    with pytest.raises(InvalidFamilyError):
        canonical_height_e1(E, legendre_explicit_points(L, E)[0])


def test_doubling_quadruples_height_for_every_point(e1_q5):
    _, E, points = e1_q5
    for P in points:
        assert naive_height(double(E, P)) == 4 * naive_height(P)


def test_doubling_on_random_sums(e1_q5, rng):
    _, E, points = e1_q5
    checked = 0
    while checked < 10:
        P, Q = rng.sample(points, 2)
        R = add(E, P, Q)
        if R.is_identity:
            continue
        assert limit_height_probe(E, R, 1) == [Fraction(naive_height(R))] * 2
        checked += 1
    assert canonical_height_e1(E, R, check=True) == naive_height(R)


def test_quadratic_in_n(e1_q5):
    _, E, points = e1_q5
    for P in points[:6]:
        h = naive_height(P)
        for n in range(-4, 5):
            assert naive_height(mul_scalar(E, n, P)) == n * n * h


def test_parallelogram_law(e1_q5, rng):
    _, E, points = e1_q5
    for _ in range(25):
        P, Q = rng.sample(points, 2)
        lhs = naive_height(add(E, P, Q)) + naive_height(add(E, P, neg(E, Q)))
        assert lhs == 2 * naive_height(P) + 2 * naive_height(Q)


def test_pairing_is_symmetric_and_bilinear(e1_q5, rng):
    _, E, points = e1_q5
    pair = e1_pairing(E)
    for _ in range(10):
        P, Q, R = rng.sample(points, 3)
        assert pair(P, Q) == pair(Q, P)
        assert pair(P, P) == naive_height(P)
        assert pair(P, neg(E, Q)) == -pair(P, Q)
        assert pair(add(E, P, Q), R) == pair(P, R) + pair(Q, R)


def test_legendre_pairing_values():
    # d = 4: (3*2)/8 on the diagonal, -3/4 for even offsets, 0 for odd
    assert legendre_pairing(0, 0, 4) == Fraction(3, 4)
    assert legendre_pairing(0, 2, 4) == Fraction(-3, 4)
    assert legendre_pairing(1, 2, 4) == 0
    assert legendre_pairing(3, 3, 10) == Fraction(36, 10)
    with pytest.raises(IndexError):
        legendre_pairing(0, 4, 4)


@pytest.mark.parametrize("d", [4, 6, 8, 10])
def test_legendre_rank_is_d_minus_2(d):
    assert exact_rank(legendre_gram(d)) == d - 2


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_legendre_kernel_is_torsion_under_group_law(p, f):
    # the two vectors the closed form pairs to zero must be torsion points
    params = LegendreParams(p, f)
    E = legendre_curve(params)
    pts = legendre_explicit_points(params, E)
    d = params.d
    for parity in (0, 1):
        vec = [1 if i % 2 == parity else 0 for i in range(d)]
        assert legendre_height(vec, d) == 0
        S = combination(E, vec, pts)
        assert mul_scalar(E, 4, S).is_identity


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([4, 6, 8, 10]).flatmap(
    lambda d: st.lists(st.integers(-3, 3), min_size=d, max_size=d)))
def test_legendre_heights_are_multiples_and_vanish_only_on_relations(coeffs):
    d = len(coeffs)
    h = legendre_height(coeffs, d)
    unit = legendre_min_norm_bound(d)
    assert h >= 0
    assert (h / unit).denominator == 1
    even = {coeffs[i] for i in range(0, d, 2)}
    odd = {coeffs[i] for i in range(1, d, 2)}
    assert (h == 0) == (len(even) == 1 and len(odd) == 1)


def _short(F, a4, a6):
    return WeierstrassCurve.short(Poly.from_ints(F, a4), Poly.from_ints(F, a6))


def test_nice_check_e1(e1_q5):
    _, E, _ = e1_q5
    prof = nice_check(E)
    assert prof.nice and prof.d == 1 and prof.chi == 1
    assert prof.condition1 and prof.condition2


def test_nice_check_examples():
    F = make_field(7, 1)
    # y^2 = x^3 + t: discriminant -432 t^2, double root where a4 = 0
    prof = nice_check(_short(F, [], [0, 1]))
    assert prof.nice
    assert prof.double_factor == Poly.t(F)
    # y^2 = x^3 + t^3: discriminant has a sextuple root
    prof = nice_check(_short(F, [], [0, 0, 0, 1]))
    assert not prof.condition1 and not prof.nice
    # y^2 = x^3 - 3x + 2 + t^2: 27 t^2 (t^2 + 4), double root with a4 = -3 != 0
    prof = nice_check(_short(F, [-3], [2, 0, 1]))
    assert prof.condition1 and not prof.condition2 and not prof.nice


def test_nice_check_requires_large_characteristic():
    L = LegendreParams(3, 1)
    with pytest.raises(ValueError):
        nice_check(legendre_curve(L))


def test_model_degree():
    F = make_field(7, 1)
    assert model_degree(Poly(F), Poly.monomial(F, 5)) == 1
    assert model_degree(Poly.monomial(F, 5), Poly(F)) == 2
    assert model_degree(Poly(F), Poly.monomial(F, 13)) == 3


def test_nice_height_matches_canonical(e1_q5, rng):
    _, E, points = e1_q5
    prof = nice_check(E)
    checked = 0
    while checked < 20:
        P, Q = rng.sample(points, 2)
        R = add(E, P, Q) if rng.random() < 0.5 else add(E, double(E, P), Q)
        if R.is_identity:
            continue
        assert nice_height(prof, R) == canonical_height_e1(E, R)
        checked += 1


def test_nice_height_refuses_bad_input():
    F = make_field(7, 1)
    prof = nice_check(_short(F, [], [0, 0, 0, 1]))
    with pytest.raises(ValueError):
        nice_height(prof, IDENTITY)
    # (-t, 0) lies on y^2 = x^3 + t^3
    P = prof.curve.point(-Poly.t(F), Poly(F))
    with pytest.raises(NotNiceError):
        nice_height(prof, P)


@pytest.mark.parametrize("a4,a6,bad_root", [
    ([], [0, 0, 0, 0, 0, 0, 1], 0),                       # y^2 = x^3 + t^6
    ([0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0, 1, 1], 0),        # t^4, t^6 (t + 1)
    ([0, 0, 0, 1], [0, 0, 0, 0, 0, 0, 1], None),          # ord a4 = 3 keeps it minimal
    ([1, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0, 1], None),
])
def test_nonminimal_models_are_rejected(a4, a6, bad_root):
    F = make_field(7, 1)
    E = _short(F, a4, a6)
    if bad_root is None:
        nice_check(E)
    else:
        with pytest.raises(ValueError, match="not minimal"):
            nice_check(E)
