"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the q=17 row takes about a minute).
"""

import random
from fractions import Fraction

import pytest

from mwlattice import bounds
from mwlattice.cli import build_parser
from mwlattice.ecff import add, dedup_up_to_sign, double, neg
from mwlattice.heights import (
    canonical_height_e1,
    combination,
    e1_pairing,
    legendre_gram,
    legendre_height,
    legendre_min_norm_bound,
    naive_height,
    nice_check,
    nice_height,
)
from mwlattice.lattice import GramMatrix, exact_rank, gram_from_points, is_e8, saturate


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return _report


def _rel(a, b):
    return abs(float(a) - float(b)) / abs(float(b))


def test_criterion_1_q5_density_is_exactly_one_sixteenth(report, table1_row):
    details, ok = [], True
    for s in (4, 8, 12):
        row = table1_row(5, 1, s)
        good = (row.delta_computed == Fraction(1, 16) and row.delta_analytic == Fraction(1, 16)
                and row.seconds < 60)
        ok &= good
        details.append(f"s={s}: computed {row.delta_computed.expression()}, "
                       f"analytic {row.delta_analytic.expression()}, {row.seconds:.1f}s")
    report(1, ok, "; ".join(details))


def test_criterion_2_q5_lattice_is_e8(report, table1_row):
    b = table1_row(5, 1, 4).basis
    report(2, is_e8(b), f"rank {b.rank}, det {b.det}, diagonal entries {sorted({str(b.gram[i][i]) for i in range(b.rank)})}")


def test_criterion_3_q11_r121(report, table1_row):
    row = table1_row(11, 1, 2)
    err = _rel(row.delta_computed, Fraction(1, 11))
    ok = (err <= 1e-3 and row.delta_analytic == Fraction(1, 11) and row.dimension == 20
          and row.seconds < 600)
    report(3, ok, f"computed {row.delta_computed.expression()} (rel err {err:.1e}), analytic "
                  f"{row.delta_analytic.expression()}, dimension {row.dimension}, {row.seconds:.1f}s")


def test_criterion_4_q11_r11_6_analytic(report, table1_row):
    row = table1_row(11, 1, 6, computed=False)
    report(4, row.delta_analytic == Fraction(1, 11 ** 3),
           f"analytic {row.delta_analytic.expression()} ~ {row.delta_analytic.decimal()}")


@pytest.mark.slow
def test_criterion_5_q17(report, table1_row):
    row = table1_row(17, 1, 4)
    exact = row.delta_analytic.square == (Fraction(3, 2) ** 16 / 17 ** 4) ** 2
    err = _rel(row.delta_computed, 2.272)
    ok = exact and err <= 0.01 and row.sha.nontrivial and row.seconds < 7200
    report(5, ok, f"analytic {row.delta_analytic.decimal()} (exact: {exact}), computed "
                  f"{row.delta_computed.decimal()} (rel err {err:.1e} vs 2.272), "
                  f"|Sha| >= {row.sha.value}, {row.seconds:.1f}s")


TABLE2_PRINTED = {
    (3, 1): (0.125, 0.005),
    (3, 2): (1.953e-6, 0.005),
    (3, 3): (3.208e-26, 0.005),
    (5, 1): (0.005, 0.05),
    (5, 2): (8.119e-24, 0.005),
    (7, 1): (1.22e-4, 0.005),
}


def test_criterion_6_legendre_table(report, table2_row):
    ok, details = True, []
    for (p, f), (printed, tol) in TABLE2_PRINTED.items():
        row = table2_row(p, f)
        err = _rel(row.delta, printed)
        ok &= err <= tol and row.seconds < 60
        details.append(f"({p},{f}) {row.delta.decimal()} err {err:.1e}")
    report(6, ok, "; ".join(details))


def test_criterion_7_closed_form_oracles(report):
    d4 = saturate(GramMatrix(legendre_gram(4))).det
    g6 = legendre_gram(6)
    cls = saturate(GramMatrix([[g6[i][j] for j in (0, 2, 4)] for i in (0, 2, 4)])).det
    report(7, d4 == Fraction(9, 16) and cls == Fraction(25, 12),
           f"d=4 det {d4}, d=6 parity-class det {cls}")


def test_criterion_8_property_suites(report, e1_q5):
    params, E, points = e1_q5
    rng = random.Random(8)
    q = params.q
    checks = {}

    sums = []
    while len(sums) < 50:
        P, Q = rng.sample(points, 2)
        R = add(E, P, Q)
        if not R.is_identity:
            sums.append(R)
    checks["h(2P)=4h(P)"] = all(naive_height(double(E, P)) == 4 * naive_height(P) for P in points + sums)
    pairs = [rng.sample(points, 2) for _ in range(50)]
    checks["parallelogram"] = all(
        naive_height(add(E, P, Q)) + naive_height(sub_) == 2 * naive_height(P) + 2 * naive_height(Q)
        for (P, Q), sub_ in ((pq, add(E, pq[0], neg(E, pq[1]))) for pq in pairs))

    checks["h >= (q+1)/3"] = all(naive_height(P) >= (q + 1) // 3 for P in points)
    reduced = dedup_up_to_sign(E, points)
    pair = e1_pairing(E)
    combos_ok = True
    for _ in range(15):
        chosen = rng.sample(reduced, 6)
        coeffs = [rng.choice([-1, 0, 1]) for _ in chosen]
        if not any(coeffs):
            coeffs[0] = 1
        S = combination(E, coeffs, chosen)
        G = gram_from_points(chosen, pair)
        quad = sum(a * b * G[i, j] for i, a in enumerate(coeffs) for j, b in enumerate(coeffs))
        # the points are independent in the lattice, so the combination is not torsion
        combos_ok &= not S.is_identity and naive_height(S) == quad > 0
    checks["no small combination of height 0"] = combos_ok

    leg_ok = True
    for _ in range(200):
        d = rng.choice([4, 6, 8, 10])
        c = [rng.randint(-3, 3) for _ in range(d)]
        if len({c[i] for i in range(0, d, 2)}) == 1 and len({c[i] for i in range(1, d, 2)}) == 1:
            continue  # relation vector, torsion
        h = legendre_height(c, d) / legendre_min_norm_bound(d)
        leg_ok &= h > 0 and h.denominator == 1
    checks["Legendre heights in (d-1)/(2d) Z_>0"] = leg_ok

    checks["rank d-2"] = all(exact_rank(legendre_gram(d)) == d - 2 for d in (4, 6, 8, 10))

    prof = nice_check(E)
    checks["nice_height = canonical"] = all(nice_height(prof, P) == canonical_height_e1(E, P) for P in sums[:20])

    failed = [k for k, v in checks.items() if not v]
    report(8, not failed, "all of " + ", ".join(checks) if not failed else "failed: " + ", ".join(failed))


def test_criterion_9_dimension_248_out_of_scope(report):
    # stated, not attempted: only the plumbing is exercised here
    args = build_parser().parse_args(["tables", "--very-long"])
    p, c, s = bounds.TABLE1_VERY_LONG_ROWS[0]
    row = bounds.table1_row(p, c, s, computed=False)
    ok = args.very_long and row.dimension == 248
    report(9, ok, f"OUT OF SCOPE, stated: q=5^3 (dimension {row.dimension}) sits behind --very-long; "
                  f"analytic bound at r={p}^{s} is {row.delta_analytic.decimal()}, sublattice not computed")
