"""Recompute both density tables and compare against the reference values.

    python scripts/reproduce_tables.py            # desk-scale rows (~1 min)
    python scripts/reproduce_tables.py --long     # adds q=17 (~1 more min)
"""

import argparse
import logging

from mwlattice import bounds

# (p, c, s) -> (computed, analytic) reference densities
TABLE1_REFERENCE = {
    (5, 1, 4): (0.0625, 0.0625),
    (5, 1, 8): (0.0625, 0.0625),
    (5, 1, 12): (0.0625, 0.0625),
    (11, 1, 2): (0.0909, 0.0909),
    (11, 1, 6): (0.0909, 0.00075),
    (17, 1, 4): (2.272, 0.0078),
}
TABLE2_REFERENCE = {
    (3, 1): 0.125, (3, 2): 1.953e-6, (3, 3): 3.208e-26,
    (5, 1): 0.005, (5, 2): 8.119e-24, (7, 1): 1.22e-4,
}


def rel(a, b):
    return abs(float(a) - b) / b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--long", action="store_true", help="include q=17")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    row_keys = bounds.TABLE1_ROWS + (bounds.TABLE1_LONG_ROWS if args.long else [])
    print(f"{'q':>3} {'r':>6} {'computed':>12} {'ref':>8} {'err':>8} {'analytic':>13} {'ref':>8} "
          f"{'err':>8} {'|Sha|>=':>8} {'sec':>6}")
    for key in row_keys:
        row = bounds.table1_row(*key, jobs=args.jobs)
        ref_c, ref_a = TABLE1_REFERENCE[key]
        print(f"{row.q:>3} {row.r_label:>6} {row.delta_computed.decimal():>12} {ref_c:>8} "
              f"{rel(row.delta_computed, ref_c):>8.1e} {row.delta_analytic.decimal():>13} {ref_a:>8} "
              f"{rel(row.delta_analytic, ref_a):>8.1e} {str(row.sha.value):>8} {row.seconds:>6.1f}")

    print()
    print(f"{'p':>2} {'f':>2} {'dim':>4} {'delta':>15} {'ref':>10} {'err':>8} {'true min':>9} {'delta(min)':>12}")
    for key in bounds.TABLE2_ROWS:
        row = bounds.table2_row(*key)
        ref = TABLE2_REFERENCE[key]
        true_min = "" if row.min_norm_enumerated is None else str(row.min_norm_enumerated)
        true_delta = "" if row.delta_enumerated is None else row.delta_enumerated.decimal()
        print(f"{row.p:>2} {row.f:>2} {row.dimension:>4} {row.delta.decimal():>15} {ref:>10} "
              f"{rel(row.delta, ref):>8.1e} {true_min:>9} {true_delta:>12}")


if __name__ == "__main__":
    main()
