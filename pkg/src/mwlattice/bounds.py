"""Density lower bounds for the two curve families and the table drivers."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass
from fractions import Fraction

from .ecff import (
    CurveE1Params,
    LegendreParams,
    dedup_up_to_sign,
    e1_curve,
    e1_explicit_points,
)
from .exact import SqrtRational
from .field_tower import InvalidFamilyError, is_prime, prime_power_exponent
from .heights import e1_min_norm, e1_pairing, legendre_gram, legendre_min_norm_bound
from .lattice import (
    MAX_ENUM_RANK,
    DensityReport,
    GramMatrix,
    LatticeBasis,
    normalized_center_density,
    saturate,
    saturate_generated,
    shortest_vector,
)

log = logging.getLogger(__name__)


class RankDeficiencyError(RuntimeError):
    """The explicit points generate a lattice of smaller rank than expected."""


# best known normalized center densities, as printed next to the two tables
BEST_KNOWN_TABLE1 = {8: 0.0625, 20: 0.1315, 32: 2.565}
BEST_KNOWN_TABLE2 = {2: 0.288, 8: 0.0625, 26: 0.577, 4: 0.125, 24: 1.003, 6: 0.0721}

TABLE1_ROWS = [(5, 1, 4), (5, 1, 8), (5, 1, 12), (11, 1, 2), (11, 1, 6)]
TABLE1_LONG_ROWS = [(17, 1, 4)]
# printed with r = 5^16, which violates c | s; the smallest valid s is used instead
TABLE1_VERY_LONG_ROWS = [(5, 3, 12)]
TABLE2_ROWS = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)]


def _prime_of(q: int) -> int:
    for p in range(2, q + 1):
        if q % p == 0:
            return p
    raise InvalidFamilyError(f"q={q} is not a prime power")


def prop47_bound(q: int, r: int, sha_lower: int = 1) -> SqrtRational:
    """sqrt(|Sha|) / r^(floor(q/6)/2) * ((q+1)/12)^(q-1)."""
    if q < 5 or q % 6 != 5:
        raise InvalidFamilyError(f"q={q} must be a power of a prime p = -1 mod 6 with odd exponent")
    p = _prime_of(q)
    c = prime_power_exponent(q, p)
    if c is None or c % 2 == 0 or not is_prime(p):
        raise InvalidFamilyError(f"q={q} must be an odd power of a prime")
    if prime_power_exponent(r, p) is None:
        raise InvalidFamilyError(f"r={r} is not a power of {p}")
    if sha_lower < 1:
        raise ValueError("|Sha| is at least 1")
    square = Fraction(sha_lower, r ** (q // 6)) * Fraction(q + 1, 12) ** (2 * (q - 1))
    return SqrtRational(square)


@dataclass(frozen=True)
class ShaBound:
    value: Fraction
    nontrivial: bool

    def to_json(self) -> dict:
        return {"sha_lower": str(self.value), "decimal": float(self.value), "nontrivial": self.nontrivial}


def sha_lower_bound(delta_computed: SqrtRational, delta_analytic: SqrtRational) -> ShaBound:
    """|Sha| >= (computed / analytic)^2, the analytic bound taken with |Sha| = 1."""
    if delta_computed.square <= 0 or delta_analytic.square <= 0:
        raise ValueError("densities must be positive")
    ratio_sq = delta_computed.square / delta_analytic.square
    return ShaBound(ratio_sq, ratio_sq > 1)


@dataclass
class Table1Row:
    q: int
    r: int
    p: int
    s: int
    dimension: int
    delta_analytic: SqrtRational
    delta_computed: SqrtRational | None = None
    report: DensityReport | None = None
    basis: LatticeBasis | None = None
    sha: ShaBound | None = None
    best_known: float | None = None
    seconds: float = 0.0

    @property
    def r_label(self) -> str:
        return f"{self.p}^{self.s}"

    def csv_fields(self) -> list[str]:
        return [
            str(self.q),
            self.r_label,
            self.delta_computed.decimal() if self.delta_computed else "",
            self.delta_analytic.decimal(),
            str(self.dimension),
            "" if self.best_known is None else str(self.best_known),
            "" if self.sha is None else str(self.sha.value),
        ]

    def to_json(self) -> dict:
        out = {
            "q": self.q,
            "r": self.r_label,
            "dimension": self.dimension,
            "delta_computed": self.delta_computed.to_json() if self.delta_computed else None,
            "delta_prop47": self.delta_analytic.to_json(),
            "best_known": self.best_known,
            "sha_lower": self.sha.to_json() if self.sha else None,
        }
        if self.report is not None:
            out["lattice"] = {"det": str(self.report.det), "n_min": str(self.report.n_min)}
        return out


def e1_lattice(params: CurveE1Params, jobs: int = 1) -> LatticeBasis:
    """Saturated lattice of the explicit E1 points (pairings against an independent subset only)."""
    E = e1_curve(params)
    points = dedup_up_to_sign(E, e1_explicit_points(params, E=E))
    log.info("q=%d r=%d^%d: %d explicit points up to sign", params.q, params.p, params.s, len(points))
    return saturate_generated(points, e1_pairing(E), expected_rank=params.rank, jobs=jobs)


def table1_row(p: int, c: int, s: int, computed: bool = True, jobs: int = 1) -> Table1Row:
    start = time.perf_counter()
    params = CurveE1Params(p, c, s)
    q = params.q
    analytic = prop47_bound(q, params.r)
    row = Table1Row(q=q, r=params.r, p=p, s=s, dimension=params.rank,
                    delta_analytic=analytic, best_known=BEST_KNOWN_TABLE1.get(params.rank))
    if computed:
        basis = e1_lattice(params, jobs=jobs)
        if basis.rank != params.rank:
            raise RankDeficiencyError(
                f"explicit points generate rank {basis.rank}, expected 2(q-1) = {params.rank}")
        report = normalized_center_density(basis.rank, e1_min_norm(q), basis.det)
        row.basis = basis
        row.report = report
        row.delta_computed = report.delta
        row.sha = sha_lower_bound(report.delta, analytic)
    row.seconds = time.perf_counter() - start
    return row


@dataclass
class Table2Row:
    p: int
    f: int
    dimension: int
    min_norm_bound: Fraction
    delta: SqrtRational
    report: DensityReport
    basis: LatticeBasis
    min_norm_enumerated: Fraction | None = None
    delta_enumerated: SqrtRational | None = None
    best_known: float | None = None
    seconds: float = 0.0

    def csv_fields(self) -> list[str]:
        return [
            str(self.p), str(self.f), str(self.dimension), self.delta.decimal(),
            "" if self.best_known is None else str(self.best_known),
        ]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "dimension": self.dimension,
            "min_norm_bound": str(self.min_norm_bound),
            "delta_bound": self.delta.to_json(),
            "det": str(self.basis.det),
            # the true minimum differs from the bound; reported, not tabulated
            "min_norm_enumerated": None if self.min_norm_enumerated is None else str(self.min_norm_enumerated),
            "delta_enumerated": None if self.delta_enumerated is None else self.delta_enumerated.to_json(),
            "best_known": self.best_known,
        }


def legendre_lattice(params: LegendreParams) -> LatticeBasis:
    return saturate(GramMatrix(legendre_gram(params.d)))


def table2_row(p: int, f: int) -> Table2Row:
    start = time.perf_counter()
    params = LegendreParams(p, f)
    basis = legendre_lattice(params)
    if basis.rank != params.rank:
        raise RankDeficiencyError(f"Legendre points generate rank {basis.rank}, expected d-2 = {params.rank}")
    bound = legendre_min_norm_bound(params.d)
    report = normalized_center_density(basis.rank, bound, basis.det)
    row = Table2Row(p=p, f=f, dimension=basis.rank, min_norm_bound=bound, delta=report.delta,
                    report=report, basis=basis, best_known=BEST_KNOWN_TABLE2.get(basis.rank))
    if basis.rank <= MAX_ENUM_RANK:
        norm, _ = shortest_vector(basis)
        row.min_norm_enumerated = norm
        row.delta_enumerated = normalized_center_density(basis.rank, norm, basis.det).delta
    row.seconds = time.perf_counter() - start
    return row


TABLE1_HEADER = ["q", "r", "delta_computed", "delta_prop47", "dimension", "best_known", "sha_lower"]
TABLE2_HEADER = ["p", "f", "dimension", "delta_bound", "best_known"]


def rows_to_csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row.csv_fields())
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([row.to_json() for row in rows], indent=2, sort_keys=True) + "\n"
