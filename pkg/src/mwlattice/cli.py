"""Command-line front end: ``mwlat {e1,legendre,tables,nice}``.

Exit codes: 0 ok, 1 internal error, 2 invalid parameters or input files,
3 rank deficiency, 4 curve not nice while heights were requested.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bounds
from .ecff import (
    CurveE1Params,
    CurvePoint,
    LegendreParams,
    WeierstrassCurve,
    e1_curve,
    e1_explicit_points,
    legendre_curve,
    legendre_explicit_points,
    on_curve,
    points_to_json,
)
from .field_tower import InvalidFamilyError, make_field
from .funcring import Poly, RationalFunction
from .heights import in_large_degree_regime, nice_check, nice_height
from .lattice import MAX_ENUM_RANK, is_e8, shortest_vector

log = logging.getLogger("mwlattice")

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_RANK, EXIT_NOT_NICE = 0, 1, 2, 3, 4
MAGIC = "MWLAT1"


class InputFormatError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    fmt: str = "pretty"
    output: Path | None = None
    long_run: bool = False
    very_long_run: bool = False
    jobs: int = 1
    verbosity: int = 0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        skip = {"command", "format", "output", "long", "very_long", "jobs", "verbose", "func"}
        params = {k: v for k, v in vars(args).items() if k not in skip}
        jobs = args.jobs
        env = os.environ.get("MWLAT_THREADS")
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise InputFormatError(f"MWLAT_THREADS must be an integer, got {env!r}") from None
        return cls(
            command=args.command, params=params, fmt=args.format,
            output=Path(args.output) if args.output else None,
            long_run=getattr(args, "long", False), very_long_run=getattr(args, "very_long", False),
            jobs=max(1, jobs), verbosity=args.verbose,
        )


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is not None:
        cfg.output.write_text(text)
    else:
        sys.stdout.write(text)


# -- e1 ----------------------------------------------------------------------

def cmd_e1(cfg: RunConfig) -> int:
    p, c, s = cfg.params["p"], cfg.params["c"], cfg.params["s"]
    try:
        row = bounds.table1_row(p, c, s, jobs=cfg.jobs)
    except InvalidFamilyError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except bounds.RankDeficiencyError as exc:
        print(f"rank deficiency: {exc}", file=sys.stderr)
        return EXIT_RANK
    basis = row.basis
    e8 = is_e8(basis) if basis.rank == 8 else None
    shortest = shortest_vector(basis)[0] if basis.rank <= MAX_ENUM_RANK else None

    if cfg.params.get("gram_out"):
        Path(cfg.params["gram_out"]).write_text(basis.to_gram_matrix().to_json() + "\n")
    if cfg.params.get("points_out"):
        params = CurveE1Params(p, c, s)
        E = e1_curve(params)
        Path(cfg.params["points_out"]).write_text(points_to_json(E, e1_explicit_points(params, E=E)) + "\n")

    if cfg.fmt == "csv":
        _emit(cfg, bounds.rows_to_csv([row], bounds.TABLE1_HEADER))
    elif cfg.fmt == "json":
        obj = row.to_json()
        obj["is_e8"] = e8
        obj["shortest_norm"] = None if shortest is None else str(shortest)
        _emit(cfg, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            f"E1: y^2 = x^3 + t^{row.q} - t over GF({p}^{s})(t)",
            f"  q = {row.q}, r = {p}^{s}, dimension = {row.dimension}",
            f"  basis det = {basis.det}",
            f"  delta (explicit sublattice) = {row.delta_computed.expression()} ~ {row.delta_computed.decimal()}",
            f"  delta (analytic, |Sha| >= 1) = {row.delta_analytic.expression()} ~ {row.delta_analytic.decimal()}",
            f"  packing density >= {row.report.density:.6g}",
            f"  |Sha| >= {row.sha.value} ({'nontrivial' if row.sha.nontrivial else 'trivial'})",
        ]
        if row.best_known is not None:
            lines.append(f"  best known normalized density = {row.best_known}")
        if e8 is not None:
            lines.append(f"  lattice = E8: {str(e8).lower()}")
        if shortest is not None:
            lines.append(f"  shortest vector norm = {shortest}")
        lines.append(f"  time = {row.seconds:.1f} s")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


# -- legendre ----------------------------------------------------------------

def cmd_legendre(cfg: RunConfig) -> int:
    p, f = cfg.params["p"], cfg.params["f"]
    try:
        params = LegendreParams(p, f)
        row = bounds.table2_row(p, f)
    except InvalidFamilyError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except bounds.RankDeficiencyError as exc:
        print(f"rank deficiency: {exc}", file=sys.stderr)
        return EXIT_RANK

    transcript = []
    if cfg.params.get("points"):
        E = legendre_curve(params)
        for i, P in enumerate(legendre_explicit_points(params, E=E)):
            transcript.append((i, P, on_curve(E, P)))

    if cfg.fmt == "csv":
        _emit(cfg, bounds.rows_to_csv([row], bounds.TABLE2_HEADER))
    elif cfg.fmt == "json":
        obj = row.to_json()
        if transcript:
            obj["points"] = [dict(P.to_json(), index=i, on_curve=ok) for i, P, ok in transcript]
        _emit(cfg, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            f"Legendre: y^2 = x(x+1)(x+u^{params.d}) over GF({p}^{2 * f})(u), d = {params.d}",
            f"  dimension = {row.dimension}, basis det = {row.basis.det}",
            f"  min norm bound (d-1)/(2d) = {row.min_norm_bound}",
            f"  delta (using the bound) = {row.delta.expression()} ~ {row.delta.decimal()}",
        ]
        if row.min_norm_enumerated is not None:
            lines.append(f"  enumerated min norm = {row.min_norm_enumerated} "
                         f"(delta would be {row.delta_enumerated.decimal()}; not what the table reports)")
        if row.best_known is not None:
            lines.append(f"  best known normalized density = {row.best_known}")
        for i, P, ok in transcript:
            lines.append(f"  P_{i}: x = {list(P.x.num)}, y = {list(P.y.num)}  on curve: {ok}")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


# -- tables ------------------------------------------------------------------

def cmd_tables(cfg: RunConfig) -> int:
    outdir = Path(cfg.params.get("outdir") or "tables")
    outdir.mkdir(parents=True, exist_ok=True)
    row_keys = list(bounds.TABLE1_ROWS)
    if cfg.long_run or cfg.very_long_run:
        row_keys += bounds.TABLE1_LONG_ROWS
    if cfg.very_long_run:
        row_keys += bounds.TABLE1_VERY_LONG_ROWS
    failures = 0
    rows1 = []
    for key in row_keys:
        try:
            row = bounds.table1_row(*key, jobs=cfg.jobs)
        except Exception as exc:  # report and keep going
            log.error("table 1 row %s failed: %s", key, exc)
            failures += 1
            continue
        log.info("table 1 row q=%d r=%s done in %.1f s", row.q, row.r_label, row.seconds)
        rows1.append(row)
    rows2 = []
    for key in bounds.TABLE2_ROWS:
        try:
            rows2.append(bounds.table2_row(*key))
        except Exception as exc:
            log.error("table 2 row %s failed: %s", key, exc)
            failures += 1
    if cfg.fmt == "json":
        (outdir / "table1.json").write_text(bounds.rows_to_json(rows1))
        (outdir / "table2.json").write_text(bounds.rows_to_json(rows2))
    else:
        (outdir / "table1.csv").write_text(bounds.rows_to_csv(rows1, bounds.TABLE1_HEADER))
        (outdir / "table2.csv").write_text(bounds.rows_to_csv(rows2, bounds.TABLE2_HEADER))
    if cfg.fmt == "pretty":
        sys.stdout.write(bounds.rows_to_csv(rows1, bounds.TABLE1_HEADER))
        sys.stdout.write("\n")
        sys.stdout.write(bounds.rows_to_csv(rows2, bounds.TABLE2_HEADER))
    return EXIT_INTERNAL if failures else EXIT_OK


# -- nice --------------------------------------------------------------------

_VEC = re.compile(r"\[[^\]]*\]")


def _content_lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]


def _check_header(lines: list[str], kind: str, name: str) -> None:
    if not lines or not lines[0].startswith(MAGIC):
        raise InputFormatError(f"{name}: missing '{MAGIC}' header")
    rest = lines[0][len(MAGIC):].split()
    if rest and rest[0] != kind:
        raise InputFormatError(f"{name}: expected a {kind} file, header says {rest[0]!r}")


def read_model(text: str, name: str = "model") -> WeierstrassCurve:
    """MWLAT1 model / 'p s' / a1 a2 a3 a4 a6 as coefficient vectors (one per line or all on one)."""
    lines = _content_lines(text)
    _check_header(lines, "model", name)
    try:
        p, s = (int(v) for v in lines[1].split())
        ctx = make_field(p, s)
        vecs = _VEC.findall(" ".join(lines[2:]))
        if len(vecs) != 5:
            raise InputFormatError(f"{name}: expected 5 coefficient vectors a1 a2 a3 a4 a6, got {len(vecs)}")
        coeffs = [Poly.from_text(ctx, v) for v in vecs]
        return WeierstrassCurve(ctx, *coeffs, name=name)
    except InputFormatError:
        raise
    except (ValueError, IndexError) as exc:
        raise InputFormatError(f"{name}: {exc}") from exc


def read_points(text: str, E: WeierstrassCurve, name: str = "points") -> list[CurvePoint]:
    """MWLAT1 points / one point per line: x_num x_den y_num y_den."""
    lines = _content_lines(text)
    if not lines:
        return []
    _check_header(lines, "points", name)
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        vecs = _VEC.findall(line)
        if len(vecs) != 4:
            raise InputFormatError(f"{name}:{lineno}: expected 4 coefficient vectors")
        try:
            xn, xd, yn, yd = (Poly.from_text(E.ctx, v) for v in vecs)
            P = CurvePoint(RationalFunction(xn, xd), RationalFunction(yn, yd))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"{name}:{lineno}: {exc}") from exc
        if not on_curve(E, P):
            raise InputFormatError(f"{name}:{lineno}: point is not on the curve")
        out.append(P)
    return out


def write_model(E: WeierstrassCurve) -> str:
    lines = [f"{MAGIC} model", f"{E.ctx.p} {E.ctx.s}"]
    lines += [a.to_text() for a in E.coefficients]
    return "\n".join(lines) + "\n"


def write_points(points) -> str:
    lines = [f"{MAGIC} points"]
    for P in points:
        lines.append(" ".join(Poly(P.x.ctx, v).to_text() for v in (P.x.num, P.x.den, P.y.num, P.y.den)))
    return "\n".join(lines) + "\n"


def cmd_nice(cfg: RunConfig) -> int:
    try:
        E = read_model(Path(cfg.params["model"]).read_text(), cfg.params["model"])
        points = []
        if cfg.params.get("points"):
            points = read_points(Path(cfg.params["points"]).read_text(), E, cfg.params["points"])
        profile = nice_check(E)
    except (InputFormatError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if points and not profile.nice:
        heights = None
    else:
        heights = [(nice_height(profile, P), in_large_degree_regime(profile, P)) for P in points]

    if cfg.fmt == "json":
        obj = profile.to_json()
        if heights is not None:
            obj["heights"] = [{"height": h, "large_degree_regime": big} for h, big in heights]
        _emit(cfg, json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            f"model over GF({E.ctx.p}^{E.ctx.s})(t): d = {profile.d}, chi = {profile.chi}",
            f"  discriminant degree = {profile.discriminant.deg}",
        ]
        for mult, fac in profile.root_factors.items():
            lines.append(f"  roots of multiplicity {mult}: factor {list(fac.coeffs)} (degree {fac.deg})")
        lines.append(f"  condition 1 (root multiplicities <= 2): {'pass' if profile.condition1 else 'FAIL'}")
        lines.append(f"  condition 2 (double roots are additive): {'pass' if profile.condition2 else 'FAIL'}")
        lines += [f"  note: {n}" for n in profile.notes]
        lines.append(f"  nice: {str(profile.nice).lower()}")
        for i, (h, big) in enumerate(heights or []):
            flag = "" if big else "  (deg f below deg g + 2d: formula outside the deg-f regime)"
            lines.append(f"  point {i}: height = {h}{flag}")
        _emit(cfg, "\n".join(lines) + "\n")
    if points and not profile.nice:
        print("curve is not nice; heights not computed", file=sys.stderr)
        return EXIT_NOT_NICE
    return EXIT_OK


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mwlat", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for pairing evaluation")
    common.add_argument("--verbose", "-v", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    e1 = sub.add_parser("e1", parents=[common], help="y^2 = x^3 + t^q - t over F_r(t)")
    e1.add_argument("--p", type=int, required=True)
    e1.add_argument("--c", type=int, default=1, help="q = p^c")
    e1.add_argument("--s", type=int, required=True, help="r = p^s")
    e1.add_argument("--gram-out", help="write the saturated basis Gram matrix as JSON")
    e1.add_argument("--points-out", help="write the explicit points as JSON")
    e1.set_defaults(func=cmd_e1)

    leg = sub.add_parser("legendre", parents=[common], help="y^2 = x(x+1)(x+t), t = u^d, d = p^f + 1")
    leg.add_argument("--p", type=int, required=True)
    leg.add_argument("--f", type=int, required=True)
    leg.add_argument("--points", action="store_true", help="list the explicit points with on-curve checks")
    leg.set_defaults(func=cmd_legendre)

    tab = sub.add_parser("tables", parents=[common], help="reproduce both results tables")
    tab.add_argument("--outdir", default="tables")
    tab.add_argument("--long", action="store_true", help="add the q=17 row")
    tab.add_argument("--very-long", action="store_true", help="add the q=5^3 row (dimension 248)")
    tab.set_defaults(func=cmd_tables)

    nice = sub.add_parser("nice", parents=[common], help="niceness verdict and heights for a model")
    nice.add_argument("model")
    nice.add_argument("points", nargs="?")
    nice.set_defaults(func=cmd_nice)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(args)
        return args.func(cfg)
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
