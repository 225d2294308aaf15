"""Command line interface.

Subcommands: test (bootstrap circularity test on a CSV sample), profile
(angular discrepancy curve with a rotation-null band), power (Monte Carlo
study from a config file), gen (write synthetic samples).

Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 numeric or
domain error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap_test, null_band
from .exceptions import CircSymError, DomainError, NumericError, ParseError
from .kernel import KernelSpec
from .simulate import (
    make_distribution,
    parse_study_config,
    run_table,
    sample,
    write_table_csv,
    write_table_json,
)
from .numerics import RngStream
from .statistic import (
    ComplexSample,
    WeightConvention,
    pairwise_summaries,
    theta_profile,
)
from .svg import LinePlot

#: environment variable carrying the default worker count for `power`
THREADS_ENV = "CIRCSYM_THREADS"

LAYOUTS = ("reim", "polar-deg", "wind")


@dataclass(frozen=True)
class WindRecord:
    """One wind observation: speed in mph, direction in degrees from North."""

    speed: float
    direction_deg: float

    def __post_init__(self):
        if not math.isfinite(self.speed) or not math.isfinite(self.direction_deg):
            raise ParseError("wind record fields must be finite")
        if self.speed < 0.0:
            raise ParseError(f"wind speed must be non-negative, got {self.speed}")

    def to_complex(self) -> complex:
        """speed * e^{i theta} with theta measured in radians from East.

        Directions arrive as compass bearings (degrees clockwise from
        North), so theta = (90 - direction) * pi / 180. The records report
        a bearing; whether that is the from- or to-direction only rotates
        the whole sample, which the test statistic cannot see.
        """
        theta = math.radians(90.0 - (self.direction_deg % 360.0))
        return self.speed * complex(math.cos(theta), math.sin(theta))


def _read_rows(path: str) -> list[tuple[int, list[str]]]:
    """Non-blank CSV rows as (1-based line number, cells)."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, cells in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in cells]
            if not cells or all(c == "" for c in cells):
                continue
            rows.append((lineno, cells))
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return rows


def _is_header(cells: list[str]) -> bool:
    for cell in cells:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def _parse_matrix(path: str) -> np.ndarray:
    """Numeric CSV body with optional single header row; rectangular."""
    rows = _read_rows(path)
    if _is_header(rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise ParseError(f"{path}: header but no data rows")
    width = len(rows[0][1])
    data = np.empty((len(rows), width))
    for i, (lineno, cells) in enumerate(rows):
        if len(cells) != width:
            raise ParseError(
                f"{path}: expected {width} columns, got {len(cells)}", row=lineno
            )
        for j, cell in enumerate(cells):
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: non-numeric cell {cell!r}", row=lineno, column=j + 1
                ) from None
    return data


def ingest_complex_csv(path: str, layout: str = "reim") -> ComplexSample:
    """Read a complex sample from CSV.

    reim: 2d columns (re_1..re_d, im_1..im_d). polar-deg: 2 columns
    (modulus, angle in degrees). A non-numeric first row is treated as a
    header. Parse failures carry the row and column.
    """
    if layout not in ("reim", "polar-deg"):
        raise ParseError(f"unknown layout {layout!r}")
    data = _parse_matrix(path)
    if layout == "reim":
        if data.shape[1] % 2 != 0:
            raise ParseError(
                f"{path}: reim layout needs an even column count, got {data.shape[1]}"
            )
        try:
            return ComplexSample(data)
        except DomainError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    if data.shape[1] != 2:
        raise ParseError(
            f"{path}: polar-deg layout needs 2 columns, got {data.shape[1]}"
        )
    radius = data[:, 0]
    angle = np.radians(data[:, 1])
    return ComplexSample(
        np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    )


def ingest_wind(path: str, speed_cutoff: float | None = None) -> ComplexSample:
    """Read wind records (speed mph, direction degrees from North) as complex.

    speed_cutoff keeps only rows with speed strictly below the cutoff.
    """
    data = _parse_matrix(path)
    if data.shape[1] != 2:
        raise ParseError(f"{path}: wind layout needs 2 columns, got {data.shape[1]}")
    records = []
    for i in range(data.shape[0]):
        try:
            rec = WindRecord(speed=float(data[i, 0]), direction_deg=float(data[i, 1]))
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}", row=i + 1) from None
        if speed_cutoff is not None and not rec.speed < speed_cutoff:
            continue
        records.append(rec)
    if not records:
        raise ParseError(f"{path}: no rows survive the speed cutoff")
    z = np.array([rec.to_complex() for rec in records], dtype=np.complex128)
    return ComplexSample.from_complex(z)


def _load_sample(args) -> ComplexSample:
    if args.layout == "wind":
        return ingest_wind(args.input, args.speed_cutoff)
    if getattr(args, "speed_cutoff", None) is not None:
        raise ParseError("--speed-cutoff applies to the wind layout only")
    return ingest_complex_csv(args.input, args.layout)


def _file_digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _p_text(p: float, b: int) -> str:
    floor = 1.0 / (b + 1)
    if p <= floor:
        return f"p < {floor:.4g}"
    return f"p = {p:.4f}"


def cmd_test(args) -> int:
    t0 = time.perf_counter()
    x = _load_sample(args)
    lams = args.lam or [1.0]
    cfg = BootstrapConfig(b=args.b, seed=args.seed, keep_replicates=args.keep_replicates)
    stats: dict[str, float] = {}
    pvals: dict[str, float] = {}
    reps: dict[str, list] = {}
    for lam in lams:
        if args.mu == 2.0:
            k = KernelSpec.gaussian(lam)
        else:
            k = KernelSpec.stable(lam, args.mu)
        result = bootstrap_test(x, k, cfg)
        key = repr(float(lam))
        stats[key] = result.statistic
        pvals[key] = result.p_value
        if args.keep_replicates:
            reps[key] = list(result.replicates)
        verdict = "reject" if result.p_value <= args.alpha else "retain"
        print(
            f"lambda={lam:g} n={x.n} d={x.d} T={result.statistic:.6g} "
            f"{_p_text(result.p_value, args.b)} [{verdict} at alpha={args.alpha:g}]"
        )
    runtime_ms = int(round(1000.0 * (time.perf_counter() - t0)))
    report = {
        "version": __version__,
        "config": {
            "command": "test",
            "input": args.input,
            "layout": args.layout,
            "speed_cutoff": args.speed_cutoff,
            "lambda": [float(v) for v in lams],
            "mu": args.mu,
            "b": args.b,
            "seed": args.seed,
            "alpha": args.alpha,
            "p_floor": 1.0 / (args.b + 1),
        },
        "input": {"rows": x.n, "d": x.d, "sha256": _file_digest(args.input)},
        "statistic_per_lambda": stats,
        "p_value_per_lambda": pvals,
        "runtime_ms": runtime_ms,
    }
    if args.keep_replicates:
        report["replicates"] = reps
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    return 0


def cmd_profile(args) -> int:
    x = _load_sample(args)
    ps = pairwise_summaries(x)
    if args.mu == 2.0:
        k = KernelSpec.gaussian(args.lam)
    else:
        k = KernelSpec.stable(args.lam, args.mu)
    convention = WeightConvention(args.convention)
    if args.grid < 2:
        raise DomainError(f"grid size must be at least 2, got {args.grid}")
    # nominal grid spans [-pi, pi] inclusive so theta=0 sits on odd-sized
    # grids; +pi evaluates at -pi (same rotation)
    nominal = np.linspace(-np.pi, np.pi, args.grid)
    wrapped = np.where(nominal >= np.pi, nominal - 2.0 * np.pi, nominal)
    profile = theta_profile(ps, k, wrapped, convention=convention, d=x.d)
    cfg = BootstrapConfig(b=args.b, seed=args.seed)
    band = null_band(
        ps, k, wrapped, cfg, q=args.quantile, convention=convention, d=x.d
    )
    with open(args.output_csv, "w", encoding="utf-8") as fh:
        fh.write("theta,d_observed,null_q\n")
        for t, v, q in zip(nominal, profile.values, band):
            fh.write(f"{t:.12g},{v:.12g},{q:.12g}\n")
    if args.output_svg:
        plot = LinePlot(
            x=list(nominal),
            title=f"Angular discrepancy, lambda={args.lam:g}",
            xlabel="theta (radians)",
            ylabel="D(theta)",
        )
        plot.add("observed", profile.values)
        plot.add(f"null {args.quantile:g} quantile", band, dashed=True)
        plot.write(args.output_svg)
    peak = float(np.max(profile.values))
    above = bool(np.any(profile.values > band))
    print(
        f"lambda={args.lam:g} n={x.n} d={x.d} max D={peak:.6g} "
        f"{'exceeds' if above else 'within'} the null {args.quantile:g} band"
    )
    return 0


def cmd_power(args) -> int:
    study = parse_study_config(args.config)
    workers = args.threads if args.threads is not None else _env_threads()
    t0 = time.perf_counter()

    def progress(n, axis, value, rate):
        print(f"n={n} {axis}={value}: {rate:.4f}", file=sys.stderr)

    table = run_table(study, workers=workers, progress=progress)
    os.makedirs(args.out_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.config))[0]
    csv_path = os.path.join(args.out_dir, stem + ".csv")
    json_path = os.path.join(args.out_dir, stem + ".json")
    write_table_csv(table, csv_path)
    write_table_json(table, json_path, study)
    elapsed = time.perf_counter() - t0
    print(f"wrote {csv_path} and {json_path} in {elapsed:.1f}s")
    return 0


def cmd_gen(args) -> int:
    params = {}
    if args.rho is not None:
        params["rho"] = args.rho
    if args.czz is not None:
        params["czz"] = args.czz
    if args.u is not None:
        params["u"] = args.u
    if args.d is not None:
        params["d"] = args.d
    if args.a_seed is not None:
        params["a_seed"] = args.a_seed
    spec = make_distribution(args.distribution, params)
    x = sample(spec, args.n, RngStream(args.seed, 0))
    d = x.d
    header = [f"re{i + 1}" for i in range(d)] + [f"im{i + 1}" for i in range(d)]
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in x.data:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {args.output}: n={x.n} d={d} ({args.distribution})")
    return 0


def _env_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise DomainError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; this tool reserves 2
    for I/O problems, so usage errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_input_flags(p):
    p.add_argument("--input", "-i", required=True, help="input CSV path")
    p.add_argument(
        "--layout",
        choices=LAYOUTS,
        default="reim",
        help="input format: reim (re_1..re_d, im_1..im_d), polar-deg "
        "(modulus, angle in degrees), wind (speed mph, bearing degrees from North)",
    )
    p.add_argument(
        "--speed-cutoff",
        type=float,
        default=None,
        help="wind layout only: keep rows with speed strictly below this",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circsym", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"circsym {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="bootstrap circularity test")
    _add_input_flags(p)
    p.add_argument(
        "--lam",
        "--lambda",
        dest="lam",
        type=float,
        action="append",
        help="kernel bandwidth; repeat for several (default 1.0)",
    )
    p.add_argument("--mu", type=float, default=2.0, help="kernel exponent in (0, 2]")
    p.add_argument("-B", "--b", dest="b", type=int, default=200, help="bootstrap size")
    p.add_argument("--seed", type=int, default=0, help="bootstrap seed")
    p.add_argument("--alpha", type=float, default=0.05, help="nominal level")
    p.add_argument("--output", "-o", default=None, help="write the JSON report here")
    p.add_argument(
        "--keep-replicates",
        action="store_true",
        help="include bootstrap replicates in the JSON report",
    )
    p.set_defaults(func=cmd_test)

    p = sub.add_parser(
        "profile", help="angular discrepancy profile + null band"
    )
    _add_input_flags(p)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=361, help="number of theta grid points")
    p.add_argument(
        "--convention",
        choices=[c.value for c in WeightConvention],
        default=WeightConvention.KERNEL.value,
        help="profile normalization (kernel: integrates back to the statistic)",
    )
    p.add_argument("-B", "--b", dest="b", type=int, default=200, help="null band size")
    p.add_argument("--quantile", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-csv", required=True)
    p.add_argument("--output-svg", default=None)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("power", help="Monte Carlo study")
    p.add_argument("config", help="study config file (key = value lines)")
    p.add_argument("--out-dir", default=".", help="directory for CSV + JSON output")
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker threads (default ${THREADS_ENV} or 1)",
    )
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("gen", help="write a synthetic sample")
    p.add_argument(
        "--distribution",
        required=True,
        help="scalar-gaussian | shifted-cn2 | discrete4 | circle-uniform | "
        "contaminated | highdim-cn",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=complex, default=None, help="e.g. 0.5 or 0.3+0.4j")
    p.add_argument("--czz", type=float, default=None)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--a-seed", dest="a_seed", type=int, default=None)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"circsym: error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NumericError) as exc:
        print(f"circsym: error: {exc}", file=sys.stderr)
        return 3
    except CircSymError as exc:
        print(f"circsym: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
