"""Command-line entry point: ``mixedpls {region,rate-angle,power-angle,sweep}``.

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import textwrap
from pathlib import Path

from .harness import (
    POWER_ANGLE_COLUMNS,
    RATE_ANGLE_COLUMNS,
    REGION_COLUMNS,
    RUNNERS,
    SWEEP_COLUMNS,
    ConfigError,
    load_config,
    summarize_sweep,
    write_csv,
)
from .power import SolverStall

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3

_COLUMN_HELP = {
    "region": (REGION_COLUMNS, """\
        theta_b, range_b_m     Bob spatial angle and range (m)
        secure_usw             1 if the secrecy rate is positive, spherical-wave LoS channels
        secure_upw             same under the planar-wave approximation
        secure_multipath       same with Rician multipath (seeded)
        insecure_closed_form   1 if inside the closed-form insecure region"""),
    "rate-angle": (RATE_ANGLE_COLUMNS, """\
        theta_b            Bob spatial angle
        rate_mixed         secrecy rate (bps/Hz), Eve on the spherical-wave model
        rate_far           secrecy rate with Eve modelled as far-field
        rate_closed_form   one-Bob closed-form secrecy rate"""),
    "power-angle": (POWER_ANGLE_COLUMNS, """\
        theta_b2                Bob 2 spatial angle
        case                    closed-form case (I, IIa, IIb, undetermined, equal_angle)
        p1_closed, p2_closed    closed-form powers (W); grid values when not applicable
        p1_grid, p2_grid        line-search powers (W)
        rate_grid, rate_closed  sum secrecy rates (bps/Hz)
        p1_ffb, p2_ffb          far-field-model SCA powers (W)
        rate_ffb_estimated      FFB rate under its own far-field model
        rate_ffb_achieved       FFB rate on the true mixed-field channels"""),
    "sweep": (SWEEP_COLUMNS, """\
        variable, value      swept parameter and its value
        seed                 scenario seed
        scheme               MFB, FFB, MFB+HS or MFB+ZFDig
        estimated_rate       sum secrecy rate under the scheme's channel model
        achieved_rate        sum secrecy rate on the true mixed-field channels
        iterations           SCA iterations
        status               solver status (ok, max_iters, empty_schedule, zf_singular)
        A seed-averaged <out>.summary.csv is written alongside."""),
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, type=Path, help="JSON experiment config")
    p.add_argument("--out", type=Path, default=None, help="CSV path (overrides config 'output')")
    p.add_argument("--seed", type=int, default=None, help="override the config's seed list")
    p.add_argument("--threads", type=int, default=1, help="worker processes (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedpls",
        description="Mixed near/far-field physical-layer-security simulator.",
        epilog="Exit codes: 0 ok, 2 config error, 3 solver failure.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (cols, desc) in _COLUMN_HELP.items():
        p = sub.add_parser(
            name,
            formatter_class=argparse.RawDescriptionHelpFormatter,
            help=f"run the {name} experiment",
            epilog="CSV columns:\n" + textwrap.dedent(desc),
        )
        _add_common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    kind = args.command.replace("-", "_")
    try:
        ec = load_config(args.config, kind)
        out = args.out or (Path(ec.output) if ec.output else None)
        if out is None:
            raise ConfigError("no output path: pass --out or set 'output' in the config")
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be non-negative")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = RUNNERS[kind](ec, seed=args.seed, threads=args.threads)
    except SolverStall as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(table, out, ec.digest, kind)
    if kind == "sweep":
        summary = summarize_sweep(table)
        write_csv(summary, out.with_suffix(".summary.csv"), ec.digest, "sweep_summary")
    print(f"wrote {len(table.rows)} rows to {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
