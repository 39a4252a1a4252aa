"""Command line front end.

    fairdeposit analytic --scenario paper.scenario --target 1e6
    fairdeposit simulate --scenario desk.scenario --out float.csv
    fairdeposit compare  --scenario desk.scenario

Exit status: 0 success, 1 usage/parse/parameter error, 2 the simulation
disagrees with the analytic balance.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import TextIO

from . import analytic, scenario, simulator
from .distribution import InvalidParameter, build

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def write_series_csv(series: simulator.DailySeries, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(simulator.SERIES_COLUMNS)
    for row in series.rows():
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def read_series_csv(fh: TextIO) -> list[tuple]:
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != simulator.SERIES_COLUMNS:
        raise ValueError(f"unexpected header {header}")
    return [tuple(int(v) for v in row[:5]) + (float(row[5]),) for row in reader]


def _load_dist(path):
    values = scenario.load(path)
    params = scenario.dist_params(values)
    return values, build(params)


def _open_out(path):
    try:
        return open(path, "w", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def cmd_analytic(args, out: TextIO) -> int:
    _, dist = _load_dist(args.scenario)
    report = analytic.analyze(dist, args.target)
    fh = _open_out(args.out) if args.out else None
    width = max(len(k) for k, _ in report.rows())
    for key, value in report.rows():
        print(f"{key:<{width}}  {value}", file=out)
    if fh is not None:
        with fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["quantity", "value"])
            for key, value in report.rows():
                writer.writerow([key, repr(value) if isinstance(value, float) else value])
    return EXIT_OK


def _summary(config: simulator.SimConfig, report: simulator.SimReport, out: TextIO) -> None:
    print(f"replications            {config.replications}", file=out)
    print(f"measured days           {config.warmup_days}..{config.horizon_days - 1}", file=out)
    print(f"steady_state_mean       {report.steady_state_mean!r}", file=out)
    print(f"steady_state_std_error  {report.steady_state_std_error!r}", file=out)
    print(f"per_client_balance      {report.per_client_balance!r}", file=out)
    print(f"analytic_balance        {report.analytic_balance!r}", file=out)


def _verdict(cmp: simulator.Comparison, out: TextIO) -> None:
    print(
        f"verdict                 {'PASS' if cmp.passed else 'FAIL'} "
        f"(|gap| {cmp.abs_gap:.6g} vs {cmp.n_sigma:g} SE = {cmp.n_sigma * cmp.std_error:.6g})",
        file=out,
    )


def cmd_simulate(args, out: TextIO) -> int:
    values = scenario.load(args.scenario)
    config = scenario.sim_config(values, args.seed, args.replications)
    fh = _open_out(args.out)
    with fh:
        report = simulator.run(config, workers=args.workers)
        write_series_csv(report.series, fh)
    _summary(config, report, out)
    if config.pure_escrow and config.replications > 1:
        _verdict(simulator.assess(report), out)
    return EXIT_OK


def cmd_compare(args, out: TextIO) -> int:
    values = scenario.load(args.scenario)
    config = scenario.sim_config(values, args.seed, args.replications)
    cmp = simulator.compare(config, workers=args.workers)
    print(f"analytic                {cmp.analytic!r}", file=out)
    print(f"simulated               {cmp.simulated!r}", file=out)
    print(f"std_error               {cmp.std_error!r}", file=out)
    print(f"relative_gap            {cmp.rel_gap!r}", file=out)
    _verdict(cmp, out)
    return EXIT_OK if cmp.passed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairdeposit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--scenario", required=True, help="key = value scenario file")

    def sim_flags(p):
        p.add_argument("--seed", type=int, help="override the scenario's seed")
        p.add_argument("--replications", type=int, help="override the scenario's replications")
        p.add_argument("--workers", type=int, default=1, help="processes for replications")

    p = sub.add_parser("analytic", help="expected float per client and required clients")
    common(p)
    p.add_argument("--target", type=float, help="desired average float, in coins")
    p.add_argument("--out", help="also write the report as CSV")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="run the Monte Carlo and write a per-day CSV")
    common(p)
    p.add_argument("--out", required=True, help="CSV output path")
    sim_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="check simulation against the analytic balance")
    common(p)
    sim_flags(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except (UsageError, scenario.ScenarioError, InvalidParameter, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
