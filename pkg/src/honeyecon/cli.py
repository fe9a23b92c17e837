"""Command line interface: ``honeyecon <command> ...``.

Exit codes: 0 success, 1 validation or usage error, 2 I/O error. Errors are
reported as a single ``error: ...`` line on stderr, and output files are only
opened once everything has been computed, so a failed run leaves no partial CSV.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .decoy import ATTACKER_KINDS, DecoyConfig, decoy_hit_probability, target_selection_delay
from .econ import (
    CalibrationError,
    DomainError,
    ScenarioParams,
    ValidationError,
    break_even_time,
    estimate_likelihood_factor,
    optimal_maintenance,
    profit_at,
    sweep_maintenance,
)
from .report import emit_curves_csv, emit_sim_report, emit_sweep_csv, fmt
from .scenario import load_scenario
from .sim import MODES, SimConfig, run_monte_carlo, validate_config

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2
M_OVER_I_WARNING = "warning: M > I: analytic utility exceeds its probabilistic interpretation"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="honeyecon", description="Honeynet deployment economics and simulation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze", help="cost/utility/profit curves and break-even")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--out", type=Path, help="write curves CSV here instead of stdout")

    p = sub.add_parser("sweep", help="profit at the horizon across maintenance levels")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--from", dest="m_from", required=True, type=float)
    p.add_argument("--to", dest="m_to", required=True, type=float)
    p.add_argument("--steps", required=True, type=int)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("simulate", help="Monte Carlo simulation")
    p.add_argument("--scenario", required=True, type=Path)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=_u64)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("decoy", help="chance an attacker picks a honeypot")
    p.add_argument("--prod", required=True, type=int)
    p.add_argument("--honey", required=True, type=int)
    p.add_argument("--sophistication", required=True, type=float)
    p.add_argument("--attacker", choices=ATTACKER_KINDS, default="random")
    p.add_argument("--honey-attract", type=float, default=1.0)
    p.add_argument("--prod-attract", type=float, default=1.0)
    p.add_argument("--base-delay", type=float, help="also print the target-selection delay")

    p = sub.add_parser("calibrate", help="fit the likelihood factor from observations")
    p.add_argument("--observations", required=True, type=Path, help="CSV with header M,rate")
    return parser


def _warn_if_m_over_i(p: ScenarioParams, max_m: Optional[float] = None) -> None:
    m = p.maintenance_per_tick if max_m is None else max_m
    if m > p.attack_likelihood_factor:
        print(M_OVER_I_WARNING, file=sys.stderr)


def _deliver(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_analyze(args) -> None:
    sf = load_scenario(args.scenario)
    p = sf.scenario
    be = break_even_time(p)
    buf = io.StringIO()
    emit_curves_csv(p, buf)
    _warn_if_m_over_i(p)
    _deliver(buf.getvalue(), args.out)
    if be.exists:
        print(f"break-even at t={fmt(be.break_even_tick)}")
    else:
        print("no break-even: P <= I, utility never overtakes cost")
    print(f"profit at horizon t={p.horizon_ticks}: {fmt(profit_at(p, p.horizon_ticks))}")


def cmd_sweep(args) -> None:
    p = load_scenario(args.scenario).scenario
    rows = sweep_maintenance(p, args.m_from, args.m_to, args.steps)
    best_m, best_profit = optimal_maintenance(p, args.m_from, args.m_to, args.steps)
    buf = io.StringIO()
    emit_sweep_csv(rows, buf)
    _warn_if_m_over_i(p, args.m_to)
    _deliver(buf.getvalue(), args.out)
    if args.out is not None:
        print(f"optimal M={fmt(best_m)} profit={fmt(best_profit)}")


def cmd_simulate(args) -> None:
    sf = load_scenario(args.scenario)
    c = sf.simulation or SimConfig(scenario=sf.scenario)
    overrides = {k: v for k, v in (("mode", args.mode), ("trials", args.trials), ("seed", args.seed)) if v is not None}
    c = validate_config(dataclasses.replace(c, **overrides))
    if c.mode == "faithful":
        _warn_if_m_over_i(c.scenario)
    summary = run_monte_carlo(c, workers=args.workers)
    buf = io.StringIO()
    emit_sim_report(summary, buf, args.format)
    _deliver(buf.getvalue(), args.out)


def cmd_decoy(args) -> None:
    d = DecoyConfig(
        production_hosts=args.prod,
        honeypots=args.honey,
        honeypot_attractiveness=args.honey_attract,
        production_attractiveness=args.prod_attract,
        sophistication=args.sophistication,
    )
    print(fmt(decoy_hit_probability(d, args.attacker)))
    if args.base_delay is not None:
        print(fmt(target_selection_delay(d, args.base_delay)))


def read_observations(path: Path) -> List[tuple]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["M", "rate"]:
            raise CalibrationError(f"{path}: expected header 'M,rate'")
        obs = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise CalibrationError(f"{path}:{lineno}: expected two columns")
            try:
                obs.append((float(row[0]), float(row[1])))
            except ValueError:
                raise CalibrationError(f"{path}:{lineno}: not a number") from None
    return obs


def cmd_calibrate(args) -> None:
    print(fmt(estimate_likelihood_factor(read_observations(args.observations))))


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "decoy": cmd_decoy,
    "calibrate": cmd_calibrate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("honeyecon: a command is required")
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as exc:
        print(f"error: validation: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DomainError, CalibrationError, ValueError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
