"""CSV and JSON writers for curves, sweeps and simulation summaries.

All writers take an open text stream. Money is written with exactly six
decimals and lines end in LF, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import IO, Any, Dict, List, Sequence

from .econ import ScenarioParams, SweepRow, cost_at, profit_at, utility_at, validate_params
from .sim import MonteCarloSummary


def fmt(x: float) -> str:
    return f"{x:.6f}"


def _writer(out: IO[str]):
    return csv.writer(out, lineterminator="\n")


@dataclass(frozen=True)
class CurveRow:
    tick: int
    cost: float
    utility: float
    profit: float


def curve_rows(p: ScenarioParams) -> List[CurveRow]:
    validate_params(p)
    rows = []
    for t in range(p.horizon_ticks + 1):
        rows.append(CurveRow(t, cost_at(p, t), utility_at(p, t), profit_at(p, t)))
    return rows


def emit_curves_csv(p: ScenarioParams, out: IO[str]) -> int:
    """Write ``t,cost,utility,profit`` for ticks 0..horizon; return the row count."""
    rows = curve_rows(p)
    w = _writer(out)
    w.writerow(["t", "cost", "utility", "profit"])
    for r in rows:
        w.writerow([r.tick, fmt(r.cost), fmt(r.utility), fmt(r.profit)])
    return len(rows)


def emit_sweep_csv(rows: Sequence[SweepRow], out: IO[str]) -> int:
    if not rows:
        raise ValueError("empty sweep")
    w = _writer(out)
    w.writerow(["M", "profit_at_horizon", "break_even_t"])
    for r in rows:
        be = fmt(r.break_even.break_even_tick) if r.break_even.exists else "inf"
        w.writerow([fmt(r.maintenance), fmt(r.profit_at_horizon), be])
    return len(rows)


def summary_to_dict(s: MonteCarloSummary) -> Dict[str, Any]:
    """Flatten a summary into a dict with a fixed key order."""
    d: Dict[str, Any] = {
        "mode": s.mode,
        "seed": s.seed,
        "trials": s.trials,
        "horizon_ticks": s.horizon_ticks,
        "mean_utility": s.mean_utility,
        "var_utility": s.var_utility,
        "stderr_utility": s.stderr_utility,
        "mean_cost": s.mean_cost,
        "var_cost": s.var_cost,
        "mean_profit": s.mean_profit,
        "var_profit": s.var_profit,
    }
    for name, v in s.mean_costs.items():
        d[f"mean_{name}"] = v
    d.update(
        total_attacks=s.total_attacks,
        mean_attacks=s.mean_attacks,
        qualified_attacks=s.qualified_attacks,
        knew_in_advance=s.knew_in_advance,
        detected_attacks=s.detected_attacks,
        undetected_attacks=s.undetected_attacks,
        mean_attacker_cost=s.mean_attacker_cost,
        attacker_fixed_cost=s.attacker_fixed_cost,
    )
    d["detection_histogram"] = {str(k): v for k, v in s.detection_histogram.items()}
    return d


def emit_sim_report(s: MonteCarloSummary, out: IO[str], format: str = "csv") -> None:
    d = summary_to_dict(s)
    if format == "json":
        out.write(json.dumps(d, indent=2) + "\n")
        return
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    w = _writer(out)
    w.writerow(["key", "value"])
    hist = d.pop("detection_histogram")
    for k, v in d.items():
        w.writerow([k, fmt(v) if isinstance(v, float) else v])
    for k, v in hist.items():
        w.writerow([f"detection_duration_{k}", v])
