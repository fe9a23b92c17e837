"""Seeded attacker/defender simulation of a deployed honeynet.

Time runs in ticks. The honeynet is deployed at tick 0, which books the
startup cost; ticks 1..T each book one tick of maintenance and whatever the
attacks did during that tick.

Two modes:

``faithful``
    One superimposed qualified-attack pressure. Each tick the operator gains
    P with probability min(1, M/I); nothing else happens. Expected utility is
    exactly P*T*min(1, M/I), the closed-form curve.

``extended``
    Explicit attacks. Each tick runs four phases in this order:

    1. arrival: one draw against ``arrival_prob``. An arrival then draws
       ``qualified_fraction`` and ``oob_knowledge_prob``. An attacker who knew
       in advance never engages and contributes nothing. Injected attacks
       (tests, scripted scenarios) join after the draw and consume no draws.
    2. accrual, for each active attack in arrival order: info P if qualified,
       variable cost v, one liability draw.
    3. escalation, for each active attack: one draw; privilege rises by one,
       capped at ``max_privilege``.
    4. detection, for each active attack: one draw against
       ``hazard(level, M)``; the hazard is 1 at full privilege. A detected
       attack records t_d, books the repair cost and stops.

    Draws are consumed even when their probability is 0 or 1, so the stream
    position depends only on arrivals and attack lifetimes.

Attacks still running at the horizon are censored: ``t_d`` stays ``None``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import rng
from .econ import ScenarioParams, ValidationError, param_problems

MODES = ("faithful", "extended")
FAITHFUL_BLOCK = 4096


class NoAttacksObserved(RuntimeError):
    """A detection-time estimate was requested but no attack ever engaged."""


@dataclass(frozen=True)
class SimConfig:
    scenario: ScenarioParams
    mode: str = "faithful"
    seed: int = 0
    horizon_ticks: Optional[int] = None  # None: use scenario.horizon_ticks
    trials: int = 1000
    arrival_prob: float = 0.1
    qualified_fraction: float = 0.01  # illustrative only
    escalation_prob: float = 0.2
    max_privilege: int = 3
    base_detection_hazard: float = 0.05
    hazard_privilege_gain: float = 1.0
    deception_factor: float = 0.0
    oob_knowledge_prob: float = 0.0
    variable_cost_per_attack_tick: float = 0.0
    repair_cost: float = 0.0
    liability_prob: float = 0.0
    liability_cost: float = 0.0
    # Report-only attacker economics; they never steer attacker behaviour.
    attacker_cost_per_tick: float = 0.0
    attacker_fixed_cost: float = 0.0

    @property
    def horizon(self) -> int:
        return self.scenario.horizon_ticks if self.horizon_ticks is None else self.horizon_ticks


_PROBABILITIES = (
    "arrival_prob",
    "qualified_fraction",
    "escalation_prob",
    "base_detection_hazard",
    "oob_knowledge_prob",
    "liability_prob",
)
_NONNEGATIVE = (
    "hazard_privilege_gain",
    "deception_factor",
    "variable_cost_per_attack_tick",
    "repair_cost",
    "liability_cost",
    "attacker_cost_per_tick",
    "attacker_fixed_cost",
)


def _int_like(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_config(c: SimConfig) -> SimConfig:
    problems = [(f"scenario.{name}", msg) for name, msg in param_problems(c.scenario)]
    if c.mode not in MODES:
        problems.append(("mode", f"must be one of {MODES}"))
    if not _int_like(c.seed) or not 0 <= c.seed <= rng.MASK64:
        problems.append(("seed", "must be an unsigned 64-bit integer"))
    if c.horizon_ticks is not None and (not _int_like(c.horizon_ticks) or c.horizon_ticks < 0):
        problems.append(("horizon_ticks", "must be an integer >= 0"))
    if not _int_like(c.trials) or c.trials < 1:
        problems.append(("trials", "must be an integer >= 1"))
    if not _int_like(c.max_privilege) or c.max_privilege < 1:
        problems.append(("max_privilege", "must be an integer >= 1"))
    for name in _PROBABILITIES:
        v = getattr(c, name)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0 <= v <= 1:
            problems.append((name, "must be a probability in [0, 1]"))
    for name in _NONNEGATIVE:
        v = getattr(c, name)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
            problems.append((name, "must be a finite number >= 0"))
    if problems:
        raise ValidationError(problems)
    return c


def detection_hazard(c: SimConfig, level: int) -> float:
    """Per-tick chance the attacker unmasks the honeynet at privilege ``level``.

    ``min(1, h0*(1 + beta*level) / (1 + gamma*M))``, and exactly 1 at full privilege.
    """
    if level >= c.max_privilege:
        return 1.0
    M = c.scenario.maintenance_per_tick
    h = c.base_detection_hazard * (1.0 + c.hazard_privilege_gain * level)
    return min(1.0, h / (1.0 + c.deception_factor * M))


@dataclass(frozen=True)
class InjectedAttack:
    """An attack forced to arrive at ``tick`` without consuming random draws."""

    tick: int
    qualified: bool = True


@dataclass
class AttackRecord:
    t_a: int
    t_d: Optional[int] = None  # None: never detected within the horizon
    qualified: bool = False
    knew_in_advance: bool = False
    privilege_trace: List[int] = field(default_factory=list)
    info_gained: float = 0.0
    variable_costs: float = 0.0
    repair_cost: float = 0.0
    liability_costs: float = 0.0
    liability_events: int = 0

    @property
    def active_ticks(self) -> int:
        return len(self.privilege_trace)

    @property
    def total_cost(self) -> float:
        return math.fsum((self.variable_costs, self.repair_cost, self.liability_costs))


@dataclass
class LedgerRow:
    tick: int
    maintenance_cost: float = 0.0
    variable_cost: float = 0.0
    repair_cost: float = 0.0
    liability_cost: float = 0.0
    info_value: float = 0.0


COST_COLUMNS = ("maintenance_cost", "variable_cost", "repair_cost", "liability_cost")


@dataclass
class Ledger:
    startup_cost: float
    rows: List[LedgerRow] = field(default_factory=list)

    def total(self, column: str) -> float:
        return math.fsum(getattr(r, column) for r in self.rows)

    def cost_totals(self) -> Dict[str, float]:
        out = {"startup_cost": self.startup_cost}
        for col in COST_COLUMNS:
            out[col] = self.total(col)
        return out

    @property
    def total_cost(self) -> float:
        return math.fsum(self.cost_totals().values())

    @property
    def total_utility(self) -> float:
        return self.total("info_value")

    @property
    def profit(self) -> float:
        return self.total_utility - self.total_cost


def run_trial(
    c: SimConfig,
    trial_index: int,
    *,
    injected: Sequence[InjectedAttack] = (),
    validate: bool = True,
) -> Tuple[Ledger, List[AttackRecord]]:
    """Run one trial; the result depends only on ``(c, trial_index, injected)``."""
    if validate:
        validate_config(c)
    stream = rng.SplitMix64.for_trial(c.seed, trial_index)
    if c.mode == "faithful":
        return _faithful_trial(c, stream), []
    return _extended_trial(c, stream, injected)


def _faithful_trial(c: SimConfig, stream: rng.SplitMix64) -> Ledger:
    s = c.scenario
    p_info = min(1.0, s.maintenance_per_tick / s.attack_likelihood_factor)
    ledger = Ledger(startup_cost=s.startup_cost)
    for tick in range(1, c.horizon + 1):
        info = s.info_value_per_tick if stream.random() < p_info else 0.0
        ledger.rows.append(LedgerRow(tick, maintenance_cost=s.maintenance_per_tick, info_value=info))
    return ledger


def _extended_trial(
    c: SimConfig, stream: rng.SplitMix64, injected: Sequence[InjectedAttack]
) -> Tuple[Ledger, List[AttackRecord]]:
    s = c.scenario
    P, v = s.info_value_per_tick, c.variable_cost_per_attack_tick
    hazards = [detection_hazard(c, lvl) for lvl in range(c.max_privilege + 1)]
    by_tick: Dict[int, List[InjectedAttack]] = {}
    for inj in injected:
        by_tick.setdefault(inj.tick, []).append(inj)

    ledger = Ledger(startup_cost=s.startup_cost)
    records: List[AttackRecord] = []
    active: List[AttackRecord] = []
    for tick in range(1, c.horizon + 1):
        row = LedgerRow(tick, maintenance_cost=s.maintenance_per_tick)

        # 1. arrival
        if stream.random() < c.arrival_prob:
            qualified = stream.random() < c.qualified_fraction
            knew = stream.random() < c.oob_knowledge_prob
            rec = AttackRecord(t_a=tick, qualified=qualified, knew_in_advance=knew)
            records.append(rec)
            if knew:
                rec.t_d = tick - 1  # unmasked before the attack began
            else:
                active.append(rec)
        for inj in by_tick.get(tick, ()):
            rec = AttackRecord(t_a=tick, qualified=inj.qualified)
            records.append(rec)
            active.append(rec)

        # 2. accrual
        for rec in active:
            if rec.qualified:
                rec.info_gained += P
                row.info_value += P
            rec.variable_costs += v
            row.variable_cost += v
            if stream.random() < c.liability_prob:
                rec.liability_events += 1
                rec.liability_costs += c.liability_cost
                row.liability_cost += c.liability_cost

        # 3. escalation
        for rec in active:
            level = rec.privilege_trace[-1] if rec.privilege_trace else 0
            if stream.random() < c.escalation_prob:
                level = min(level + 1, c.max_privilege)
            rec.privilege_trace.append(level)

        # 4. detection
        still_active = []
        for rec in active:
            if stream.random() < hazards[rec.privilege_trace[-1]]:
                rec.t_d = tick
                rec.repair_cost += c.repair_cost
                row.repair_cost += c.repair_cost
            else:
                still_active.append(rec)
        active = still_active
        ledger.rows.append(row)
    return ledger, records


# --- Monte Carlo ---------------------------------------------------------

@dataclass(frozen=True)
class TrialTotals:
    utility: float
    cost: float
    costs: Tuple[Tuple[str, float], ...]
    attacks: int = 0
    qualified: int = 0
    knew_in_advance: int = 0
    detected: int = 0
    undetected: int = 0
    attacker_cost: float = 0.0
    durations: Tuple[int, ...] = ()  # active ticks of each detected attack

    @property
    def profit(self) -> float:
        return self.utility - self.cost


def summarize_trial(c: SimConfig, ledger: Ledger, records: Sequence[AttackRecord]) -> TrialTotals:
    engaged = [r for r in records if not r.knew_in_advance]
    detected = [r for r in engaged if r.t_d is not None]
    active_ticks = sum(r.active_ticks for r in engaged)
    return TrialTotals(
        utility=ledger.total_utility,
        cost=ledger.total_cost,
        costs=tuple(ledger.cost_totals().items()),
        attacks=len(records),
        qualified=sum(r.qualified for r in records),
        knew_in_advance=len(records) - len(engaged),
        detected=len(detected),
        undetected=len(engaged) - len(detected),
        attacker_cost=c.attacker_cost_per_tick * active_ticks,
        durations=tuple(r.active_ticks for r in detected),
    )


def _extended_chunk(c: SimConfig, start: int, stop: int) -> List[TrialTotals]:
    out = []
    for i in range(start, stop):
        ledger, records = run_trial(c, i, validate=False)
        out.append(summarize_trial(c, ledger, records))
    return out


def _faithful_chunk(c: SimConfig, start: int, stop: int) -> List[TrialTotals]:
    """Vectorized faithful trials; bit-identical to ``run_trial`` per index."""
    s = c.scenario
    T = c.horizon
    p_info = min(1.0, s.maintenance_per_tick / s.attack_likelihood_factor)
    costs = (
        ("startup_cost", s.startup_cost),
        ("maintenance_cost", math.fsum([s.maintenance_per_tick] * T)),
        ("variable_cost", 0.0),
        ("repair_cost", 0.0),
        ("liability_cost", 0.0),
    )
    cost = math.fsum(v for _, v in costs)  # same reduction as Ledger.total_cost
    out = []
    for lo in range(start, stop, FAITHFUL_BLOCK):
        idx = np.arange(lo, min(stop, lo + FAITHFUL_BLOCK), dtype=np.uint64)
        if T == 0:
            hits = np.zeros(len(idx), dtype=np.int64)
        else:
            hits = (rng.uniform_block(c.seed, idx, T) < p_info).sum(axis=1)
        for k in hits.tolist():
            # fsum of k copies of P is the correctly rounded k*P, as is this product.
            out.append(TrialTotals(utility=s.info_value_per_tick * k, cost=cost, costs=costs))
    return out


def _run_chunk(args: Tuple[SimConfig, int, int]) -> List[TrialTotals]:
    c, start, stop = args
    if c.mode == "faithful":
        return _faithful_chunk(c, start, stop)
    return _extended_chunk(c, start, stop)


def collect_trials(c: SimConfig, workers: int = 1) -> List[TrialTotals]:
    """Per-trial totals in trial-index order, optionally fanned out to processes."""
    validate_config(c)
    n = c.trials
    if workers <= 1 or n < 2:
        return _run_chunk((c, 0, n))
    n_chunks = min(n, workers * 4)
    bounds = [n * k // n_chunks for k in range(n_chunks + 1)]
    jobs = [(c, bounds[k], bounds[k + 1]) for k in range(n_chunks)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_chunk, jobs))
    return [t for part in parts for t in part]


def _mean_var(xs: Sequence[float]) -> Tuple[float, float]:
    # fsum makes both statistics independent of summation order; shifting by
    # the first value makes the mean of identical values exact.
    n = len(xs)
    x0 = xs[0]
    mean = x0 + math.fsum(x - x0 for x in xs) / n
    var = math.fsum((x - mean) ** 2 for x in xs) / (n - 1) if n > 1 else 0.0
    return mean, var


@dataclass(frozen=True)
class MonteCarloSummary:
    mode: str
    seed: int
    trials: int
    horizon_ticks: int
    mean_utility: float
    var_utility: float
    mean_cost: float
    var_cost: float
    mean_profit: float
    var_profit: float
    mean_costs: Dict[str, float]
    total_attacks: int
    mean_attacks: float
    qualified_attacks: int
    knew_in_advance: int
    detected_attacks: int
    undetected_attacks: int
    mean_attacker_cost: float
    attacker_fixed_cost: float
    detection_histogram: Dict[int, int]

    @property
    def stderr_utility(self) -> float:
        return math.sqrt(self.var_utility / self.trials)


def run_monte_carlo(c: SimConfig, workers: int = 1) -> MonteCarloSummary:
    """Aggregate ``c.trials`` independent trials.

    The result is bit-identical for a given config regardless of ``workers``.
    """
    totals = collect_trials(c, workers)
    mu, vu = _mean_var([t.utility for t in totals])
    mc, vc = _mean_var([t.cost for t in totals])
    mp, vp = _mean_var([t.profit for t in totals])
    names = [name for name, _ in totals[0].costs]
    mean_costs = {
        name: math.fsum(dict(t.costs)[name] for t in totals) / len(totals) for name in names
    }
    hist: Dict[int, int] = {}
    for t in totals:
        for d in t.durations:
            hist[d] = hist.get(d, 0) + 1
    n_attacks = sum(t.attacks for t in totals)
    return MonteCarloSummary(
        mode=c.mode,
        seed=c.seed,
        trials=c.trials,
        horizon_ticks=c.horizon,
        mean_utility=mu,
        var_utility=vu,
        mean_cost=mc,
        var_cost=vc,
        mean_profit=mp,
        var_profit=vp,
        mean_costs=mean_costs,
        total_attacks=n_attacks,
        mean_attacks=n_attacks / len(totals),
        qualified_attacks=sum(t.qualified for t in totals),
        knew_in_advance=sum(t.knew_in_advance for t in totals),
        detected_attacks=sum(t.detected for t in totals),
        undetected_attacks=sum(t.undetected for t in totals),
        mean_attacker_cost=math.fsum(t.attacker_cost for t in totals) / len(totals),
        attacker_fixed_cost=c.attacker_fixed_cost,
        detection_histogram=dict(sorted(hist.items())),
    )


def expected_utility_closed_form(c: SimConfig) -> float:
    """Exact expectation of faithful-mode utility: ``P * T * min(1, M/I)``."""
    validate_config(c)
    if c.mode != "faithful":
        raise ValueError("closed-form expected utility is only maintained for faithful mode")
    s = c.scenario
    return s.info_value_per_tick * c.horizon * min(1.0, s.maintenance_per_tick / s.attack_likelihood_factor)


def faithful_stderr(c: SimConfig) -> float:
    """Standard error of the faithful-mode mean utility from per-tick Bernoulli variance."""
    s = c.scenario
    p = min(1.0, s.maintenance_per_tick / s.attack_likelihood_factor)
    return s.info_value_per_tick * math.sqrt(c.horizon * p * (1.0 - p) / c.trials)


@dataclass(frozen=True)
class DetectionTimeEstimate:
    engaged_attacks: int
    detected: int
    survival_fraction: float  # share of engaged attacks never detected in the horizon
    mean_duration: Optional[float]  # None when nothing was detected
    stderr: Optional[float]


def detection_time_from_summary(summary: MonteCarloSummary) -> DetectionTimeEstimate:
    engaged = summary.detected_attacks + summary.undetected_attacks
    if engaged == 0:
        raise NoAttacksObserved("no attack engaged the honeynet in any trial")
    hist = summary.detection_histogram
    n = summary.detected_attacks
    if n == 0:
        return DetectionTimeEstimate(engaged, 0, 1.0, None, None)
    durations = [float(d) for d, k in hist.items() for _ in range(k)]
    mean, var = _mean_var(durations)
    return DetectionTimeEstimate(engaged, n, summary.undetected_attacks / engaged, mean, math.sqrt(var / n))


def mean_detection_time(c: SimConfig, workers: int = 1) -> DetectionTimeEstimate:
    """Mean number of active ticks (t_a through t_d inclusive) of detected attacks."""
    validate_config(c)
    if c.mode != "extended":
        raise ValueError("detection times only exist in extended mode")
    if c.arrival_prob <= 0:
        raise ValueError("arrival_prob must be > 0 to observe detections")
    return detection_time_from_summary(run_monte_carlo(c, workers))


def config_fields() -> List[str]:
    """Names accepted for a ``simulation`` block (everything except the scenario)."""
    return [f.name for f in fields(SimConfig) if f.name != "scenario"]
