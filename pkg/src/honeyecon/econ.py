"""Closed-form honeynet economics: cost, utility and profit curves.

The model, with time measured in dimensionless ticks from deployment at t=0:

    cost(t)    = S + M*t
    utility(t) = P*t*M/I
    profit(t)  = utility(t) - cost(t) = t*M*(P/I - 1) - S

where S is the startup cost, M the maintenance spend per tick, P the value of
information per tick of qualified attack, and I the factor converting
maintenance spend into qualified-attack likelihood (M/I).

Profit is linear in M, so the best maintenance level on any interval is one of
its endpoints; :func:`optimal_maintenance` makes that visible with a grid.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

BISECTION_RTOL = 1e-6


class ValidationError(ValueError):
    """One or more parameters violate their constraints.

    ``problems`` holds ``(field_name, message)`` pairs, one per violation.
    """

    def __init__(self, problems: Sequence[Tuple[str, str]]):
        self.problems = list(problems)
        super().__init__("; ".join(f"{name}: {msg}" for name, msg in self.problems))


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CalibrationError(ValueError):
    """Observations carry no usable signal for fitting."""


@dataclass(frozen=True)
class ScenarioParams:
    startup_cost: float
    maintenance_per_tick: float
    info_value_per_tick: float
    attack_likelihood_factor: float
    horizon_ticks: int = 0


@dataclass(frozen=True)
class BreakEvenResult:
    exists: bool
    break_even_tick: Optional[float] = None
    # Independent bisection root; None when no break-even or when t* = 0.
    bisection_tick: Optional[float] = None


@dataclass(frozen=True)
class SweepRow:
    maintenance: float
    profit_at_horizon: float
    break_even: BreakEvenResult


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def param_problems(p: ScenarioParams) -> List[Tuple[str, str]]:
    problems = []
    if not _is_number(p.startup_cost) or p.startup_cost < 0:
        problems.append(("startup_cost", "must be a finite number >= 0"))
    if not _is_number(p.maintenance_per_tick) or p.maintenance_per_tick <= 0:
        problems.append(
            ("maintenance_per_tick", "maintenance costs must be greater than zero (M > 0)")
        )
    if not _is_number(p.info_value_per_tick) or p.info_value_per_tick < 0:
        problems.append(("info_value_per_tick", "must be a finite number >= 0"))
    if not _is_number(p.attack_likelihood_factor) or p.attack_likelihood_factor <= 0:
        problems.append(("attack_likelihood_factor", "must be a finite number > 0"))
    if isinstance(p.horizon_ticks, bool) or not isinstance(p.horizon_ticks, int) or p.horizon_ticks < 0:
        problems.append(("horizon_ticks", "must be an integer >= 0"))
    return problems


def validate_params(p: ScenarioParams) -> ScenarioParams:
    """Return ``p`` unchanged, or raise :class:`ValidationError` naming every bad field."""
    problems = param_problems(p)
    if problems:
        raise ValidationError(problems)
    return p


def _check_time(t: float) -> None:
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")


def cost_at(p: ScenarioParams, t: float) -> float:
    _check_time(t)
    return p.startup_cost + p.maintenance_per_tick * t


def utility_at(p: ScenarioParams, t: float) -> float:
    # Not clamped when M > I; the probabilistic reading of M/I breaks down
    # there but the analytic curve is kept literal.
    _check_time(t)
    return t * p.maintenance_per_tick * (p.info_value_per_tick / p.attack_likelihood_factor)


def profit_at(p: ScenarioParams, t: float) -> float:
    return utility_at(p, t) - cost_at(p, t)


def break_even_time(p: ScenarioParams) -> BreakEvenResult:
    """Earliest tick at which utility catches up with cost.

    Exists iff P > I, at t* = S*I / (M*(P - I)). The closed form is checked
    against a bisection root of :func:`profit_at` on [0, 2t* + 1]; a
    disagreement beyond a relative 1e-6 raises ``ArithmeticError``.
    """
    validate_params(p)
    S, M = p.startup_cost, p.maintenance_per_tick
    P, I = p.info_value_per_tick, p.attack_likelihood_factor
    if P <= I:
        return BreakEvenResult(exists=False)
    t_star = S * I / (M * (P - I))
    if t_star == 0.0:
        return BreakEvenResult(exists=True, break_even_tick=0.0)
    xtol = max(1e-12 * t_star, math.ulp(0.0))  # t* may be subnormal
    root = bisect(lambda t: profit_at(p, t), 0.0, 2.0 * t_star + 1.0, xtol=xtol, rtol=1e-13, maxiter=4000)
    # Subnormal t* carries too few bits for a relative comparison.
    if not math.isclose(root, t_star, rel_tol=BISECTION_RTOL, abs_tol=BISECTION_RTOL * sys.float_info.min):
        raise ArithmeticError(f"closed-form break-even {t_star!r} disagrees with bisection {root!r}")
    return BreakEvenResult(exists=True, break_even_tick=t_star, bisection_tick=root)


def _grid(m_min: float, m_max: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    if not m_min > 0:
        raise DomainError(f"m_min must be > 0, got {m_min}")
    if m_min > m_max:
        raise DomainError(f"m_min ({m_min}) must not exceed m_max ({m_max})")
    return np.linspace(m_min, m_max, steps)


def with_maintenance(p: ScenarioParams, m: float) -> ScenarioParams:
    return ScenarioParams(
        startup_cost=p.startup_cost,
        maintenance_per_tick=float(m),
        info_value_per_tick=p.info_value_per_tick,
        attack_likelihood_factor=p.attack_likelihood_factor,
        horizon_ticks=p.horizon_ticks,
    )


def sweep_maintenance(p: ScenarioParams, m_min: float, m_max: float, steps: int) -> List[SweepRow]:
    """Profit at the horizon for ``steps`` equally spaced maintenance levels."""
    grid = _grid(m_min, m_max, steps)
    rows = []
    for m in grid:
        q = validate_params(with_maintenance(p, m))
        rows.append(SweepRow(float(m), profit_at(q, q.horizon_ticks), break_even_time(q)))
    return rows


def optimal_maintenance(p: ScenarioParams, m_min: float, m_max: float, steps: int) -> Tuple[float, float]:
    """Grid argmax of profit at the horizon, ties going to the smallest M.

    Profits within rounding noise (1e-12 relative to the cost at the horizon)
    of the best count as ties, so a flat profit line (P == I) reports the
    cheapest level rather than whichever one rounding happened to favour.
    """
    rows = sweep_maintenance(p, m_min, m_max, steps)
    best = max(r.profit_at_horizon for r in rows)
    for r in rows:
        scale = max(1.0, p.startup_cost + r.maintenance * p.horizon_ticks)
        if best - r.profit_at_horizon <= 1e-12 * scale:
            return r.maintenance, r.profit_at_horizon
    raise AssertionError("unreachable: the maximum is always a candidate")


def estimate_likelihood_factor(observations: Iterable[Tuple[float, float]]) -> float:
    """Fit the likelihood factor from (maintenance, qualified-attack rate) pairs.

    Least squares through the origin of ``rate = M / factor``:
    ``factor = sum(M**2) / sum(M * rate)``.
    """
    obs = [(float(m), float(r)) for m, r in observations]
    if not obs:
        raise CalibrationError("no observations")
    for m, r in obs:
        if not (math.isfinite(m) and m > 0):
            raise CalibrationError(f"maintenance must be > 0, got {m}")
        if not (math.isfinite(r) and r >= 0):
            raise CalibrationError(f"rate must be >= 0, got {r}")
    denom = math.fsum(m * r for m, r in obs)
    if denom == 0.0:
        raise CalibrationError("all observed rates are zero; nothing to fit")
    return math.fsum(m * m for m, _ in obs) / denom
