"""Economics of honeynet deployment: analytic model, simulation and CLI."""

__version__ = "0.1.0"

from .decoy import DecoyConfig, decoy_hit_probability, target_selection_delay
from .econ import (
    BreakEvenResult,
    CalibrationError,
    DomainError,
    ScenarioParams,
    SweepRow,
    ValidationError,
    break_even_time,
    cost_at,
    estimate_likelihood_factor,
    optimal_maintenance,
    profit_at,
    sweep_maintenance,
    utility_at,
    validate_params,
)
from .sim import (
    AttackRecord,
    InjectedAttack,
    Ledger,
    LedgerRow,
    MonteCarloSummary,
    NoAttacksObserved,
    SimConfig,
    expected_utility_closed_form,
    mean_detection_time,
    run_monte_carlo,
    run_trial,
)
