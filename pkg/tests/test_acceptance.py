"""Exit criteria for the package, one test (or group) per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import dataclasses
import json
import math
import time

import numpy as np
import pytest

from honeyecon.cli import main
from honeyecon.decoy import DecoyConfig, decoy_hit_probability
from honeyecon.econ import (
    ScenarioParams,
    break_even_time,
    cost_at,
    estimate_likelihood_factor,
    optimal_maintenance,
    profit_at,
    utility_at,
    with_maintenance,
)
from honeyecon.sim import (
    InjectedAttack,
    Ledger,
    LedgerRow,
    SimConfig,
    detection_hazard,
    expected_utility_closed_form,
    faithful_stderr,
    run_monte_carlo,
    run_trial,
)

AC1 = "AC1 analytic fidelity (S=1000, M=50, P=200, I=100)"
AC2 = "AC2 break-even exists iff P > I over 1000+ random parameter sets"
AC3 = "AC3 faithful Monte Carlo within 5 SE of P*T*min(1, M/I), 20 configs, < 10 s"
AC4 = "AC4 byte-identical simulate reports across runs and worker counts"
AC5 = "AC5 operator/attacker rule conformance"
AC6 = "AC6 decoy hit-probability laws"
AC7 = "AC7 profit monotone in M, optimum at the matching boundary"
AC8 = "AC8 calibration exact on clean data, within 5% under 1% noise"
AC9 = "AC9 hand-traced extended trial ledger"


def bisect_root(f, lo, hi, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- AC1 ---

@pytest.mark.criterion(AC1)
def test_ac1_analytic_fidelity():
    p = ScenarioParams(1000, 50, 200, 100, 30)
    assert cost_at(p, 10) == 1500
    assert utility_at(p, 10) == 1000
    r = break_even_time(p)
    assert r.exists and r.break_even_tick == 20
    assert abs(r.bisection_tick - 20) <= 1e-6 * 20
    assert abs(bisect_root(lambda t: profit_at(p, t), 0.0, 41.0) - 20) <= 1e-6 * 20


# --- AC2 ---

def random_params(g, n):
    out = []
    for k in range(n):
        I = 10 ** g.uniform(-2, 4)
        kind = k % 10
        if kind == 0:
            P = I
        elif kind < 6:
            P = I * (1 + 10 ** g.uniform(-3, 1))
        else:
            P = I / (1 + 10 ** g.uniform(-3, 1))
        S = 10 ** g.uniform(-3, 6)
        M = 10 ** g.uniform(-3, 4)
        out.append(ScenarioParams(S, M, P, I, int(g.integers(0, 1000))))
    return out


@pytest.mark.criterion(AC2)
def test_ac2_break_even_law():
    sets = random_params(np.random.default_rng(2024), 1500)
    counterexamples = []
    for p in sets:
        r = break_even_time(p)
        if r.exists != (p.info_value_per_tick > p.attack_likelihood_factor):
            counterexamples.append(p)
        elif r.exists and abs(profit_at(p, r.break_even_tick)) > 1e-9 * max(1.0, p.startup_cost):
            counterexamples.append(p)
    assert sum(p.info_value_per_tick == p.attack_likelihood_factor for p in sets) >= 100
    assert counterexamples == []


# --- AC3 ---

@pytest.mark.criterion(AC3)
def test_ac3_faithful_oracle():
    g = np.random.default_rng(77)
    start = time.perf_counter()
    misses = []
    for k in range(20):
        I = float(g.uniform(10, 500))
        ratio = 1.0 if k == 0 else float(g.uniform(0.01, 1.3))
        s = ScenarioParams(float(g.uniform(0, 5000)), I * ratio, float(g.uniform(1, 1000)), I, int(g.integers(1, 60)))
        c = SimConfig(s, mode="faithful", seed=20260101, trials=10_000)
        mean = run_monte_carlo(c).mean_utility
        if abs(mean - expected_utility_closed_form(c)) > 5 * faithful_stderr(c):
            misses.append((c, mean))
    elapsed = time.perf_counter() - start
    assert misses == []
    assert elapsed < 10, f"took {elapsed:.1f}s"


# --- AC4 ---

@pytest.fixture
def sim_scenario(tmp_path):
    doc = {
        "scenario": {"startup_cost": 500, "maintenance_per_tick": 20, "info_value_per_tick": 90,
                     "attack_likelihood_factor": 60, "horizon_ticks": 25},
        "simulation": {"arrival_prob": 0.3, "qualified_fraction": 0.1, "escalation_prob": 0.3,
                       "base_detection_hazard": 0.1, "oob_knowledge_prob": 0.05,
                       "variable_cost_per_attack_tick": 1.5, "repair_cost": 30,
                       "liability_prob": 0.02, "liability_cost": 400},
    }
    path = tmp_path / "sim.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


@pytest.mark.criterion(AC4)
@pytest.mark.parametrize("mode", ["faithful", "extended"])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_ac4_determinism(sim_scenario, tmp_path, mode, fmt):
    outputs = []
    for k, workers in enumerate([1, 1, 3]):
        out = tmp_path / f"report{k}.{fmt}"
        code = main(["simulate", "--scenario", sim_scenario, "--mode", mode, "--trials", "300",
                     "--seed", "42", "--format", fmt, "--workers", str(workers), "--out", str(out)])
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


# --- AC5 ---

def random_extended_configs(g, n):
    for k in range(n):
        s = ScenarioParams(float(g.uniform(0, 1e4)), float(g.uniform(0.1, 100)), float(g.uniform(0, 100)),
                           float(g.uniform(0.1, 200)), int(g.integers(0, 40)))
        yield SimConfig(
            s, mode="extended", seed=int(g.integers(0, 2**63)), trials=20,
            arrival_prob=float(g.uniform()), qualified_fraction=float(g.uniform()),
            escalation_prob=float(g.uniform()), max_privilege=int(g.integers(1, 6)),
            base_detection_hazard=float(g.uniform(0, 0.5)), hazard_privilege_gain=float(g.uniform(0, 3)),
            deception_factor=float(g.uniform(0, 1)), oob_knowledge_prob=float(g.uniform(0, 0.3)),
            variable_cost_per_attack_tick=float(g.uniform(0, 20)), repair_cost=float(g.uniform(0, 200)),
            liability_prob=float(g.uniform(0, 0.2)), liability_cost=float(g.uniform(0, 1000)),
        )


@pytest.fixture(scope="module")
def conformance_trials():
    out = []
    for c in random_extended_configs(np.random.default_rng(5150), 60):
        for i in range(c.trials):
            out.append((c, *run_trial(c, i)))
    return out


@pytest.mark.criterion(AC5)
def test_ac5a_unqualified_pressure_worthless():
    for c in random_extended_configs(np.random.default_rng(1), 10):
        c = dataclasses.replace(c, qualified_fraction=0.0, arrival_prob=max(c.arrival_prob, 0.5), trials=100)
        assert run_monte_carlo(c).mean_utility == 0


@pytest.mark.criterion(AC5)
def test_ac5b_no_activity_after_detection(conformance_trials):
    checked = 0
    for c, ledger, records in conformance_trials:
        for r in records:
            if r.knew_in_advance:
                assert r.privilege_trace == [] and r.total_cost == 0
            elif r.t_d is not None:
                assert len(r.privilege_trace) == r.t_d - r.t_a + 1
                checked += 1
    assert checked > 100


@pytest.mark.criterion(AC5)
def test_ac5c_unqualified_records_carry_no_info(conformance_trials):
    unqualified = [r for _, _, recs in conformance_trials for r in recs if not r.qualified]
    assert unqualified and all(r.info_gained == 0 for r in unqualified)


@pytest.mark.criterion(AC5)
def test_ac5d_hazard_certain_at_full_privilege():
    for c in random_extended_configs(np.random.default_rng(2), 50):
        assert detection_hazard(c, c.max_privilege) == 1.0
        assert all(0 <= detection_hazard(c, lvl) <= 1 for lvl in range(c.max_privilege))


@pytest.mark.criterion(AC5)
def test_ac5e_ledger_conservation(conformance_trials):
    for c, ledger, records in conformance_trials:
        s = c.scenario
        expected = math.fsum([s.startup_cost, s.maintenance_per_tick * c.horizon] + [r.total_cost for r in records])
        assert math.isclose(ledger.total_cost, expected, rel_tol=1e-12, abs_tol=1e-9)
        assert math.isclose(ledger.total_utility, math.fsum(r.info_gained for r in records), rel_tol=1e-12, abs_tol=1e-9)


# --- AC6 ---

@pytest.mark.criterion(AC6)
def test_ac6_random_attacker_exact():
    for n in range(1, 61):
        for h in range(0, 61):
            assert decoy_hit_probability(DecoyConfig(n, h), "random") == h / (n + h)


@pytest.mark.criterion(AC6)
def test_ac6_focused_sophistication():
    grid = [k / 10 for k in range(11)]
    g = np.random.default_rng(6)
    for _ in range(200):
        n, h = int(g.integers(1, 100)), int(g.integers(1, 100))
        ah, ap = float(g.uniform(0, 10)), float(g.uniform(0.01, 10))
        probs = [decoy_hit_probability(DecoyConfig(n, h, ah, ap, s), "focused") for s in grid]
        assert probs[-1] == 0
        assert all(b <= a for a, b in zip(probs, probs[1:]))


# --- AC7 ---

@pytest.mark.criterion(AC7)
def test_ac7_monotone_profit_and_boundary_optimum():
    g = np.random.default_rng(7)
    for k in range(1000):
        I = float(10 ** g.uniform(-1, 3))
        P = I * float(1 + 10 ** g.uniform(-3, 1)) if k % 2 else I / float(1 + 10 ** g.uniform(-3, 1))
        p = ScenarioParams(float(g.uniform(0, 1e4)), 1.0, P, I, int(g.integers(1, 500)))
        m1 = float(g.uniform(0.1, 100))
        m2 = m1 + float(g.uniform(0.1, 100))
        lo = profit_at(with_maintenance(p, m1), p.horizon_ticks)
        hi = profit_at(with_maintenance(p, m2), p.horizon_ticks)
        best_m, _ = optimal_maintenance(p, m1, m2, 7)
        if P > I:
            assert hi > lo and best_m == m2
        else:
            assert hi < lo and best_m == m1


# --- AC8 ---

@pytest.mark.criterion(AC8)
def test_ac8_calibration():
    g = np.random.default_rng(8)
    for I in (0.5, 37.0, 100.0, 12345.678):
        ms = g.uniform(1, 200, 100)
        exact = [(m, m / I) for m in ms]
        assert abs(estimate_likelihood_factor(exact) - I) <= 1e-12 * I
    I = 100.0
    ms = g.uniform(1, 100, 100)
    noisy = [(m, m / I * (1 + 0.01 * e)) for m, e in zip(ms, g.standard_normal(100))]
    assert abs(estimate_likelihood_factor(noisy) - I) <= 0.05 * I


# --- AC9 ---

@pytest.mark.criterion(AC9)
def test_ac9_hand_traced_trial():
    P = 200.0
    c = SimConfig(
        ScenarioParams(100, 10, P, 100, 5), mode="extended", seed=0, trials=1,
        arrival_prob=0.0, escalation_prob=1.0, max_privilege=3, base_detection_hazard=0.0,
        variable_cost_per_attack_tick=2.0, repair_cost=20.0, liability_prob=0.0,
    )
    ledger, records = run_trial(c, 0, injected=[InjectedAttack(tick=1, qualified=True)])
    expected = Ledger(
        startup_cost=100,
        rows=[
            LedgerRow(1, 10, 2.0, 0.0, 0.0, P),
            LedgerRow(2, 10, 2.0, 0.0, 0.0, P),
            LedgerRow(3, 10, 2.0, 20.0, 0.0, P),
            LedgerRow(4, 10, 0.0, 0.0, 0.0, 0.0),
            LedgerRow(5, 10, 0.0, 0.0, 0.0, 0.0),
        ],
    )
    assert repr(ledger) == repr(expected)
    assert len(records) == 1
    r = records[0]
    assert (r.t_a, r.t_d, r.privilege_trace, r.info_gained) == (1, 3, [1, 2, 3], 3 * P)
    assert ledger.total_cost == 176
    assert ledger.total_utility == 3 * P
