"""Exit criteria for the package, one test per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines
inline; they are also collected in the terminal summary.
"""

import dataclasses
import math
import time
from pathlib import Path

import numpy as np

from fairdeposit import scenario, simulator
from fairdeposit.analytic import expected_standing_balance, harmonic, required_clients
from fairdeposit.cli import main
from fairdeposit.distribution import DistributionParams, build
from fairdeposit.ledger import Ledger

from oracles import literal_triple_sum, littles_law_sum

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"
PAPER = DistributionParams(0.1, 0.1, 10**6, 10**3)
PAPER_RARE = DistributionParams(0.1, 0.01, 10**6, 10**3)
DESK = SCENARIOS / "desk.scenario"


def desk_config(**overrides):
    config = scenario.sim_config(scenario.load(DESK))
    return dataclasses.replace(config, **overrides)


def test_ac1_paper_headline_balance(criterion):
    from fairdeposit import analytic

    analytic._first_moment.cache_clear()
    start = time.perf_counter()
    value = expected_standing_balance(build(PAPER))
    elapsed = time.perf_counter() - start
    ok = abs(value - 0.87) <= 0.01 and elapsed < 1.0
    assert criterion("AC1 paper standing balance", ok, f"v={value:.6f}, |v-0.87|<=0.01, {elapsed:.3f}s < 1s")


def test_ac2_required_clients(criterion):
    n = required_clients(build(PAPER), 1e6)
    rare = required_clients(build(PAPER_RARE), 1e6)
    ok = 1.14e6 <= n <= 1.16e6 and 11.4e6 <= rare <= 11.6e6
    assert criterion("AC2 client solver", ok, f"N={n} in [1.14e6,1.16e6]; k1k2=0.001: N={rare} in [11.4e6,11.6e6]")


def test_ac3_harmonic_anchor(criterion):
    # sum_{x=1}^{1e6} 1/(x+1) = H_{1e6+1} - 1
    value = harmonic(10**6 + 1) - 1
    ok = abs(value - 13.393) <= 0.001
    assert criterion("AC3 harmonic anchor", ok, f"sum={value:.6f} vs 13.393 +- 0.001")


def test_ac4_exact_ordering_oracle(criterion):
    rng = np.random.default_rng(4)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        M, T = (int(v) for v in rng.integers(1, 101, size=2))
        k1, k2 = (float(v) for v in rng.uniform(0.05, 1.0, size=2))
        literal = literal_triple_sum(k1, k2, M, T)
        little = littles_law_sum(k1, k2, M, T)
        fast = expected_standing_balance(build(DistributionParams(k1, k2, M, T)))
        worst = max(worst, abs(literal - little) / literal, abs(literal - fast) / literal)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 10.0
    assert criterion("AC4 triple sum == Little's-law form", ok, f"max rel err {worst:.2e} <= 1e-12, {elapsed:.2f}s < 10s")


def test_ac5_monte_carlo_agreement(criterion):
    config = desk_config()
    assert (config.dist_params, config.n_clients, config.horizon_days, config.replications) == (
        DistributionParams(0.1, 0.1, 1000, 100),
        10**4,
        1000,
        8,
    )
    start = time.perf_counter()
    cmp = simulator.compare(config)
    elapsed = time.perf_counter() - start
    ok = cmp.passed and elapsed < 60.0
    assert criterion(
        "AC5 Monte Carlo vs analytic",
        ok,
        f"sim={cmp.simulated:.5f} analytic={cmp.analytic:.5f} |gap|={cmp.abs_gap:.5f} <= 3SE={3 * cmp.std_error:.5f}, {elapsed:.1f}s < 60s",
    )


def test_ac6_linearity(criterion):
    full = desk_config()
    half = dataclasses.replace(full, dist_params=dataclasses.replace(full.dist_params, k1=0.05))
    a_full = expected_standing_balance(build(full.dist_params))
    a_half = expected_standing_balance(build(half.dist_params))
    analytic_ok = a_half == a_full / 2
    r_full = simulator.assess(simulator.run(full))
    r_half = simulator.assess(simulator.run(half))
    gap = r_half.simulated - r_full.simulated / 2
    se = math.hypot(r_half.std_error, r_full.std_error / 2)
    sim_ok = abs(gap) <= 3 * se
    ok = analytic_ok and sim_ok
    assert criterion(
        "AC6 linearity in k1k2",
        ok,
        f"analytic {a_half!r} == {a_full!r}/2: {analytic_ok}; simulated |{r_half.simulated:.5f} - {r_full.simulated:.5f}/2| = {abs(gap):.5f} <= 3SE={3 * se:.5f}",
    )


def test_ac7_conservation(criterion):
    violations = 0
    for seed in range(5):
        rng = np.random.default_rng(seed)
        ledger = Ledger()
        for _ in range(10**4):
            if rng.random() < 0.55:
                ledger.open_deposit(int(rng.integers(1000)), int(rng.integers(1, 10**7)), int(rng.integers(1, 60)))
            else:
                ledger.advance_day(lambda c: rng.random() < 0.25)
            if ledger.total_deposited != ledger.float_balance + ledger.total_refunded + ledger.total_converted_revenue:
                violations += 1
    refund_ok = True
    for seed in range(5):
        rng = np.random.default_rng(100 + seed)
        ledger = Ledger()
        for _ in range(10**4):
            if rng.random() < 0.55:
                ledger.open_deposit(seed, int(rng.integers(1, 10**7)), int(rng.integers(1, 60)))
            else:
                ledger.advance_day()
        for _ in range(60):
            ledger.advance_day()
        refund_ok &= ledger.float_balance == 0 and ledger.total_refunded == ledger.total_deposited
    ok = violations == 0 and refund_ok
    assert criterion("AC7 ledger conservation", ok, f"{violations} violations in 5x1e4 ops; always-refund drains to 0: {refund_ok}")


def test_ac8_determinism(criterion, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    codes = [main(["simulate", "--scenario", str(DESK), "--out", str(p)]) for p in paths]
    same = paths[0].read_bytes() == paths[1].read_bytes()
    ok = codes == [0, 0] and same
    assert criterion("AC8 determinism", ok, f"byte-identical CSV across two runs: {same}")
