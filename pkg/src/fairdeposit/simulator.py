"""Day-stepped Monte Carlo of a client population depositing into the ledger.

Each simulated day:

1. contracts maturing today settle (convert, roll over, or refund);
2. every client draws once from the deposit model and may open a deposit;
3. interest accrues on the float;
4. the end-of-day float is recorded.

Steady-state statistics average the recorded float over days >= warmup and
take error bars across independent replications.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .distribution import DepositDistribution, DistributionParams, InvalidParameter, PointMass, build
from .ledger import Ledger

SERIES_COLUMNS = (
    "day",
    "float_balance",
    "total_deposited",
    "total_refunded",
    "total_converted_revenue",
    "interest_earned",
)


def _fraction(key: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidParameter(key, f"must lie in [0, 1] (got {value!r})")


def _count(key: str, value, minimum: int) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < minimum:
        raise InvalidParameter(key, f"must be an integer >= {minimum} (got {value!r})")


@dataclass(frozen=True)
class SimConfig:
    dist_params: DistributionParams
    n_clients: int
    horizon_days: int
    seed: int
    warmup_days: int | None = None  # None means max_duration
    daily_interest_rate: float = 0.0
    client_interest_share: float = 0.0
    commission_rate: float = 0.0
    conversion_prob: float = 0.0
    rollover_prob: float = 0.0
    replications: int = 1

    def __post_init__(self):
        if self.warmup_days is None:
            object.__setattr__(self, "warmup_days", self.dist_params.max_duration)
        _count("n_clients", self.n_clients, 1)
        _count("horizon_days", self.horizon_days, 1)
        _count("warmup_days", self.warmup_days, 0)
        _count("replications", self.replications, 1)
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool) or self.seed < 0:
            raise InvalidParameter("seed", f"must be a nonnegative integer (got {self.seed!r})")
        if self.warmup_days + 1 > self.horizon_days:
            raise InvalidParameter(
                "warmup_days",
                f"leaves no measured day (warmup {self.warmup_days}, horizon {self.horizon_days})",
            )
        if not self.daily_interest_rate >= 0:
            raise InvalidParameter("daily_interest_rate", "must be >= 0")
        _fraction("client_interest_share", self.client_interest_share)
        _fraction("commission_rate", self.commission_rate)
        if self.commission_rate >= 1.0:
            raise InvalidParameter("commission_rate", "must be < 1")
        _fraction("conversion_prob", self.conversion_prob)
        _fraction("rollover_prob", self.rollover_prob)

    @property
    def pure_escrow(self) -> bool:
        """True when the analytic model applies (no conversion, rollover, commission)."""
        return self.conversion_prob == 0 and self.rollover_prob == 0 and self.commission_rate == 0


@dataclass
class DailySeries:
    float_balance: np.ndarray
    total_deposited: np.ndarray
    total_refunded: np.ndarray
    total_converted_revenue: np.ndarray
    interest_earned: np.ndarray

    @classmethod
    def empty(cls, days: int) -> "DailySeries":
        ints = lambda: np.zeros(days, dtype=np.int64)  # noqa: E731
        return cls(ints(), ints(), ints(), ints(), np.zeros(days, dtype=float))

    def rows(self):
        for day in range(len(self.float_balance)):
            yield (
                day,
                int(self.float_balance[day]),
                int(self.total_deposited[day]),
                int(self.total_refunded[day]),
                int(self.total_converted_revenue[day]),
                float(self.interest_earned[day]),
            )


@dataclass
class ReplicationResult:
    series: DailySeries
    totals: dict
    steady_state_mean: float


@dataclass
class SimReport:
    series: DailySeries  # replication 0, i.e. the base seed's first child stream
    replication_means: tuple[float, ...]
    steady_state_mean: float
    steady_state_std_error: float
    per_client_balance: float
    analytic_balance: float
    n_clients: int
    totals: dict = field(default_factory=dict)

    @property
    def float_series(self) -> np.ndarray:
        return self.series.float_balance

    @property
    def per_client_std_error(self) -> float:
        return self.steady_state_std_error / self.n_clients


def analytic_balance(dist) -> float:
    if isinstance(dist, PointMass):
        return dist.standing_balance
    return analytic.expected_standing_balance(dist)


def run_replication(config: SimConfig, dist, seed_seq, check_conservation: bool = False) -> ReplicationResult:
    rng = np.random.default_rng(seed_seq)
    ledger = Ledger(config.commission_rate)
    series = DailySeries.empty(config.horizon_days)
    conv, roll = config.conversion_prob, config.rollover_prob
    settle_random = conv > 0 or roll > 0
    rolling: list = []

    def decide(contract) -> bool:
        u = rng.random()
        if u < conv:
            return True
        if u < conv + (1.0 - conv) * roll:
            rolling.append(contract)
        return False

    for day in range(config.horizon_days):
        if day:
            ledger.advance_day(decide if settle_random else None)
            if rolling:
                durations = dist.sample_durations(rng, len(rolling))
                for contract, t in zip(rolling, durations.tolist()):
                    ledger.open_deposit(contract.client_id, contract.principal, t, charge_commission=False)
                rolling.clear()
        clients, amounts, durations = dist.sample_clients(rng, config.n_clients)
        for client, x, t in zip(clients.tolist(), amounts.tolist(), durations.tolist()):
            ledger.open_deposit(client, x, t)
        ledger.accrue_interest(config.daily_interest_rate, config.client_interest_share)
        if check_conservation and not ledger.conservation_check():
            raise AssertionError(f"ledger conservation violated on day {day}")
        series.float_balance[day] = ledger.float_balance
        series.total_deposited[day] = ledger.total_deposited
        series.total_refunded[day] = ledger.total_refunded
        series.total_converted_revenue[day] = ledger.total_converted_revenue
        series.interest_earned[day] = ledger.interest_earned

    measured = series.float_balance[config.warmup_days:]
    return ReplicationResult(series, ledger.totals(), float(measured.mean()))


def replication_seeds(seed: int, replications: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(replications)


def run(config: SimConfig, dist=None, *, workers: int = 1, check_conservation: bool = False) -> SimReport:
    """Simulate ``config.replications`` independent runs and aggregate them.

    ``dist`` replaces the model built from ``config.dist_params``; any object
    with ``sample_clients``/``sample_durations`` works (e.g. :class:`PointMass`).
    """
    if dist is None:
        dist = build(config.dist_params)
    seeds = replication_seeds(config.seed, config.replications)
    if workers > 1 and config.replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_replication, config, dist, s, check_conservation) for s in seeds]
            results = [f.result() for f in futures]
    else:
        results = [run_replication(config, dist, s, check_conservation) for s in seeds]

    means = tuple(r.steady_state_mean for r in results)
    mean = math.fsum(means) / len(means)
    if len(means) > 1:
        std_error = float(np.std(means, ddof=1)) / math.sqrt(len(means))
    else:
        std_error = math.nan
    return SimReport(
        series=results[0].series,
        replication_means=means,
        steady_state_mean=mean,
        steady_state_std_error=std_error,
        per_client_balance=mean / config.n_clients,
        analytic_balance=analytic_balance(dist),
        n_clients=config.n_clients,
        totals=results[0].totals,
    )


@dataclass(frozen=True)
class Comparison:
    analytic: float
    simulated: float
    std_error: float
    abs_gap: float
    rel_gap: float
    n_sigma: float
    passed: bool
    report: SimReport = field(repr=False, compare=False)


def assess(report: SimReport, n_sigma: float = 3.0) -> Comparison:
    se = report.per_client_std_error
    gap = report.per_client_balance - report.analytic_balance
    rel = gap / report.analytic_balance if report.analytic_balance else math.inf
    if se > 0:
        passed = abs(gap) <= n_sigma * se
    else:
        # zero spread across replications (e.g. deterministic models)
        passed = math.isclose(report.per_client_balance, report.analytic_balance, rel_tol=1e-12)
    return Comparison(
        analytic=report.analytic_balance,
        simulated=report.per_client_balance,
        std_error=se,
        abs_gap=abs(gap),
        rel_gap=abs(rel),
        n_sigma=n_sigma,
        passed=passed,
        report=report,
    )


def compare(config: SimConfig, dist=None, *, n_sigma: float = 3.0, workers: int = 1) -> Comparison:
    """Check the simulated per-client float against the analytic standing balance."""
    if not config.pure_escrow:
        raise InvalidParameter(
            "conversion_prob/rollover_prob/commission_rate",
            "the analytic model covers plain deposit/refund only; set all three to 0",
        )
    if config.replications < 2:
        raise InvalidParameter("replications", "need at least 2 for a standard error")
    return assess(run(config, dist, workers=workers), n_sigma)
