"""Expected float per client and the number of clients needed to hold a target.

Two independent routes to the standing balance are provided:

* :func:`expected_standing_balance` sums x*t*p(x, t) over the factorized
  marginals (the Little's-law form of the triple sum over past days).
* :func:`closed_form_balance` evaluates k1k2 (H_{M+1} - 1)(H_T - T/(T+1))
  through harmonic numbers.

They agree up to rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .distribution import DepositDistribution

EULER_GAMMA = 0.57721566490153286060651209008240243
HARMONIC_EXACT_LIMIT = 10**6


@lru_cache(maxsize=64)
def _harmonic_exact(n: int) -> float:
    return math.fsum(1.0 / np.arange(1, n + 1, dtype=float))


def harmonic(n: int) -> float:
    """H_n = 1 + 1/2 + ... + 1/n.

    Exactly rounded summation up to 10**6 terms, asymptotic expansion beyond
    (truncation error below 1/(120 n^4)).
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError(f"harmonic number needs an integer n >= 1, got {n!r}")
    n = int(n)
    if n <= HARMONIC_EXACT_LIMIT:
        return _harmonic_exact(n)
    inv = 1.0 / n
    inv2 = inv * inv
    return math.log(n) + EULER_GAMMA + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0


@lru_cache(maxsize=64)
def _first_moment(k: float, n: int) -> float:
    # sum_{j=1}^{n} j * k / (j (j+1)), kept in the pmf's own terms
    j = np.arange(1, n + 1, dtype=float)
    return math.fsum(j * (k / (j * (j + 1.0))))


@lru_cache(maxsize=64)
def _mass(k: float, n: int) -> float:
    j = np.arange(1, n + 1, dtype=float)
    return math.fsum(k / (j * (j + 1.0)))


def expected_daily_deposit(dist: DepositDistribution) -> float:
    """Coins one client deposits on an average day: sum_x x sum_t p(x, t)."""
    p = dist.params
    return _first_moment(p.k1, p.max_amount) * _mass(p.k2, p.max_duration)


def expected_standing_balance(dist: DepositDistribution) -> float:
    """Coins one client keeps on the account at steady state.

    Equals sum_{k=1}^{T} sum_x x sum_{t>=k} p(x, t): a deposit of duration t
    is counted on t consecutive days, so the triple sum collapses to
    sum_{x,t} x * t * p(x, t), which factorizes into amount and duration
    first moments.
    """
    p = dist.params
    return _first_moment(p.k1, p.max_amount) * _first_moment(p.k2, p.max_duration)


def closed_form_balance(k1k2: float, max_amount: int, max_duration: int) -> float:
    if not k1k2 > 0:
        raise ValueError(f"k1k2 must be positive, got {k1k2!r}")
    if max_amount < 1 or max_duration < 1:
        raise ValueError("max_amount and max_duration must be >= 1")
    T = max_duration
    return k1k2 * (harmonic(max_amount + 1) - 1.0) * (harmonic(T) - T / (T + 1))


def required_clients(dist: DepositDistribution, target_balance: float) -> int:
    """Smallest client count whose expected float reaches ``target_balance``."""
    if not target_balance > 0:
        raise ValueError(f"target balance must be positive, got {target_balance!r}")
    per_client = expected_standing_balance(dist)
    if not per_client > 0:
        raise ValueError("per-client standing balance is zero; no client count suffices")
    return math.ceil(target_balance / per_client)


class Method(enum.Enum):
    EXACT_SUM = "ExactSum"
    CLOSED_FORM_APPROX = "ClosedFormApprox"


@dataclass(frozen=True)
class AnalyticReport:
    deposit_prob: float
    expected_daily_deposit: float
    expected_standing_balance: float
    closed_form_balance: float
    method: Method
    target_balance: float | None = None
    required_clients: int | None = None

    def rows(self) -> list[tuple[str, object]]:
        out: list[tuple[str, object]] = [
            ("deposit_prob", self.deposit_prob),
            ("expected_daily_deposit", self.expected_daily_deposit),
            ("expected_standing_balance", self.expected_standing_balance),
            ("closed_form_balance", self.closed_form_balance),
            ("method", self.method.value),
        ]
        if self.required_clients is not None:
            out += [
                ("target_balance", self.target_balance),
                ("required_clients", self.required_clients),
            ]
        return out


def analyze(
    dist: DepositDistribution,
    target_balance: float | None = None,
    method: Method = Method.EXACT_SUM,
) -> AnalyticReport:
    p = dist.params
    exact = expected_standing_balance(dist)
    closed = closed_form_balance(p.k1k2, p.max_amount, p.max_duration)
    balance = exact if method is Method.EXACT_SUM else closed
    clients = None
    if target_balance is not None:
        if not target_balance > 0:
            raise ValueError(f"target balance must be positive, got {target_balance!r}")
        clients = math.ceil(target_balance / balance)
    return AnalyticReport(
        deposit_prob=dist.deposit_prob,
        expected_daily_deposit=expected_daily_deposit(dist),
        expected_standing_balance=balance,
        closed_form_balance=closed,
        method=method,
        target_balance=target_balance,
        required_clients=clients,
    )
