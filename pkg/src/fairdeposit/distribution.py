"""Deposit-probability model for one client on one day.

A client deposits ``x`` coins for ``t`` days with probability

    p(x, t) = k1 / (x (x+1)) * k2 / (t (t+1))      for 1 <= x <= M, 1 <= t <= T
    p(x, t) = k0                                   if x == 0 or t == 0

The deposit region factorizes, so amount and duration are independent
given that a deposit happens, and both marginals have a closed-form CDF
thanks to the telescoping identity sum_{n=1}^{N} 1/(n(n+1)) = N/(N+1).
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field

import numpy as np


class InvalidParameter(ValueError):
    """A model or configuration parameter is out of its domain.

    ``key`` names the offending parameter so front ends can report it.
    """

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def _is_int(value) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


@dataclass(frozen=True)
class DistributionParams:
    k1: float
    k2: float
    max_amount: int
    max_duration: int

    def __post_init__(self):
        for key in ("k1", "k2"):
            value = getattr(self, key)
            if not isinstance(value, numbers.Real) or not value > 0:
                raise InvalidParameter(key, f"must be a positive real (got {value!r})")
        for key in ("max_amount", "max_duration"):
            value = getattr(self, key)
            if not _is_int(value) or value < 1:
                raise InvalidParameter(key, f"must be an integer >= 1 (got {value!r})")

    @property
    def k1k2(self) -> float:
        return self.k1 * self.k2


def telescoped_mass(n: int) -> float:
    """Closed form of sum_{k=1}^{n} 1/(k(k+1))."""
    return n / (n + 1)


@dataclass(frozen=True)
class Draw:
    amount: int
    duration: int

    @property
    def is_deposit(self) -> bool:
        return self.amount >= 1 and self.duration >= 1


NO_DEPOSIT = Draw(0, 0)


def _inverse_telescoped_cdf(u: np.ndarray, n: int) -> np.ndarray:
    """Inverse of F(k) = (k/(k+1)) / (n/(n+1)) on 1..n, vectorized.

    Returns the smallest k with F(k) >= u. The analytic inverse is nudged
    by one step either way to absorb floating-point error at bin edges.
    """
    scale = n / (n + 1)
    with np.errstate(divide="ignore"):
        k = np.ceil(1.0 / (1.0 - u * scale) - 1.0)
    k = np.clip(k, 1, n).astype(np.int64)
    k = np.where((k < n) & ((k / (k + 1.0)) / scale < u), k + 1, k)
    k = np.where((k > 1) & (((k - 1.0) / k) / scale >= u), k - 1, k)
    return k


@dataclass(frozen=True)
class DepositDistribution:
    """Normalized p(x, t). Build with :func:`build`, not directly."""

    params: DistributionParams
    k0: float
    deposit_prob: float
    zero_cells: int = field(repr=False)

    @property
    def max_amount(self) -> int:
        return self.params.max_amount

    @property
    def max_duration(self) -> int:
        return self.params.max_duration

    def pmf(self, x: int, t: int) -> float:
        M, T = self.max_amount, self.max_duration
        if not (_is_int(x) and _is_int(t)) or not (0 <= x <= M and 0 <= t <= T):
            raise ValueError(f"cell ({x!r}, {t!r}) outside grid 0..{M} x 0..{T}")
        if x == 0 or t == 0:
            return self.k0
        return self.params.k1 / (x * (x + 1)) * self.params.k2 / (t * (t + 1))

    def pmf_grid(self) -> np.ndarray:
        """The full (M+1, T+1) probability table. Only sensible for small grids."""
        M, T = self.max_amount, self.max_duration
        x = np.arange(M + 1, dtype=float)
        t = np.arange(T + 1, dtype=float)
        with np.errstate(divide="ignore"):
            ax = self.params.k1 / (x * (x + 1))
            at = self.params.k2 / (t * (t + 1))
        grid = np.outer(ax, at)
        grid[0, :] = self.k0
        grid[:, 0] = self.k0
        return grid

    # Sampling

    def sample_amounts(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Amounts conditioned on a deposit happening."""
        return _inverse_telescoped_cdf(rng.random(size), self.max_amount)

    def sample_durations(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Durations conditioned on a deposit happening (t >= 1)."""
        return _inverse_telescoped_cdf(rng.random(size), self.max_duration)

    def sample(self, rng: np.random.Generator) -> Draw:
        if rng.random() >= self.deposit_prob:
            return NO_DEPOSIT
        x = self.sample_amounts(rng, 1)[0]
        t = self.sample_durations(rng, 1)[0]
        return Draw(int(x), int(t))

    def sample_clients(self, rng: np.random.Generator, n: int):
        """One draw per client for ``n`` clients.

        Returns ``(clients, amounts, durations)`` for the clients that deposit,
        clients in increasing order.
        """
        clients = np.flatnonzero(rng.random(n) < self.deposit_prob)
        k = clients.size
        return clients, self.sample_amounts(rng, k), self.sample_durations(rng, k)


def build(params: DistributionParams) -> DepositDistribution:
    M, T = params.max_amount, params.max_duration
    deposit_prob = params.k1k2 * telescoped_mass(M) * telescoped_mass(T)
    if deposit_prob > 1.0:
        raise InvalidParameter(
            "k1*k2",
            f"deposit mass {deposit_prob:.6g} exceeds 1 for M={M}, T={T}",
        )
    zero_cells = (M + 1) * (T + 1) - M * T
    k0 = (1.0 - deposit_prob) / zero_cells
    return DepositDistribution(params, k0, deposit_prob, zero_cells)


@dataclass(frozen=True)
class PointMass:
    """Degenerate model: every client deposits ``amount`` for ``duration`` days
    with probability ``deposit_prob``. Useful for exact simulator checks."""

    amount: int
    duration: int
    deposit_prob: float = 1.0

    def __post_init__(self):
        if not _is_int(self.amount) or self.amount < 1:
            raise InvalidParameter("amount", "must be an integer >= 1")
        if not _is_int(self.duration) or self.duration < 1:
            raise InvalidParameter("duration", "must be an integer >= 1")
        if not 0.0 <= self.deposit_prob <= 1.0:
            raise InvalidParameter("deposit_prob", "must lie in [0, 1]")

    @property
    def standing_balance(self) -> float:
        return self.amount * self.duration * self.deposit_prob

    def sample_durations(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.full(size, self.duration, dtype=np.int64)

    def sample_clients(self, rng: np.random.Generator, n: int):
        clients = np.flatnonzero(rng.random(n) < self.deposit_prob)
        k = clients.size
        return (
            clients,
            np.full(k, self.amount, dtype=np.int64),
            np.full(k, self.duration, dtype=np.int64),
        )
