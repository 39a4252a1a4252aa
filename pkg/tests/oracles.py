"""Independent reference computations. Slow on purpose; small grids only."""

import math
from fractions import Fraction

import numpy as np


def raw_pmf_grid(k1, k2, M, T):
    """p(x, t) on the deposit region, straight from the formula; row x-1, col t-1."""
    g = np.empty((M, T))
    for x in range(1, M + 1):
        for t in range(1, T + 1):
            g[x - 1, t - 1] = k1 / (x * (x + 1)) * k2 / (t * (t + 1))
    return g


def literal_triple_sum(k1, k2, M, T):
    """sum_{k=1}^{T} sum_{x=1}^{M} x sum_{t=k}^{T} p(x, t), in that order."""
    g = raw_pmf_grid(k1, k2, M, T)
    xs = np.arange(1, M + 1, dtype=float)[:, None]
    terms = []
    for k in range(1, T + 1):
        terms.extend((xs * g[:, k - 1:]).ravel().tolist())
    return math.fsum(terms)


def littles_law_sum(k1, k2, M, T):
    """sum_{x,t} x * t * p(x, t) over the full deposit region."""
    g = raw_pmf_grid(k1, k2, M, T)
    xs = np.arange(1, M + 1, dtype=float)[:, None]
    ts = np.arange(1, T + 1, dtype=float)[None, :]
    return math.fsum((xs * ts * g).ravel().tolist())


def exact_harmonic(n):
    return sum(Fraction(1, k) for k in range(1, n + 1))
