"""Flat ``key = value`` scenario files.

    # paper-shaped model
    k1 = 0.1
    k2 = 0.1
    max_amount = 1000000
    max_duration = 1000

Blank lines and ``#`` comments are ignored. Unknown or repeated keys are
errors. Integers accept underscores and integral exponent forms (``1e6``).
"""

from __future__ import annotations

from pathlib import Path

from .distribution import DistributionParams, InvalidParameter
from .simulator import SimConfig


class ScenarioError(ValueError):
    def __init__(self, key: str | None, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        prefix = f"{key}: " if key else ""
        super().__init__(f"{where}{prefix}{message}")
        self.key = key


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        value = float(text)
        if not value.is_integer():
            raise ValueError(f"not an integer: {text!r}") from None
        return int(value)


SCHEMA = {
    "k1": float,
    "k2": float,
    "max_amount": _int,
    "max_duration": _int,
    "n_clients": _int,
    "horizon_days": _int,
    "warmup_days": _int,
    "seed": _int,
    "daily_interest_rate": float,
    "client_interest_share": float,
    "commission_rate": float,
    "conversion_prob": float,
    "rollover_prob": float,
    "replications": _int,
}

DIST_KEYS = ("k1", "k2", "max_amount", "max_duration")
SIM_REQUIRED = ("n_clients", "horizon_days", "seed")


def parse(text: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ScenarioError(None, f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key not in SCHEMA:
            raise ScenarioError(key, "unknown key", lineno)
        if key in values:
            raise ScenarioError(key, "given more than once", lineno)
        try:
            values[key] = SCHEMA[key](value)
        except ValueError:
            raise ScenarioError(key, f"cannot parse {value!r}", lineno) from None
    return values


def load(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(None, f"cannot read scenario {path}: {exc.strerror or exc}") from None
    return parse(text)


def dist_params(values: dict) -> DistributionParams:
    missing = [k for k in DIST_KEYS if k not in values]
    if missing:
        raise ScenarioError(missing[0], "required key missing")
    try:
        return DistributionParams(*(values[k] for k in DIST_KEYS))
    except InvalidParameter as exc:
        raise ScenarioError(None, str(exc)) from None


def sim_config(values: dict, seed: int | None = None, replications: int | None = None) -> SimConfig:
    values = dict(values)
    if seed is not None:
        values["seed"] = seed
    if replications is not None:
        values["replications"] = replications
    params = dist_params(values)
    for key in SIM_REQUIRED:
        if key not in values:
            raise ScenarioError(key, "required key missing")
    kwargs = {k: v for k, v in values.items() if k not in DIST_KEYS}
    try:
        return SimConfig(dist_params=params, **kwargs)
    except InvalidParameter as exc:
        raise ScenarioError(None, str(exc)) from None
