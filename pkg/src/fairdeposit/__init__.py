"""Float and client-count modeling for refundable-deposit monetization."""

from .analytic import (
    AnalyticReport,
    Method,
    analyze,
    closed_form_balance,
    expected_daily_deposit,
    expected_standing_balance,
    harmonic,
    required_clients,
)
from .distribution import DepositDistribution, DistributionParams, Draw, InvalidParameter, PointMass, build
from .ledger import ContractState, DepositContract, Ledger
from .simulator import Comparison, SimConfig, SimReport, compare, run

__version__ = "0.1.0"
