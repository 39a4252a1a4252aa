"""Escrow ledger for refundable deposits.

Principals are integer coins, so the escrow identity

    total_deposited == float_balance + total_refunded + total_converted_revenue

holds exactly. Interest and client interest are real-valued side flows and
never enter the float.
"""

from __future__ import annotations

import enum
import numbers
from collections import defaultdict
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal
from typing import Callable, Iterator


class ContractState(enum.Enum):
    ACTIVE = "Active"
    REFUNDED = "Refunded"
    CONVERTED = "Converted"


class SettlementError(RuntimeError):
    pass


@dataclass(slots=True, eq=False)
class DepositContract:
    id: int
    client_id: object
    principal: int
    start_day: int
    duration: int
    state: ContractState = ContractState.ACTIVE

    @property
    def maturity_day(self) -> int:
        return self.start_day + self.duration

    def _settle(self, state: ContractState) -> None:
        if self.state is not ContractState.ACTIVE:
            raise SettlementError(f"contract {self.id} already {self.state.value}")
        self.state = state


Decider = Callable[[DepositContract], bool]


def _always_refund(contract: DepositContract) -> bool:
    return False


def _positive_int(name: str, value) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be an integer >= 1, got {value!r}")
    return int(value)


class Ledger:
    """Manufacturer-side account of escrowed deposits.

    Day protocol (driven by the caller): ``advance_day`` settles the
    contracts maturing on the new day, then new deposits are opened, then
    ``accrue_interest`` runs on the resulting float. A contract opened on
    day d for t days therefore sits in the float on days d .. d+t-1.
    """

    def __init__(self, commission_rate: float = 0.0):
        if not 0.0 <= commission_rate < 1.0:
            raise ValueError(f"commission_rate must lie in [0, 1), got {commission_rate!r}")
        self.commission_rate = commission_rate
        self._commission = Decimal(repr(float(commission_rate)))
        self.current_day = 0
        self.float_balance = 0
        self.interest_earned = 0.0
        self.client_interest_paid = 0.0
        self.commissions_collected = 0
        self.total_deposited = 0
        self.total_refunded = 0
        self.total_converted_revenue = 0
        self._by_maturity: dict[int, list[DepositContract]] = defaultdict(list)
        self._next_id = 0

    def commission_on(self, principal: int) -> int:
        return int((principal * self._commission).to_integral_value(ROUND_FLOOR))

    def open_deposit(
        self, client_id, principal: int, duration: int, *, charge_commission: bool = True
    ) -> DepositContract:
        """Escrow ``principal`` coins for ``duration`` days starting today.

        The commission (if any) is taken up front; the contract holds, and
        later refunds, the net amount.
        """
        principal = _positive_int("principal", principal)
        duration = _positive_int("duration", duration)
        fee = self.commission_on(principal) if charge_commission else 0
        net = principal - fee  # >= 1 since fee is floored and the rate is < 1
        contract = DepositContract(self._next_id, client_id, net, self.current_day, duration)
        self._next_id += 1
        self._by_maturity[contract.maturity_day].append(contract)
        self.commissions_collected += fee
        self.total_deposited += net
        self.float_balance += net
        return contract

    def advance_day(self, decider: Decider | None = None) -> list[DepositContract]:
        """Move to the next day and settle everything maturing on it.

        ``decider(contract)`` returning true converts the deposit into a
        purchase at the deposited amount; otherwise it is refunded.
        """
        decide = decider or _always_refund
        self.current_day += 1
        settled = self._by_maturity.pop(self.current_day, [])
        for contract in settled:
            if decide(contract):
                contract._settle(ContractState.CONVERTED)
                self.total_converted_revenue += contract.principal
            else:
                contract._settle(ContractState.REFUNDED)
                self.total_refunded += contract.principal
            self.float_balance -= contract.principal
        return settled

    def accrue_interest(self, daily_rate: float, client_share: float = 0.0) -> float:
        """Earn one day of interest on the current float; returns the gross amount."""
        if not daily_rate >= 0:
            raise ValueError(f"daily_rate must be >= 0, got {daily_rate!r}")
        if not 0.0 <= client_share <= 1.0:
            raise ValueError(f"client_share must lie in [0, 1], got {client_share!r}")
        gross = self.float_balance * daily_rate
        to_clients = gross * client_share
        self.client_interest_paid += to_clients
        self.interest_earned += gross - to_clients
        return gross

    def active_contracts(self) -> Iterator[DepositContract]:
        for day in sorted(self._by_maturity):
            yield from self._by_maturity[day]

    def active_principal(self) -> int:
        return sum(c.principal for bucket in self._by_maturity.values() for c in bucket)

    def conservation_check(self) -> bool:
        identity = self.total_deposited - self.total_refunded - self.total_converted_revenue
        counters = (
            self.float_balance,
            self.total_deposited,
            self.total_refunded,
            self.total_converted_revenue,
            self.commissions_collected,
        )
        return (
            all(v >= 0 for v in counters)
            and self.float_balance == identity
            and self.float_balance == self.active_principal()
        )

    def totals(self) -> dict[str, float]:
        return {
            "current_day": self.current_day,
            "float_balance": self.float_balance,
            "total_deposited": self.total_deposited,
            "total_refunded": self.total_refunded,
            "total_converted_revenue": self.total_converted_revenue,
            "commissions_collected": self.commissions_collected,
            "interest_earned": self.interest_earned,
            "client_interest_paid": self.client_interest_paid,
        }
