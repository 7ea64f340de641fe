"""Per-operation gas/fee schedule.

The canonical 12-row schedule stores (gas, fee_eth) pairs verbatim from
the Sepolia cost measurements rather than gas x a single gas price,
because the measured rows imply different effective gas prices. Extra
operations the chain supports but the measurement table does not cover
carry derived default fees and are marked measured=False.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from .errors import UnknownOpKind

DEFAULT_ETH_USD_RATE = Decimal("1810.47")

CENT = Decimal("0.01")


@dataclass(frozen=True)
class FeeScheduleEntry:
    op_kind: str
    contract: str
    gas: int
    fee_eth: Decimal
    measured: bool = True

    @property
    def fee_wei(self) -> int:
        return int(self.fee_eth * 10**18)

    def fee_usd(self, eth_usd_rate: Decimal) -> Decimal:
        return (self.fee_eth * eth_usd_rate).quantize(CENT, rounding=ROUND_HALF_UP)


def _row(op_kind: str, contract: str, gas: int, fee_eth: str, measured: bool = True) -> FeeScheduleEntry:
    return FeeScheduleEntry(op_kind, contract, gas, Decimal(fee_eth), measured)


# Sepolia-measured rows (the canonical 12-row cost table).
MEASURED_ROWS: tuple[FeeScheduleEntry, ...] = (
    _row("governor_deploy", "DAO Governor", 3_880_388, "0.003880"),
    _row("timelock_deploy", "Timelock controller", 1_909_795, "0.001909"),
    _row("token_deploy", "GovernanceToken", 1_971_098, "0.001971"),
    _row("nft_deploy", "NFTcontract", 1_505_175, "0.001913"),
    _row("incentives_deploy", "IncentiveLogic contract", 1_271_018, "0.002921"),
    _row("add_member", "DAO Governor", 73_610, "0.000110"),
    _row("proposal_submission", "DAO Governor", 108_168, "0.000199"),
    _row("vote", "DAO Governor", 93_186, "0.000169"),
    _row("queue_proposal", "DAO Governor", 123_769, "0.000235"),
    _row("execute_proposal", "DAO Governor", 132_563, "0.000238"),
    _row("token_transfer", "GovernanceToken", 72_954, "0.000139"),
    _row("ether_transfer", "Timelock controller", 21_055, "0.001052"),
)

# Operations the simulator supports beyond the measured table; fees are
# rough defaults sized against comparable measured rows.
EXTRA_ROWS: tuple[FeeScheduleEntry, ...] = (
    _row("delegate", "GovernanceToken", 60_000, "0.000120", measured=False),
    _row("claim_tokens", "GovernanceToken", 70_000, "0.000140", measured=False),
    _row("remove_member", "DAO Governor", 50_000, "0.000100", measured=False),
    _row("cancel_proposal", "DAO Governor", 60_000, "0.000120", measured=False),
    _row("nft_mint", "NFTcontract", 90_000, "0.000180", measured=False),
    _row("nft_transfer", "NFTcontract", 60_000, "0.000120", measured=False),
    _row("nft_burn", "NFTcontract", 45_000, "0.000090", measured=False),
    _row("exchange_ft_for_nft", "IncentiveLogic contract", 120_000, "0.000240", measured=False),
    _row("set_voting_participation_incentive", "IncentiveLogic contract", 45_000, "0.000090", measured=False),
    _row("set_successful_proposal_incentive", "IncentiveLogic contract", 45_000, "0.000090", measured=False),
    _row("transfer_admin", "IncentiveLogic contract", 45_000, "0.000090", measured=False),
)


class FeeSchedule:
    """Lookup table op_kind -> FeeScheduleEntry, one entry per op_kind."""

    def __init__(self, entries: tuple[FeeScheduleEntry, ...] | list[FeeScheduleEntry] | None = None):
        if entries is None:
            entries = MEASURED_ROWS + EXTRA_ROWS
        self._entries: dict[str, FeeScheduleEntry] = {}
        for e in entries:
            if e.gas <= 0 or e.fee_eth <= 0:
                raise ValueError(f"fee schedule entry {e.op_kind} must have positive gas and fee")
            if e.op_kind in self._entries:
                raise ValueError(f"duplicate fee schedule entry {e.op_kind}")
            self._entries[e.op_kind] = e

    def __contains__(self, op_kind: str) -> bool:
        return op_kind in self._entries

    def entry(self, op_kind: str) -> FeeScheduleEntry:
        try:
            return self._entries[op_kind]
        except KeyError:
            raise UnknownOpKind(f"no fee schedule entry for {op_kind!r}") from None

    def quote(self, op_kind: str, eth_usd_rate: Decimal) -> tuple[int, Decimal, Decimal]:
        """(gas, fee_eth, fee_usd) with USD rounded half-up to cents."""
        e = self.entry(op_kind)
        return e.gas, e.fee_eth, e.fee_usd(eth_usd_rate)

    def measured_entries(self) -> list[FeeScheduleEntry]:
        return [e for e in self._entries.values() if e.measured]

    def all_entries(self) -> list[FeeScheduleEntry]:
        return list(self._entries.values())

    def with_overrides(self, overrides: dict[str, dict]) -> "FeeSchedule":
        """New schedule with per-op {gas, fee_eth} replacements (config hook)."""
        entries = []
        for e in self.all_entries():
            if e.op_kind in overrides:
                o = overrides[e.op_kind]
                e = FeeScheduleEntry(
                    e.op_kind,
                    o.get("contract", e.contract),
                    int(o.get("gas", e.gas)),
                    Decimal(str(o["fee_eth"])) if "fee_eth" in o else e.fee_eth,
                    e.measured,
                )
            entries.append(e)
        return FeeSchedule(tuple(entries))
