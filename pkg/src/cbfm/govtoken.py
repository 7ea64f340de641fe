"""Fungible governance/reward token with delegation checkpoints.

Semantics follow the checkpointed-votes token standard: balances do not
carry voting power until their holder delegates (self-delegation counts),
and every voting-power change appends a (block, votes) checkpoint so past
blocks can be queried with a binary search. The full supply is minted at
deployment; the share not kept by the deployer sits in a reserve owned by
the token module itself, from which governance-authorized callers pay out
rewards.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional

from . import errors
from .keys import module_address
from .ledger import Chain

WAD = 10**18
TOTAL_SUPPLY = 1_000_000 * WAD


@dataclass
class Checkpoint:
    block_number: int
    votes: int


@dataclass
class TokenState:
    balances: dict[str, int] = field(default_factory=dict)
    reserve: int = 0
    delegates: dict[str, Optional[str]] = field(default_factory=dict)
    checkpoints: dict[str, list[Checkpoint]] = field(default_factory=dict)
    total_supply_checkpoints: list[Checkpoint] = field(default_factory=list)
    holders: list[str] = field(default_factory=list)
    claimed: dict[str, int] = field(default_factory=dict)   # whole tokens claimed per address
    initialized: bool = False


class GovernanceToken:
    def __init__(self, chain: Chain, name: Optional[str] = None, symbol: Optional[str] = None):
        self.chain = chain
        self.name = name or chain.config.token_name
        self.symbol = symbol or chain.config.token_symbol
        self.address = module_address("govtoken")
        self.state = TokenState()
        # addresses allowed to spend the reserve (timelock + incentives engine)
        self.authorized_spenders: set[str] = set()

    # --- deployment ------------------------------------------------------

    def init_token(self, deployer: str, keep_percentage: int) -> None:
        s = self.state
        if s.initialized:
            raise errors.AlreadyInitialized("token already initialized")
        if not 0 <= keep_percentage <= 100:
            raise errors.InvalidKeepPercentage(str(keep_percentage))
        keep_amount = TOTAL_SUPPLY * keep_percentage // 100
        s.balances[deployer] = keep_amount
        s.reserve = TOTAL_SUPPLY - keep_amount
        s.holders.append(deployer)
        s.total_supply_checkpoints.append(Checkpoint(self.chain.head_number, TOTAL_SUPPLY))
        s.initialized = True

    # --- balances & transfers -------------------------------------------

    def balance_of(self, addr: str) -> int:
        return self.state.balances.get(addr, 0)

    def _credit(self, addr: str, amount: int) -> None:
        s = self.state
        if addr not in s.balances:
            s.balances[addr] = 0
        if addr not in set(s.holders):
            s.holders.append(addr)
        s.balances[addr] += amount

    def transfer(self, sender: str, receiver: str, amount: int) -> None:
        """Move `amount` base units; voting power follows existing delegations."""
        if amount < 0:
            raise errors.InvalidAmount("negative transfer")
        if amount == 0:
            return
        s = self.state
        if self.balance_of(sender) < amount:
            raise errors.InsufficientTokenBalance(
                f"{sender} holds {self.balance_of(sender)} < {amount}"
            )
        s.balances[sender] -= amount
        self._credit(receiver, amount)
        self._move_voting_power(s.delegates.get(sender), s.delegates.get(receiver), amount)

    def send_tokens(self, caller: str, receiver: str, whole_tokens: int) -> None:
        """Pay out from the reserve; gated to governance-authorized callers."""
        if caller not in self.authorized_spenders:
            raise errors.UnauthorizedCaller(f"{caller} may not spend the reserve")
        if whole_tokens < 0:
            raise errors.InvalidAmount("negative reward")
        amount = whole_tokens * WAD
        self._spend_reserve(receiver, amount)

    # `reward` in the deployed contract is the same reserve payout.
    reward = send_tokens

    def _spend_reserve(self, receiver: str, amount: int) -> None:
        s = self.state
        if amount == 0:
            return
        if s.reserve < amount:
            raise errors.InsufficientReserve(f"reserve {s.reserve} < {amount}")
        s.reserve -= amount
        self._credit(receiver, amount)
        self._move_voting_power(None, s.delegates.get(receiver), amount)

    def return_to_reserve(self, sender: str, amount: int) -> None:
        s = self.state
        if self.balance_of(sender) < amount:
            raise errors.InsufficientTokenBalance(
                f"{sender} holds {self.balance_of(sender)} < {amount}"
            )
        s.balances[sender] -= amount
        s.reserve += amount
        self._move_voting_power(s.delegates.get(sender), None, amount)

    def claim_tokens(self, caller: str, whole_tokens: int) -> None:
        """Optional faucet claim from the reserve, off by default; the
        per-user cap bounds lifetime claims when enabled."""
        cfg = self.chain.config
        if not cfg.claim_enabled:
            raise errors.ClaimDisabled("token claiming is disabled")
        if whole_tokens <= 0:
            raise errors.InvalidAmount("claim must be positive")
        claimed = self.state.claimed.get(caller, 0)
        if claimed + whole_tokens > cfg.claim_cap_tokens:
            raise errors.ClaimCapExceeded(
                f"{caller} claimed {claimed}, cap {cfg.claim_cap_tokens}"
            )
        self._spend_reserve(caller, whole_tokens * WAD)
        self.state.claimed[caller] = claimed + whole_tokens

    # --- delegation & checkpoints ---------------------------------------

    def delegate(self, delegator: str, delegatee: str) -> None:
        self.chain.account(delegator)  # must be registered
        s = self.state
        previous = s.delegates.get(delegator)
        s.delegates[delegator] = delegatee
        self._move_voting_power(previous, delegatee, self.balance_of(delegator))

    def delegate_of(self, addr: str) -> Optional[str]:
        return self.state.delegates.get(addr)

    def _move_voting_power(self, src: Optional[str], dst: Optional[str], amount: int) -> None:
        if amount == 0 or src == dst:
            return
        if src is not None:
            self._write_checkpoint(src, -amount)
        if dst is not None:
            self._write_checkpoint(dst, amount)

    def _write_checkpoint(self, addr: str, delta: int) -> None:
        cps = self.state.checkpoints.setdefault(addr, [])
        current = cps[-1].votes if cps else 0
        new = current + delta
        assert new >= 0, "voting power underflow"
        block = self.chain.head_number
        if cps and cps[-1].block_number == block:
            cps[-1].votes = new
        else:
            cps.append(Checkpoint(block, new))

    @staticmethod
    def _lookup(cps: list[Checkpoint], block: int) -> int:
        """Latest checkpoint value at or before `block`, else 0."""
        i = bisect_right([c.block_number for c in cps], block)
        return cps[i - 1].votes if i else 0

    def get_votes(self, addr: str) -> int:
        cps = self.state.checkpoints.get(addr, [])
        return cps[-1].votes if cps else 0

    def votes_at(self, addr: str, block: int) -> int:
        """Internal snapshot lookup; permits block == head (used for
        vote weights when the snapshot block is the current block)."""
        return self._lookup(self.state.checkpoints.get(addr, []), block)

    def get_past_votes(self, addr: str, block: int) -> int:
        if block >= self.chain.head_number:
            raise errors.FutureBlockQuery(f"block {block} >= head {self.chain.head_number}")
        return self.votes_at(addr, block)

    def total_supply_at(self, block: int) -> int:
        return self._lookup(self.state.total_supply_checkpoints, block)

    def get_past_total_supply(self, block: int) -> int:
        if block >= self.chain.head_number:
            raise errors.FutureBlockQuery(f"block {block} >= head {self.chain.head_number}")
        return self.total_supply_at(block)

    # --- views -----------------------------------------------------------

    def holders_count(self) -> int:
        return len(self.state.holders)

    def supply_conserved(self) -> bool:
        return sum(self.state.balances.values()) + self.state.reserve == TOTAL_SUPPLY

    def state_dict(self) -> dict:
        s = self.state
        return {
            "balances": dict(sorted(s.balances.items())),
            "reserve": s.reserve,
            "delegates": dict(sorted(s.delegates.items())),
            "checkpoints": {
                a: [[c.block_number, c.votes] for c in cps]
                for a, cps in sorted(s.checkpoints.items())
            },
            "supply_checkpoints": [[c.block_number, c.votes] for c in s.total_supply_checkpoints],
            "holders": list(s.holders),
            "claimed": dict(sorted(s.claimed.items())),
        }
