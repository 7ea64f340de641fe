"""Incentive parameter store and reward distribution engine.

The two reward amounts and the fungible-per-badge exchange rate are held
behind an admin gate; after wiring, the admin is the timelock, so only an
executed governance proposal can change them. Distribution runs once per
executed proposal: the proposer earns the successful-proposal amount and
every distinct voter the participation amount, all drawn from the token
reserve. Exchanging fungible rewards for a reputation badge returns them
to the reserve and mints an NFT with generated metadata.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Optional

from . import errors
from .content_store import ContentStore
from .govtoken import WAD, GovernanceToken
from .keys import module_address
from .ledger import Chain
from .reputation import ReputationRegistry, badge_metadata

if TYPE_CHECKING:
    from .governor import Proposal


@dataclass
class IncentiveParams:
    voting_participation_incentive: int   # whole tokens
    successful_proposal_incentive: int    # whole tokens
    ft_per_nft_exchange_rate: int         # whole tokens per badge
    admin: str

    def __post_init__(self):
        if min(self.voting_participation_incentive, self.successful_proposal_incentive) < 0:
            raise errors.InvalidAmount("incentive amounts must be >= 0")
        if self.ft_per_nft_exchange_rate <= 0:
            raise errors.InvalidAmount("exchange rate must be positive")


@dataclass
class Payout:
    proposal_id: str
    recipient: str
    amount_tokens: int
    kind: str   # "proposer" | "voter"

    def to_dict(self) -> dict:
        return {
            "proposal_id": self.proposal_id,
            "recipient": self.recipient,
            "amount_tokens": self.amount_tokens,
            "kind": self.kind,
        }


class IncentiveEngine:
    def __init__(
        self,
        chain: Chain,
        token: GovernanceToken,
        nft: ReputationRegistry,
        content: ContentStore,
        admin: str,
    ):
        cfg = chain.config
        self.chain = chain
        self.token = token
        self.nft = nft
        self.content = content
        self.address = module_address("incentives")
        self.params = IncentiveParams(
            voting_participation_incentive=cfg.voting_participation_incentive,
            successful_proposal_incentive=cfg.successful_proposal_incentive,
            ft_per_nft_exchange_rate=cfg.ft_per_nft_exchange_rate,
            admin=admin,
        )
        self.distributed: set[str] = set()
        self.payouts: list[Payout] = []
        # pay participation rewards to voters of defeated proposals too?
        self.reward_losing_voters = False
        self.audit_log_path: Optional[Path] = None

    # --- admin-gated parameters ------------------------------------------

    def _require_admin(self, caller: str) -> None:
        if caller != self.params.admin:
            raise errors.NotAdmin("Only admin can call this function")

    def get_voting_participation_incentive(self) -> int:
        return self.params.voting_participation_incentive

    def set_voting_participation_incentive(self, caller: str, amount: int) -> None:
        self._require_admin(caller)
        if amount < 0:
            raise errors.InvalidAmount("incentive must be >= 0")
        self.params.voting_participation_incentive = amount

    def get_successful_proposal_incentive(self) -> int:
        return self.params.successful_proposal_incentive

    def set_successful_proposal_incentive(self, caller: str, amount: int) -> None:
        self._require_admin(caller)
        if amount < 0:
            raise errors.InvalidAmount("incentive must be >= 0")
        self.params.successful_proposal_incentive = amount

    def transfer_admin(self, caller: str, new_admin: str) -> None:
        self._require_admin(caller)
        if not new_admin:
            raise errors.InvalidAdmin("Invalid admin address")
        self.params.admin = new_admin

    # --- distribution -----------------------------------------------------

    def distribute_on_execution(self, proposal: "Proposal") -> list[Payout]:
        """Pay the proposer and every distinct voter from the reserve.
        Called exactly once by the governor's execution hook."""
        if proposal.id in self.distributed:
            raise errors.AlreadyDistributed(proposal.id)
        new_payouts: list[Payout] = []
        if self.params.successful_proposal_incentive > 0:
            new_payouts.append(
                Payout(proposal.id, proposal.proposer, self.params.successful_proposal_incentive, "proposer")
            )
        if self.params.voting_participation_incentive > 0:
            for voter in proposal.voters:
                new_payouts.append(
                    Payout(proposal.id, voter, self.params.voting_participation_incentive, "voter")
                )
        total = sum(p.amount_tokens for p in new_payouts) * WAD
        if self.token.state.reserve < total:
            raise errors.InsufficientReserve(
                f"reserve {self.token.state.reserve} < payouts {total}"
            )
        for p in new_payouts:
            self.token.send_tokens(self.address, p.recipient, p.amount_tokens)
        self.distributed.add(proposal.id)
        self.payouts.extend(new_payouts)
        if self.audit_log_path is not None:
            with self.audit_log_path.open("a") as fh:
                for p in new_payouts:
                    fh.write(json.dumps(p.to_dict(), sort_keys=True) + "\n")
        return new_payouts

    # --- FT -> NFT exchange ----------------------------------------------

    def exchange_ft_for_nft(self, caller: str, whole_tokens: int) -> int:
        """Burn-to-reserve the exact exchange rate and mint a badge."""
        rate = self.params.ft_per_nft_exchange_rate
        if whole_tokens != rate:
            raise errors.WrongAmount(f"exchange requires exactly {rate} tokens")
        self.token.return_to_reserve(caller, whole_tokens * WAD)
        token_id = self.nft.next_free_id()
        meta = badge_metadata(
            name=f"{self.nft.name} #{token_id}",
            description=f"Reputation badge exchanged for {rate} {self.token.symbol}",
            issued_block=self.chain.head_number,
            reason="ft_exchange",
        )
        cid = self.content.put(json.dumps(meta, sort_keys=True).encode("utf-8"))
        self.nft.safe_mint(self.address, caller, token_id, cid)
        return token_id

    def state_dict(self) -> dict:
        return {
            "voting_participation_incentive": self.params.voting_participation_incentive,
            "successful_proposal_incentive": self.params.successful_proposal_incentive,
            "ft_per_nft_exchange_rate": self.params.ft_per_nft_exchange_rate,
            "admin": self.params.admin,
            "distributed": sorted(self.distributed),
            "payouts": [p.to_dict() for p in self.payouts],
        }
