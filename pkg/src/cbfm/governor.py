"""Proposal lifecycle state machine with snapshot voting.

Counting is the simple three-bucket rule: quorum counts For + Abstain
against a fraction of the historical total supply at the snapshot block,
and success additionally needs strictly more For than Against. Vote
weights are read from the token checkpoints at the snapshot block
(vote_start), so later transfers or delegations cannot change a cast
weight. Approved proposals are handed to the timelock and only become
Executed after its delay; a queued proposal left past the grace period
expires.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Optional

from . import errors
from .encoding import digest_of, sha256
from .govtoken import GovernanceToken
from .keys import module_address
from .ledger import Chain
from .timelock import Timelock


class Support(IntEnum):
    AGAINST = 0
    FOR = 1
    ABSTAIN = 2


class ProposalState(Enum):
    PENDING = "Pending"
    ACTIVE = "Active"
    CANCELED = "Canceled"
    DEFEATED = "Defeated"
    SUCCEEDED = "Succeeded"
    QUEUED = "Queued"
    EXPIRED = "Expired"
    EXECUTED = "Executed"


TERMINAL_STATES = {ProposalState.CANCELED, ProposalState.EXECUTED}

# Legal edges of the lifecycle graph (used by the property suite).
TRANSITIONS: dict[ProposalState, set[ProposalState]] = {
    ProposalState.PENDING: {ProposalState.ACTIVE, ProposalState.CANCELED},
    ProposalState.ACTIVE: {ProposalState.SUCCEEDED, ProposalState.DEFEATED, ProposalState.CANCELED},
    ProposalState.SUCCEEDED: {ProposalState.QUEUED, ProposalState.CANCELED},
    ProposalState.QUEUED: {ProposalState.EXECUTED, ProposalState.EXPIRED, ProposalState.CANCELED},
    ProposalState.EXPIRED: {ProposalState.CANCELED},
    ProposalState.DEFEATED: set(),
    ProposalState.CANCELED: set(),
    ProposalState.EXECUTED: set(),
}


@dataclass
class GovernorConfig:
    voting_delay: int = 1
    voting_period: int = 300
    quorum_percentage: int = 4
    proposal_threshold: int = 0
    grace_period_seconds: int = 14 * 86_400

    def __post_init__(self):
        if self.voting_period < 1:
            raise ValueError("voting_period must be >= 1 block")
        if not 0 <= self.quorum_percentage <= 100:
            raise ValueError("quorum_percentage must be in 0..100")


@dataclass
class Proposal:
    id: str
    proposer: str
    actions: list[dict]
    description: str
    description_digest: str
    vote_start: int
    vote_end: int
    tallies: dict[str, int] = field(default_factory=lambda: {"for": 0, "against": 0, "abstain": 0})
    has_voted: set[str] = field(default_factory=set)
    voters: list[str] = field(default_factory=list)   # insertion order, for payouts
    canceled: bool = False
    queued: bool = False
    executed: bool = False
    eta: Optional[int] = None
    timelock_op_id: Optional[str] = None


def proposal_id(actions: list[dict], description: str) -> str:
    return digest_of(
        {"actions": actions, "description_digest": sha256(description.encode("utf-8")).hex()}
    ).hex()


def compose_description(text: str, location: str, cids: list[str]) -> str:
    """Description convention: free text, then location line, then one cid
    line per stored media blob."""
    lines = [text.rstrip()]
    lines.append(f"location: {location}")
    for cid in cids:
        lines.append(f"cid: {cid}")
    return "\n".join(lines)


def parse_description(description: str) -> dict:
    text_lines: list[str] = []
    location = ""
    cids: list[str] = []
    for line in description.splitlines():
        if line.startswith("location: "):
            location = line[len("location: "):]
        elif line.startswith("cid: "):
            cids.append(line[len("cid: "):])
        else:
            text_lines.append(line)
    return {"text": "\n".join(text_lines).rstrip(), "location": location, "cids": cids}


class Governor:
    def __init__(
        self,
        chain: Chain,
        token: GovernanceToken,
        timelock: Timelock,
        deployer: str,
        config: Optional[GovernorConfig] = None,
    ):
        cfg = chain.config
        self.chain = chain
        self.token = token
        self.timelock = timelock
        self.address = module_address("governor")
        self.config = config or GovernorConfig(
            voting_delay=cfg.voting_delay,
            voting_period=cfg.voting_period,
            quorum_percentage=cfg.quorum_percentage,
            proposal_threshold=cfg.proposal_threshold,
            grace_period_seconds=cfg.grace_period_seconds,
        )
        self.proposals: dict[str, Proposal] = {}
        self.proposal_order: list[str] = []
        self.proposal_count = 0
        self.members: list[str] = [deployer]
        self.is_member: set[str] = {deployer}
        self.incentives = None   # wired by the platform; duck-typed hook
        timelock.config.proposers.add(self.address)

    # --- membership ------------------------------------------------------

    def _require_member(self, caller: str) -> None:
        if caller not in self.is_member:
            raise errors.NotMember("Only members can call this function")

    def add_member(self, caller: str, new_member: str) -> None:
        self._require_member(caller)
        if new_member in self.is_member:
            raise errors.AlreadyMember("Address is already a member")
        self.members.append(new_member)
        self.is_member.add(new_member)

    def remove_member(self, caller: str, member: str) -> None:
        self._require_member(caller)
        if member not in self.is_member:
            raise errors.UnknownMember("Address is not a member")
        idx = self.members.index(member)
        self.members[idx] = self.members[-1]   # swap-remove; order not preserved
        self.members.pop()
        self.is_member.discard(member)

    def get_members(self) -> list[str]:
        return list(self.members)

    def member_count(self) -> int:
        return len(self.members)

    # --- proposal lifecycle ----------------------------------------------

    def propose(self, proposer: str, actions: list[dict], description: str) -> str:
        head = self.chain.head_number
        if self.config.proposal_threshold > 0:
            weight = self.token.votes_at(proposer, max(head - 1, 0))
            if weight < self.config.proposal_threshold:
                raise errors.BelowThreshold(
                    f"{weight} < threshold {self.config.proposal_threshold}"
                )
        pid = proposal_id(actions, description)
        if pid in self.proposals:
            raise errors.DuplicateProposal(pid)
        vote_start = head + self.config.voting_delay
        proposal = Proposal(
            id=pid,
            proposer=proposer,
            actions=actions,
            description=description,
            description_digest=sha256(description.encode("utf-8")).hex(),
            vote_start=vote_start,
            vote_end=vote_start + self.config.voting_period,
        )
        self.proposals[pid] = proposal
        self.proposal_order.append(pid)
        self.proposal_count += 1
        return pid

    def proposal(self, pid: str) -> Proposal:
        try:
            return self.proposals[pid]
        except KeyError:
            raise errors.UnknownProposal(pid) from None

    def quorum(self, block: int) -> int:
        return self.token.get_past_total_supply(block) * self.config.quorum_percentage // 100

    def _quorum_reached(self, p: Proposal) -> bool:
        # Abstain counts toward quorum, Against does not.
        needed = self.token.total_supply_at(p.vote_start) * self.config.quorum_percentage // 100
        return p.tallies["for"] + p.tallies["abstain"] >= needed

    def _vote_succeeded(self, p: Proposal) -> bool:
        return p.tallies["for"] > p.tallies["against"]

    def state(self, pid: str) -> ProposalState:
        p = self.proposal(pid)
        if p.canceled:
            return ProposalState.CANCELED
        if p.executed:
            return ProposalState.EXECUTED
        head = self.chain.head_number
        if head < p.vote_start:
            return ProposalState.PENDING
        if head <= p.vote_end:
            return ProposalState.ACTIVE
        if not (self._quorum_reached(p) and self._vote_succeeded(p)):
            return ProposalState.DEFEATED
        if p.queued:
            assert p.eta is not None
            if self.chain.now > p.eta + self.config.grace_period_seconds:
                return ProposalState.EXPIRED
            return ProposalState.QUEUED
        return ProposalState.SUCCEEDED

    def cast_vote(self, voter: str, pid: str, support: int) -> int:
        p = self.proposal(pid)
        if self.state(pid) is not ProposalState.ACTIVE:
            raise errors.NotActive(f"proposal is {self.state(pid).value}")
        if voter in p.has_voted:
            raise errors.AlreadyVoted(voter)
        try:
            bucket = {Support.AGAINST: "against", Support.FOR: "for", Support.ABSTAIN: "abstain"}[
                Support(support)
            ]
        except ValueError:
            raise errors.InvalidSupport(str(support)) from None
        weight = self.token.votes_at(voter, p.vote_start)
        p.tallies[bucket] += weight
        p.has_voted.add(voter)
        p.voters.append(voter)
        return weight

    def queue(self, pid: str) -> int:
        p = self.proposal(pid)
        st = self.state(pid)
        if st is not ProposalState.SUCCEEDED:
            raise errors.WrongState(f"cannot queue a {st.value} proposal")
        op_id, eta = self.timelock.schedule(self.address, p.actions, salt=p.id)
        p.queued = True
        p.eta = eta
        p.timelock_op_id = op_id
        return eta

    def execute(self, caller: str, pid: str) -> dict:
        p = self.proposal(pid)
        st = self.state(pid)
        if st is ProposalState.EXPIRED:
            raise errors.Expired(f"grace period passed for {pid}")
        if st is not ProposalState.QUEUED:
            raise errors.WrongState(f"cannot execute a {st.value} proposal")
        assert p.timelock_op_id is not None
        try:
            results = self.timelock.execute_scheduled(caller, p.timelock_op_id)
        except errors.NotReady as exc:
            raise errors.TimelockNotReady(str(exc)) from None
        p.executed = True
        payouts = []
        if self.incentives is not None:
            payouts = [pay.to_dict() for pay in self.incentives.distribute_on_execution(p)]
        return {"action_results": results, "payouts": payouts}

    def cancel(self, caller: str, pid: str) -> None:
        p = self.proposal(pid)
        if p.executed:
            raise errors.WrongState("cannot cancel an executed proposal")
        if p.canceled:
            raise errors.WrongState("proposal already canceled")
        if self.state(pid) is ProposalState.DEFEATED:
            raise errors.WrongState("cannot cancel a defeated proposal")
        if caller != p.proposer and caller not in self.is_member:
            raise errors.NotMember("only the proposer or a member may cancel")
        p.canceled = True
        if p.timelock_op_id is not None:
            self.timelock.cancel_operation(p.timelock_op_id)

    # --- views -----------------------------------------------------------

    def proposal_view(self, pid: str) -> dict:
        p = self.proposal(pid)
        st = self.state(pid)
        quorum_needed = (
            self.token.total_supply_at(p.vote_start) * self.config.quorum_percentage // 100
        )
        return {
            "id": p.id,
            "proposer": p.proposer,
            "description": p.description,
            "details": parse_description(p.description),
            "actions": p.actions,
            "vote_start": p.vote_start,
            "vote_end": p.vote_end,
            "state": st.value,
            "tallies": dict(p.tallies),
            "quorum_needed": quorum_needed,
            "quorum_progress": p.tallies["for"] + p.tallies["abstain"],
            "voters": list(p.voters),
            "eta": p.eta,
        }

    def state_dict(self) -> dict:
        return {
            "proposal_count": self.proposal_count,
            "members": list(self.members),
            "config": {
                "voting_delay": self.config.voting_delay,
                "voting_period": self.config.voting_period,
                "quorum_percentage": self.config.quorum_percentage,
                "proposal_threshold": self.config.proposal_threshold,
            },
            "proposals": {
                pid: {
                    "proposer": p.proposer,
                    "actions": p.actions,
                    "description_digest": p.description_digest,
                    "vote_start": p.vote_start,
                    "vote_end": p.vote_end,
                    "tallies": dict(p.tallies),
                    "voters": sorted(p.has_voted),
                    "canceled": p.canceled,
                    "queued": p.queued,
                    "executed": p.executed,
                    "eta": p.eta,
                }
                for pid, p in sorted(self.proposals.items())
            },
        }
