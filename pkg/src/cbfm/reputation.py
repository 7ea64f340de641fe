"""Non-fungible reputation badge registry.

Member-gated minting of unique badge tokens carrying a metadata URI
(normally a cid pointing at a JSON blob in the content store). Burning
decrements total supply so it always equals the live token count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import errors
from .keys import module_address
from .ledger import Chain

BADGE_METADATA_VERSION = 1


@dataclass
class ReputationToken:
    token_id: int
    owner: str
    uri: str


@dataclass
class NftRegistryState:
    tokens: dict[int, ReputationToken] = field(default_factory=dict)
    members: set[str] = field(default_factory=set)
    member_order: list[str] = field(default_factory=list)


def badge_metadata(name: str, description: str, issued_block: int, reason: str) -> dict:
    return {
        "v": BADGE_METADATA_VERSION,
        "name": name,
        "description": description,
        "issued_block": issued_block,
        "reason": reason,
    }


class ReputationRegistry:
    def __init__(self, chain: Chain, deployer: str, name: str | None = None):
        self.chain = chain
        self.name = name or chain.config.nft_name
        self.address = module_address("reputation")
        self.state = NftRegistryState()
        self._add_member(deployer)

    def _add_member(self, addr: str) -> None:
        if addr not in self.state.members:
            self.state.members.add(addr)
            self.state.member_order.append(addr)

    def add_member(self, caller: str, new_member: str) -> None:
        if caller not in self.state.members:
            raise errors.NotMember("Only members can call this function")
        if new_member in self.state.members:
            raise errors.AlreadyMember("Address is already a member")
        self._add_member(new_member)

    def is_member(self, addr: str) -> bool:
        return addr in self.state.members

    def safe_mint(self, caller: str, to: str, token_id: int, uri: str) -> None:
        if caller not in self.state.members:
            raise errors.NotMember("Only members can call this function")
        if token_id in self.state.tokens:
            raise errors.TokenIdExists(str(token_id))
        self.state.tokens[token_id] = ReputationToken(token_id, to, uri)

    def next_free_id(self) -> int:
        return max(self.state.tokens, default=0) + 1

    def _token(self, token_id: int) -> ReputationToken:
        try:
            return self.state.tokens[token_id]
        except KeyError:
            raise errors.UnknownToken(str(token_id)) from None

    def burn(self, caller: str, token_id: int) -> None:
        if self._token(token_id).owner != caller:
            raise errors.NotOwner(f"{caller} does not own token {token_id}")
        del self.state.tokens[token_id]

    def transfer_nft(self, sender: str, receiver: str, token_id: int) -> None:
        token = self._token(token_id)
        if token.owner != sender:
            raise errors.NotOwner(f"{sender} does not own token {token_id}")
        token.owner = receiver

    def owner_of(self, token_id: int) -> str:
        return self._token(token_id).owner

    def token_uri(self, token_id: int) -> str:
        return self._token(token_id).uri

    def total_supply(self) -> int:
        return len(self.state.tokens)

    def tokens_of(self, addr: str) -> list[ReputationToken]:
        return [t for t in self.state.tokens.values() if t.owner == addr]

    def state_dict(self) -> dict:
        return {
            "tokens": {
                str(tid): {"owner": t.owner, "uri": t.uri}
                for tid, t in sorted(self.state.tokens.items())
            },
            "members": list(self.state.member_order),
        }
