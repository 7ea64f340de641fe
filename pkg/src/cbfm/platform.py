"""Wires the chain and the five on-chain modules into one node.

The platform owns the dev-custody wallets (server-held keypairs addressed
by name), registers every transaction op_kind handler on the chain,
routes executed proposal actions to their target modules, and can replay a
recorded event log into an identical node.

Deployment is itself five fee-charged transactions from the deployer, one
per module, mirroring the measured deployment cost rows. After the last
one the system is fully wired: the governor is the timelock's proposer,
the timelock administers the incentive parameters, and reserve spending is
restricted to the timelock and the incentive engine.
"""

from __future__ import annotations

import copy
from typing import Any, Optional

from . import errors
from .config import PlatformConfig
from .content_store import ContentStore
from .encoding import digest_of
from .governor import Governor, compose_description
from .govtoken import GovernanceToken
from .incentives import IncentiveEngine
from .keys import Keypair
from .ledger import Chain, Receipt, SignedTransaction, make_tx
from .reputation import ReputationRegistry
from .timelock import Timelock


class Platform:
    def __init__(self, config: Optional[PlatformConfig] = None, apply_genesis: bool = True):
        self.config = config or PlatformConfig()
        self.chain = Chain(self.config)
        self.content = ContentStore(self.config.storage_root or None, self.config.max_blob_bytes)
        self.wallets: dict[str, Keypair] = {}          # name -> keypair
        self.wallet_names: dict[str, str] = {}         # address -> name
        self.token: Optional[GovernanceToken] = None
        self.timelock: Optional[Timelock] = None
        self.governor: Optional[Governor] = None
        self.nft: Optional[ReputationRegistry] = None
        self.incentives: Optional[IncentiveEngine] = None
        self._register_handlers()
        self.chain.snapshot_provider = (self._snapshot_modules, self._restore_modules)
        if apply_genesis:
            for acct in self.config.genesis_accounts:
                self.create_account(acct.name)
                if acct.fund_wei > 0:
                    self.chain.fund(self.address_of(acct.name), acct.fund_wei)

    # --- wallets ----------------------------------------------------------

    def create_account(self, name: str) -> str:
        address, kp = self.chain.create_account(name.encode("utf-8"))
        self.wallets[name] = kp
        self.wallet_names[address] = name
        return address

    def address_of(self, name_or_address: str) -> str:
        if name_or_address in self.wallets:
            return self.wallets[name_or_address].address
        return name_or_address

    def wallet(self, name_or_address: str) -> Keypair:
        if name_or_address in self.wallets:
            return self.wallets[name_or_address]
        name = self.wallet_names.get(name_or_address)
        if name is None:
            raise errors.UnknownAddress(name_or_address)
        return self.wallets[name]

    # --- transaction submission -------------------------------------------

    def send(self, sender: str, op_kind: str, **args: Any) -> Receipt:
        """Sign and submit a transaction from a named (or addressed) wallet."""
        kp = self.wallet(sender)
        nonce = self.chain.account(kp.address).nonce
        return self.chain.submit_tx(make_tx(kp, nonce, op_kind, args))

    def advance(self, blocks: int, seconds_per_block: Optional[int] = None) -> int:
        return self.chain.advance_blocks(blocks, seconds_per_block)

    # --- deployment -------------------------------------------------------

    def deploy(self, deployer: str, keep_percentage: int = 100) -> list[Receipt]:
        """Issue the five deployment transactions and wire the modules."""
        receipts = [
            self.send(deployer, "token_deploy", keep_percentage=keep_percentage),
            self.send(deployer, "timelock_deploy"),
            self.send(deployer, "governor_deploy"),
            self.send(deployer, "nft_deploy"),
            self.send(deployer, "incentives_deploy"),
        ]
        failed = [r for r in receipts if not r.ok]
        if failed:
            raise errors.AlreadyDeployed(failed[0].revert_reason or "deployment reverted")
        return receipts

    @property
    def deployed(self) -> bool:
        return self.incentives is not None

    def _require_deployed(self) -> None:
        if not self.deployed:
            raise errors.NotDeployed("contracts not deployed")

    # --- op_kind handlers -------------------------------------------------

    def _register_handlers(self) -> None:
        c = self.chain
        c.register_handler("token_deploy", self._h_token_deploy)
        c.register_handler("timelock_deploy", self._h_timelock_deploy)
        c.register_handler("governor_deploy", self._h_governor_deploy)
        c.register_handler("nft_deploy", self._h_nft_deploy)
        c.register_handler("incentives_deploy", self._h_incentives_deploy)
        c.register_handler("token_transfer", self._h_token_transfer)
        c.register_handler("delegate", self._h_delegate)
        c.register_handler("claim_tokens", self._h_claim_tokens)
        c.register_handler("add_member", self._h_add_member)
        c.register_handler("remove_member", self._h_remove_member)
        c.register_handler("proposal_submission", self._h_propose)
        c.register_handler("vote", self._h_vote)
        c.register_handler("queue_proposal", self._h_queue)
        c.register_handler("execute_proposal", self._h_execute)
        c.register_handler("cancel_proposal", self._h_cancel)
        c.register_handler("ether_transfer", self._h_ether_transfer)
        c.register_handler("nft_mint", self._h_nft_mint)
        c.register_handler("nft_transfer", self._h_nft_transfer)
        c.register_handler("nft_burn", self._h_nft_burn)
        c.register_handler("exchange_ft_for_nft", self._h_exchange)
        c.register_handler("set_voting_participation_incentive", self._h_set_voting_incentive)
        c.register_handler("set_successful_proposal_incentive", self._h_set_proposal_incentive)
        c.register_handler("transfer_admin", self._h_transfer_admin)

    def _h_token_deploy(self, sender: str, args: dict) -> dict:
        if self.token is not None:
            raise errors.AlreadyDeployed("token already deployed")
        token = GovernanceToken(self.chain)
        token.init_token(sender, int(args["keep_percentage"]))
        self.token = token
        return {"address": token.address}

    def _h_timelock_deploy(self, sender: str, args: dict) -> dict:
        if self.timelock is not None:
            raise errors.AlreadyDeployed("timelock already deployed")
        min_delay = args.get("min_delay")
        self.timelock = Timelock(self.chain, None if min_delay is None else int(min_delay))
        self.timelock.config.admin = sender
        return {"address": self.timelock.address}

    def _h_governor_deploy(self, sender: str, args: dict) -> dict:
        if self.governor is not None:
            raise errors.AlreadyDeployed("governor already deployed")
        if self.token is None or self.timelock is None:
            raise errors.NotDeployed("token and timelock must be deployed first")
        self.governor = Governor(self.chain, self.token, self.timelock, deployer=sender)
        return {"address": self.governor.address}

    def _h_nft_deploy(self, sender: str, args: dict) -> dict:
        if self.nft is not None:
            raise errors.AlreadyDeployed("nft registry already deployed")
        self.nft = ReputationRegistry(self.chain, deployer=sender)
        return {"address": self.nft.address}

    def _h_incentives_deploy(self, sender: str, args: dict) -> dict:
        if self.incentives is not None:
            raise errors.AlreadyDeployed("incentives already deployed")
        if self.token is None or self.nft is None or self.governor is None or self.timelock is None:
            raise errors.NotDeployed("deploy token, timelock, governor and nft first")
        engine = IncentiveEngine(self.chain, self.token, self.nft, self.content, admin=sender)
        self.incentives = engine
        self._wire(engine)
        return {"address": engine.address}

    def _wire(self, engine: IncentiveEngine) -> None:
        assert self.token and self.timelock and self.governor and self.nft
        # governance owns the incentive parameters from here on
        engine.transfer_admin(engine.params.admin, self.timelock.address)
        self.token.authorized_spenders = {self.timelock.address, engine.address}
        self.governor.incentives = engine
        self.timelock.dispatcher = self._dispatch_action
        # admin role handed to the governor; only governance reconfigures
        self.timelock.config.admin = self.governor.address
        # the engine and the timelock may mint badges
        self.nft._add_member(engine.address)
        self.nft._add_member(self.timelock.address)

    # proposal actions, dispatched with the timelock as authorized caller
    def _dispatch_action(self, target: str, op: str, args: dict, value: int, caller: str) -> Any:
        self._require_deployed()
        assert self.token and self.timelock and self.nft and self.incentives
        if target == "token":
            if op in ("send_tokens", "reward"):
                self.token.send_tokens(caller, args["to"], int(args["amount"]))
                return {"to": args["to"], "amount": int(args["amount"])}
        elif target == "incentives":
            if op == "set_voting_participation_incentive":
                self.incentives.set_voting_participation_incentive(caller, int(args["amount"]))
                return {"amount": int(args["amount"])}
            if op == "set_successful_proposal_incentive":
                self.incentives.set_successful_proposal_incentive(caller, int(args["amount"]))
                return {"amount": int(args["amount"])}
            if op == "transfer_admin":
                self.incentives.transfer_admin(caller, args["new_admin"])
                return {"new_admin": args["new_admin"]}
        elif target == "timelock":
            if op == "send_ether":
                self.timelock.send_ether(caller, args["receiver"], int(args["amount_wei"]))
                return {"receiver": args["receiver"], "amount_wei": int(args["amount_wei"])}
        elif target == "nft":
            if op == "safe_mint":
                self.nft.safe_mint(caller, args["to"], int(args["token_id"]), args["uri"])
                return {"token_id": int(args["token_id"])}
        raise errors.UnknownOpKind(f"action {target}.{op}")

    def _h_token_transfer(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.token.transfer(sender, self.address_of(args["to"]), int(args["amount"]))
        return {"to": self.address_of(args["to"]), "amount": int(args["amount"])}

    def _h_delegate(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        delegatee = self.address_of(args["delegatee"])
        self.token.delegate(sender, delegatee)
        return {"delegatee": delegatee}

    def _h_claim_tokens(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.token.claim_tokens(sender, int(args["amount"]))
        return {"amount": int(args["amount"])}

    def _h_add_member(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        member = self.address_of(args["member"])
        self.governor.add_member(sender, member)
        if not self.nft.is_member(member):
            self.nft.add_member(sender, member)
        return {"member": member}

    def _h_remove_member(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.governor.remove_member(sender, self.address_of(args["member"]))
        return {"member": self.address_of(args["member"])}

    def _h_propose(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        pid = self.governor.propose(sender, args.get("actions", []), args["description"])
        return {"proposal_id": pid}

    def _h_vote(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        weight = self.governor.cast_vote(sender, args["proposal_id"], int(args["support"]))
        return {"weight": weight}

    def _h_queue(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        eta = self.governor.queue(args["proposal_id"])
        return {"eta": eta}

    def _h_execute(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        return self.governor.execute(sender, args["proposal_id"])

    def _h_cancel(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.governor.cancel(sender, args["proposal_id"])
        return {"canceled": args["proposal_id"]}

    def _h_ether_transfer(self, sender: str, args: dict) -> dict:
        receiver = self.address_of(args["to"])
        amount = int(args["amount"])
        if amount <= 0:
            raise errors.InvalidAmount("transfer must be positive")
        self.chain.native_transfer(sender, receiver, amount)
        return {"to": receiver, "amount": amount}

    def _h_nft_mint(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        token_id = int(args["token_id"]) if "token_id" in args else self.nft.next_free_id()
        self.nft.safe_mint(sender, self.address_of(args["to"]), token_id, args["uri"])
        return {"token_id": token_id}

    def _h_nft_transfer(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.nft.transfer_nft(sender, self.address_of(args["to"]), int(args["token_id"]))
        return {"token_id": int(args["token_id"])}

    def _h_nft_burn(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.nft.burn(sender, int(args["token_id"]))
        return {"token_id": int(args["token_id"])}

    def _h_exchange(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        token_id = self.incentives.exchange_ft_for_nft(sender, int(args["amount"]))
        return {"token_id": token_id}

    def _h_set_voting_incentive(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.incentives.set_voting_participation_incentive(sender, int(args["amount"]))
        return {"amount": int(args["amount"])}

    def _h_set_proposal_incentive(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.incentives.set_successful_proposal_incentive(sender, int(args["amount"]))
        return {"amount": int(args["amount"])}

    def _h_transfer_admin(self, sender: str, args: dict) -> dict:
        self._require_deployed()
        self.incentives.transfer_admin(sender, self.address_of(args["new_admin"]))
        return {"new_admin": self.address_of(args["new_admin"])}

    # --- maintenance intake ----------------------------------------------

    def submit_maintenance(
        self,
        submitter: str,
        description: str,
        location: str,
        media: list[tuple[str, bytes]],
    ) -> dict:
        """Store media blobs, compose the proposal description, and submit
        the proposal transaction. Only cids reach the chain."""
        self._require_deployed()
        if not description.strip():
            raise errors.InvalidAmount("description must be non-empty")
        cids = [self.content.put(data) for _, data in media]
        full_description = compose_description(description, location, cids)
        receipt = self.send(submitter, "proposal_submission", actions=[], description=full_description)
        if not receipt.ok:
            assert receipt.revert_reason is not None
            name, _, detail = receipt.revert_reason.partition(": ")
            raise getattr(errors, name, errors.ChainError)(detail)
        return {"cids": cids, "proposal_id": receipt.result["proposal_id"], "receipt": receipt}

    # --- snapshot / rollback ---------------------------------------------

    def _snapshot_modules(self) -> dict:
        snap: dict[str, Any] = {}
        if self.token:
            snap["token"] = (copy.deepcopy(self.token.state), set(self.token.authorized_spenders))
        if self.timelock:
            snap["timelock"] = (
                copy.deepcopy(self.timelock.operations),
                copy.deepcopy(self.timelock.config),
            )
        if self.governor:
            g = self.governor
            snap["governor"] = copy.deepcopy(
                {
                    "proposals": g.proposals,
                    "order": g.proposal_order,
                    "count": g.proposal_count,
                    "members": g.members,
                    "is_member": g.is_member,
                }
            )
        if self.nft:
            snap["nft"] = copy.deepcopy(self.nft.state)
        if self.incentives:
            e = self.incentives
            snap["incentives"] = copy.deepcopy(
                {"params": e.params, "distributed": e.distributed, "payouts": e.payouts}
            )
        return snap

    def _restore_modules(self, snap: dict) -> None:
        if "token" not in snap:
            self.token = None
        elif self.token:
            self.token.state, self.token.authorized_spenders = snap["token"]
        if "timelock" not in snap:
            self.timelock = None
        elif self.timelock:
            self.timelock.operations, self.timelock.config = snap["timelock"]
        if "governor" not in snap:
            self.governor = None
        elif self.governor:
            g = snap["governor"]
            self.governor.proposals = g["proposals"]
            self.governor.proposal_order = g["order"]
            self.governor.proposal_count = g["count"]
            self.governor.members = g["members"]
            self.governor.is_member = g["is_member"]
        if "nft" not in snap:
            self.nft = None
        elif self.nft:
            self.nft.state = snap["nft"]
        if "incentives" not in snap:
            self.incentives = None
        elif self.incentives:
            e = snap["incentives"]
            self.incentives.params = e["params"]
            self.incentives.distributed = e["distributed"]
            self.incentives.payouts = e["payouts"]

    # --- whole-node state -------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "chain": self.chain.state_dict(),
            "token": self.token.state_dict() if self.token else None,
            "timelock": self.timelock.state_dict() if self.timelock else None,
            "governor": self.governor.state_dict() if self.governor else None,
            "nft": self.nft.state_dict() if self.nft else None,
            "incentives": self.incentives.state_dict() if self.incentives else None,
        }

    def state_digest(self) -> str:
        return digest_of(self.state_dict()).hex()

    def conservation_report(self) -> dict:
        report = {"native_ok": self.chain.conservation_holds()}
        if self.token:
            report["token_supply_ok"] = self.token.supply_conserved()
        if self.nft:
            report["nft_supply_ok"] = self.nft.total_supply() == len(self.nft.state.tokens)
        return report

    # --- replay -----------------------------------------------------------

    @classmethod
    def replay(cls, events: list[dict], config: Optional[PlatformConfig] = None) -> "Platform":
        """Rebuild a node by re-running a recorded event log from genesis."""
        node = cls(config, apply_genesis=False)
        for ev in events:
            kind = ev["kind"]
            if kind == "create_account":
                seed = bytes.fromhex(ev["seed"])
                _, kp = node.chain.create_account(seed)
                try:
                    name = seed.decode("utf-8")
                except UnicodeDecodeError:
                    name = kp.address
                node.wallets[name] = kp
                node.wallet_names[kp.address] = name
            elif kind == "fund":
                node.chain.fund(ev["address"], ev["amount"])
            elif kind == "advance":
                node.chain.advance_blocks(ev["n"], ev["seconds_per_block"])
            elif kind == "tx":
                tx = SignedTransaction(
                    sender=ev["sender"],
                    nonce=ev["nonce"],
                    op_kind=ev["op_kind"],
                    payload=bytes.fromhex(ev["payload"]),
                    signature=bytes.fromhex(ev["signature"]),
                )
                node.chain.submit_tx(tx)
            else:
                raise ValueError(f"unknown event kind {kind!r}")
        return node
