"""Deterministic single-chain simulator.

One writer mutates the chain; every mutation is either a faucet fund, a
block advance, or a signed transaction dispatched to a registered handler.
Accepted events are appended to an in-memory log (optionally mirrored to a
JSON-lines file) from which the whole chain can be replayed bit-exactly.

Transactions pay a flat per-operation fee from the schedule; a reverted
handler still consumes the fee and bumps the nonce, but its state effects
are rolled back via the registered snapshot provider.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Any, Callable, Optional

from . import errors
from .config import PlatformConfig
from .encoding import canonical_json, digest_of, sha256, sign_preimage
from .fees import FeeSchedule
from .keys import Keypair, verify_signature

GENESIS_PARENT = b"\x00" * 32


@dataclass
class Account:
    address: str
    public_key: Optional[bytes]  # None for module (contract) accounts
    balance: int = 0             # wei
    nonce: int = 0


@dataclass
class Block:
    number: int
    timestamp: int
    parent_digest: bytes
    tx_digests: list[bytes] = field(default_factory=list)

    def digest(self) -> bytes:
        return digest_of(
            {
                "number": self.number,
                "timestamp": self.timestamp,
                "parent": self.parent_digest.hex(),
                "txs": [d.hex() for d in self.tx_digests],
            }
        )


@dataclass
class Receipt:
    tx_digest: str
    block_number: int
    gas_used: int
    fee_eth: Decimal
    fee_usd: Decimal
    status: str                       # "success" | "reverted"
    revert_reason: Optional[str] = None
    result: Any = None                # handler return value (JSON-able)

    @property
    def ok(self) -> bool:
        return self.status == "success"

    def to_dict(self) -> dict:
        return {
            "tx_digest": self.tx_digest,
            "block_number": self.block_number,
            "gas_used": self.gas_used,
            "fee_eth": str(self.fee_eth),
            "fee_usd": str(self.fee_usd),
            "status": self.status,
            "revert_reason": self.revert_reason,
            "result": self.result,
        }


@dataclass(frozen=True)
class SignedTransaction:
    sender: str
    nonce: int
    op_kind: str
    payload: bytes    # canonical JSON of the operation arguments
    signature: bytes

    def digest(self) -> bytes:
        return sha256(sign_preimage(self.nonce, self.op_kind, self.payload) + self.signature)


def make_tx(keypair: Keypair, nonce: int, op_kind: str, args: dict) -> SignedTransaction:
    payload = canonical_json(args)
    sig = keypair.sign(sign_preimage(nonce, op_kind, payload))
    return SignedTransaction(keypair.address, nonce, op_kind, payload, sig)


Handler = Callable[[str, dict], Any]


class Chain:
    """Accounts, block clock, fee accounting, and the transaction loop."""

    def __init__(self, config: Optional[PlatformConfig] = None):
        self.config = config or PlatformConfig()
        self.fee_schedule: FeeSchedule = self.config.fee_schedule()
        self.eth_usd_rate: Decimal = self.config.eth_usd_rate
        self.blocks: list[Block] = [Block(0, self.config.genesis_timestamp, GENESIS_PARENT)]
        self.accounts: dict[str, Account] = {}
        self._seeds_used: set[bytes] = set()
        self.handlers: dict[str, Handler] = {}
        self.fees_collected: int = 0   # wei
        self.total_funded: int = 0     # wei
        self.events: list[dict] = []
        self.event_log_path: Optional[Path] = None
        # (take, restore) over module state, installed by the platform
        self.snapshot_provider: Optional[tuple[Callable[[], Any], Callable[[Any], None]]] = None
        self._lock = threading.RLock()

    # --- block clock -----------------------------------------------------

    @property
    def head(self) -> Block:
        return self.blocks[-1]

    @property
    def head_number(self) -> int:
        return self.head.number

    @property
    def now(self) -> int:
        """Current block timestamp (the chain has no wall clock)."""
        return self.head.timestamp

    def advance_blocks(self, n: int, seconds_per_block: Optional[int] = None, _record: bool = True) -> int:
        if n < 1:
            raise errors.InvalidAmount("must advance at least one block")
        spb = self.config.seconds_per_block if seconds_per_block is None else seconds_per_block
        with self._lock:
            for _ in range(n):
                prev = self.head
                self.blocks.append(Block(prev.number + 1, prev.timestamp + spb, prev.digest()))
            if _record:
                self._append_event({"kind": "advance", "n": n, "seconds_per_block": spb})
            return self.head_number

    # --- accounts --------------------------------------------------------

    def create_account(self, seed: bytes, _record: bool = True) -> tuple[str, Keypair]:
        if not seed:
            raise errors.EmptySeed("account seed must be non-empty")
        with self._lock:
            if seed in self._seeds_used:
                raise errors.DuplicateSeed(f"seed already used: {seed!r}")
            kp = Keypair.from_seed(seed)
            if kp.address in self.accounts:
                raise errors.DuplicateSeed(f"address collision for seed {seed!r}")
            self._seeds_used.add(seed)
            self.accounts[kp.address] = Account(kp.address, kp.public_key)
            if _record:
                self._append_event({"kind": "create_account", "seed": seed.hex()})
            return kp.address, kp

    def register_module_account(self, address: str) -> None:
        """Balance-bearing account with no signing key (contract-style)."""
        if address not in self.accounts:
            self.accounts[address] = Account(address, None)

    def account(self, address: str) -> Account:
        try:
            return self.accounts[address]
        except KeyError:
            raise errors.UnknownAddress(address) from None

    def balance(self, address: str) -> int:
        return self.account(address).balance

    def fund(self, address: str, amount: int, _record: bool = True) -> Receipt:
        if amount <= 0:
            raise errors.InvalidAmount("fund amount must be positive")
        with self._lock:
            acct = self.account(address)
            acct.balance += amount
            self.total_funded += amount
            event = {"kind": "fund", "address": address, "amount": amount}
            if _record:
                self._append_event(event)
            return Receipt(
                tx_digest=digest_of(event | {"seq": len(self.events)}).hex(),
                block_number=self.head_number,
                gas_used=0,
                fee_eth=Decimal(0),
                fee_usd=Decimal(0),
                status="success",
            )

    def native_transfer(self, sender: str, receiver: str, amount: int) -> None:
        if amount < 0:
            raise errors.InvalidAmount("negative transfer")
        src = self.account(sender)
        dst = self.account(receiver)
        if src.balance < amount:
            raise errors.InsufficientNativeBalance(f"{sender} holds {src.balance} < {amount}")
        src.balance -= amount
        dst.balance += amount

    # --- transactions ----------------------------------------------------

    def register_handler(self, op_kind: str, handler: Handler) -> None:
        self.handlers[op_kind] = handler

    def fee_quote(self, op_kind: str, eth_usd_rate: Optional[Decimal] = None) -> tuple[int, Decimal, Decimal]:
        rate = self.eth_usd_rate if eth_usd_rate is None else eth_usd_rate
        return self.fee_schedule.quote(op_kind, rate)

    def submit_tx(self, tx: SignedTransaction, _record: bool = True) -> Receipt:
        with self._lock:
            acct = self.account(tx.sender)
            if acct.public_key is None or not verify_signature(
                acct.public_key, sign_preimage(tx.nonce, tx.op_kind, tx.payload), tx.signature
            ):
                raise errors.BadSignature(f"signature check failed for {tx.sender}")
            if tx.nonce != acct.nonce:
                raise errors.BadNonce(f"expected nonce {acct.nonce}, got {tx.nonce}")
            if tx.op_kind not in self.fee_schedule:
                raise errors.UnknownOpKind(tx.op_kind)
            if tx.op_kind not in self.handlers:
                raise errors.UnknownOpKind(f"no handler for {tx.op_kind}")
            entry = self.fee_schedule.entry(tx.op_kind)
            fee_wei = entry.fee_wei
            if acct.balance < fee_wei:
                raise errors.InsufficientFeeBalance(
                    f"{tx.sender} holds {acct.balance} wei < fee {fee_wei} wei"
                )

            # Fee and nonce are consumed whether or not the handler reverts.
            acct.balance -= fee_wei
            acct.nonce += 1
            self.fees_collected += fee_wei

            args = self._decode_payload(tx.payload)
            snap = self._take_snapshot()
            status, reason, result = "success", None, None
            try:
                result = self.handlers[tx.op_kind](tx.sender, args)
            except errors.ChainError as exc:
                self._restore_snapshot(snap)
                status, reason = "reverted", f"{exc.name}: {exc}"

            tx_digest = tx.digest()
            self.head.tx_digests.append(tx_digest)
            receipt = Receipt(
                tx_digest=tx_digest.hex(),
                block_number=self.head_number,
                gas_used=entry.gas,
                fee_eth=entry.fee_eth,
                fee_usd=entry.fee_usd(self.eth_usd_rate),
                status=status,
                revert_reason=reason,
                result=result,
            )
            if _record:
                self._append_event(
                    {
                        "kind": "tx",
                        "digest": receipt.tx_digest,
                        "sender": tx.sender,
                        "nonce": tx.nonce,
                        "op_kind": tx.op_kind,
                        "payload": tx.payload.hex(),
                        "signature": tx.signature.hex(),
                        "receipt": receipt.to_dict(),
                    }
                )
            return receipt

    @staticmethod
    def _decode_payload(payload: bytes) -> dict:
        import json

        try:
            args = json.loads(payload.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            raise errors.UnknownOpKind(f"undecodable payload: {exc}") from None
        if not isinstance(args, dict):
            raise errors.UnknownOpKind("payload must encode an object")
        return args

    def _take_snapshot(self) -> Any:
        balances = {a: acct.balance for a, acct in self.accounts.items()}
        module_snap = self.snapshot_provider[0]() if self.snapshot_provider else None
        return balances, self.fees_collected, self.total_funded, module_snap

    def _restore_snapshot(self, snap: Any) -> None:
        balances, fees, funded, module_snap = snap
        for a, bal in balances.items():
            self.accounts[a].balance = bal
        self.fees_collected = fees
        self.total_funded = funded
        if self.snapshot_provider:
            self.snapshot_provider[1](module_snap)

    # --- event log -------------------------------------------------------

    def _append_event(self, event: dict) -> None:
        self.events.append(event)
        if self.event_log_path is not None:
            with self.event_log_path.open("ab") as fh:
                fh.write(canonical_json(event) + b"\n")

    # --- integrity -------------------------------------------------------

    def verify_hash_chain(self) -> bool:
        for prev, block in zip(self.blocks, self.blocks[1:]):
            if block.parent_digest != prev.digest():
                return False
        return True

    def conservation_holds(self) -> bool:
        return sum(a.balance for a in self.accounts.values()) + self.fees_collected == self.total_funded

    def state_dict(self) -> dict:
        return {
            "accounts": {
                a: {"balance": acct.balance, "nonce": acct.nonce}
                for a, acct in sorted(self.accounts.items())
            },
            "head": self.head.digest().hex(),
            "head_number": self.head_number,
            "fees_collected": self.fees_collected,
            "total_funded": self.total_funded,
        }
