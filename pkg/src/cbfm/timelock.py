"""Delay-enforcing executor and treasury.

Approved proposal batches are scheduled here by the governor and become
executable only once the chain clock reaches their eta. The timelock's
chain account is the DAO treasury; send_ether moves native currency out of
it and is callable only from the timelock's own execution context (i.e. an
executed proposal action).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from . import errors
from .encoding import digest_of
from .keys import module_address
from .ledger import Chain

# dispatcher: (target, op, args, value_wei, caller) -> result
ActionDispatcher = Callable[[str, str, dict, int, str], Any]


@dataclass
class ScheduledOperation:
    op_id: str
    batch: list[dict]
    predecessor: Optional[str]
    salt: str
    eta: int
    status: str = "pending"   # pending | done | canceled


@dataclass
class TimelockConfig:
    min_delay: int
    proposers: set[str] = field(default_factory=set)
    executors: set[str] = field(default_factory=set)   # empty set = open execution
    admin: Optional[str] = None


def operation_id(batch: list[dict], predecessor: Optional[str], salt: str) -> str:
    return digest_of({"batch": batch, "predecessor": predecessor, "salt": salt}).hex()


class Timelock:
    def __init__(self, chain: Chain, min_delay: Optional[int] = None):
        self.chain = chain
        self.address = module_address("timelock")
        chain.register_module_account(self.address)
        self.config = TimelockConfig(
            min_delay=chain.config.timelock_min_delay if min_delay is None else min_delay
        )
        self.operations: dict[str, ScheduledOperation] = {}
        self.dispatcher: Optional[ActionDispatcher] = None
        # True while execute_scheduled is dispatching its batch
        self._executing = False

    @property
    def treasury_balance(self) -> int:
        return self.chain.balance(self.address)

    def schedule(
        self, caller: str, batch: list[dict], salt: str, predecessor: Optional[str] = None
    ) -> tuple[str, int]:
        if caller not in self.config.proposers:
            raise errors.NotProposer(caller)
        op_id = operation_id(batch, predecessor, salt)
        existing = self.operations.get(op_id)
        if existing is not None and existing.status == "pending":
            raise errors.AlreadyScheduled(op_id)
        eta = self.chain.now + self.config.min_delay
        self.operations[op_id] = ScheduledOperation(op_id, batch, predecessor, salt, eta)
        return op_id, eta

    def is_ready(self, op_id: str) -> bool:
        op = self.operations.get(op_id)
        return op is not None and op.status == "pending" and self.chain.now >= op.eta

    def execute_scheduled(self, caller: str, op_id: str) -> list[Any]:
        if self.config.executors and caller not in self.config.executors:
            raise errors.NotExecutor(caller)
        op = self.operations.get(op_id)
        if op is None:
            raise errors.UnknownOperation(op_id)
        if op.status != "pending":
            raise errors.NotReady(f"operation {op_id} is {op.status}")
        if self.chain.now < op.eta:
            raise errors.NotReady(f"now {self.chain.now} < eta {op.eta}")
        if op.predecessor is not None:
            pred = self.operations.get(op.predecessor)
            if pred is None or pred.status != "done":
                raise errors.NotReady(f"predecessor {op.predecessor} not done")
        assert self.dispatcher is not None, "timelock not wired to a dispatcher"
        results = []
        self._executing = True
        try:
            for action in op.batch:
                results.append(
                    self.dispatcher(
                        action["target"],
                        action["op"],
                        action.get("args", {}),
                        int(action.get("value", 0)),
                        self.address,
                    )
                )
        finally:
            self._executing = False
        op.status = "done"
        return results

    def cancel_operation(self, op_id: str) -> None:
        op = self.operations.get(op_id)
        if op is None:
            raise errors.UnknownOperation(op_id)
        if op.status == "pending":
            op.status = "canceled"

    def send_ether(self, caller: str, receiver: str, amount: int) -> None:
        """Treasury payout; only reachable through an executed proposal."""
        if caller != self.address or not self._executing:
            raise errors.UnauthorizedCaller("send_ether only via governance execution")
        if amount < 0:
            raise errors.InvalidAmount("negative amount")
        if self.treasury_balance < amount:
            raise errors.InsufficientTreasuryBalance("Insufficient balance in the contract")
        if amount == 0:
            return
        self.chain.native_transfer(self.address, receiver, amount)

    def state_dict(self) -> dict:
        return {
            "min_delay": self.config.min_delay,
            "proposers": sorted(self.config.proposers),
            "executors": sorted(self.config.executors),
            "admin": self.config.admin,
            "operations": {
                op_id: {"eta": op.eta, "status": op.status, "batch": op.batch}
                for op_id, op in sorted(self.operations.items())
            },
        }
