"""Error hierarchy shared by every on-chain module.

A ChainError raised inside a transaction handler reverts that transaction:
the fee is still charged and the receipt carries the error name as the
revert reason. Anything else propagates as a bug.
"""


class ChainError(Exception):
    """Base class; `name` is the stable error code used in receipts and API bodies."""

    @property
    def name(self) -> str:
        return type(self).__name__


# ledger
class EmptySeed(ChainError): ...
class DuplicateSeed(ChainError): ...
class UnknownAddress(ChainError): ...
class BadSignature(ChainError): ...
class BadNonce(ChainError): ...
class InsufficientFeeBalance(ChainError): ...
class InsufficientNativeBalance(ChainError): ...
class UnknownOpKind(ChainError): ...
class InvalidAmount(ChainError): ...
class AlreadyDeployed(ChainError): ...
class NotDeployed(ChainError): ...


# governance token
class AlreadyInitialized(ChainError): ...
class InvalidKeepPercentage(ChainError): ...
class InsufficientTokenBalance(ChainError): ...
class InsufficientReserve(ChainError): ...
class UnauthorizedCaller(ChainError): ...
class FutureBlockQuery(ChainError): ...
class ClaimDisabled(ChainError): ...
class ClaimCapExceeded(ChainError): ...


# governor
class UnknownProposal(ChainError): ...
class DuplicateProposal(ChainError): ...
class BelowThreshold(ChainError): ...
class NotActive(ChainError): ...
class AlreadyVoted(ChainError): ...
class InvalidSupport(ChainError): ...
class WrongState(ChainError): ...
class TimelockNotReady(ChainError): ...
class Expired(ChainError): ...
class NotMember(ChainError): ...
class AlreadyMember(ChainError): ...
class UnknownMember(ChainError): ...


# timelock
class NotProposer(ChainError): ...
class NotExecutor(ChainError): ...
class AlreadyScheduled(ChainError): ...
class NotReady(ChainError): ...
class UnknownOperation(ChainError): ...
class InsufficientTreasuryBalance(ChainError): ...


# reputation NFTs
class TokenIdExists(ChainError): ...
class UnknownToken(ChainError): ...
class NotOwner(ChainError): ...


# incentives
class NotAdmin(ChainError): ...
class InvalidAdmin(ChainError): ...
class AlreadyDistributed(ChainError): ...
class WrongAmount(ChainError): ...


# content store
class EmptyContent(ChainError): ...
class TooLarge(ChainError): ...
class NotFound(ChainError): ...
class MalformedCid(ChainError): ...
class IntegrityFailure(ChainError): ...
