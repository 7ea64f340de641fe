import pytest

from cbfm import errors
from cbfm.govtoken import TOTAL_SUPPLY, WAD, GovernanceToken
from cbfm.ledger import Chain
from conftest import ONE_ETH, make_governed_node, make_node


def fresh_token(keep_percentage=100):
    chain = Chain()
    deployer, _ = chain.create_account(b"deployer")
    token = GovernanceToken(chain)
    token.init_token(deployer, keep_percentage)
    return chain, token, deployer


def test_init_keep_all():
    _, token, deployer = fresh_token(100)
    assert token.balance_of(deployer) == 1_000_000 * WAD
    assert token.state.reserve == 0


def test_init_keep_none():
    _, token, deployer = fresh_token(0)
    assert token.balance_of(deployer) == 0
    assert token.state.reserve == 1_000_000 * WAD


def test_init_keep_five_percent():
    # integer arithmetic oracle: 1,000,000 * 10**18 * 5 // 100
    _, token, deployer = fresh_token(5)
    assert token.balance_of(deployer) == 1_000_000 * WAD * 5 // 100 == 50_000 * WAD
    assert token.state.reserve == 950_000 * WAD


def test_init_twice_rejected():
    _, token, deployer = fresh_token()
    with pytest.raises(errors.AlreadyInitialized):
        token.init_token(deployer, 50)


def test_init_keep_over_100_rejected():
    chain = Chain()
    deployer, _ = chain.create_account(b"d")
    with pytest.raises(errors.InvalidKeepPercentage):
        GovernanceToken(chain).init_token(deployer, 101)


def test_allocation_gives_each_member_10k():
    node = make_governed_node()
    for name in ("manager", "resident-1", "resident-2"):
        assert node.token.balance_of(node.address_of(name)) == 10_000 * WAD


def test_transfer_zero_is_noop_without_checkpoint():
    chain, token, deployer = fresh_token()
    other, _ = chain.create_account(b"other")
    token.delegate(deployer, deployer)
    checkpoints_before = len(token.state.checkpoints[deployer])
    token.transfer(deployer, other, 0)
    assert len(token.state.checkpoints[deployer]) == checkpoints_before
    assert token.balance_of(other) == 0


def test_transfer_exceeding_balance_leaves_state_unchanged():
    chain, token, deployer = fresh_token(0)
    other, _ = chain.create_account(b"other")
    with pytest.raises(errors.InsufficientTokenBalance):
        token.transfer(deployer, other, 1)
    assert token.balance_of(other) == 0
    assert token.supply_conserved()


def test_self_delegation_activates_votes():
    _, token, deployer = fresh_token(1)   # 10,000 tokens
    assert token.get_votes(deployer) == 0
    token.delegate(deployer, deployer)
    assert token.get_votes(deployer) == 10_000 * WAD


def test_delegation_moves_power_and_redelegation_returns_it():
    chain, token, a = fresh_token(2)      # a holds 20,000
    b, _ = chain.create_account(b"b")
    c, _ = chain.create_account(b"c")
    token.transfer(a, b, 10_000 * WAD)
    token.delegate(b, b)
    assert token.get_votes(b) == 10_000 * WAD
    token.delegate(a, b)
    assert token.get_votes(b) == 20_000 * WAD
    assert token.get_votes(a) == 0
    token.delegate(a, c)
    assert token.get_votes(b) == 10_000 * WAD
    assert token.get_votes(c) == 10_000 * WAD


def test_never_delegated_holder_has_zero_votes():
    _, token, deployer = fresh_token(100)
    assert token.get_votes(deployer) == 0


def test_past_votes_before_first_checkpoint_is_zero():
    chain, token, deployer = fresh_token()
    chain.advance_blocks(5)
    token.delegate(deployer, deployer)
    chain.advance_blocks(1)
    assert token.get_past_votes(deployer, 2) == 0
    assert token.get_past_votes(deployer, 5) == TOTAL_SUPPLY


def test_future_block_query_rejected():
    chain, token, deployer = fresh_token()
    with pytest.raises(errors.FutureBlockQuery):
        token.get_past_votes(deployer, chain.head_number)
    with pytest.raises(errors.FutureBlockQuery):
        token.get_past_total_supply(chain.head_number + 10)


def test_past_total_supply():
    chain, token, _ = fresh_token()
    chain.advance_blocks(3)
    assert token.get_past_total_supply(chain.head_number - 1) == TOTAL_SUPPLY


def test_holders_count_after_init_is_one():
    _, token, _ = fresh_token()
    assert token.holders_count() == 1


def test_holders_count_with_distinct_deployer():
    chain, token, deployer = fresh_token()
    members = [chain.create_account(f"m{i}".encode())[0] for i in range(3)]
    for m in members:
        token.transfer(deployer, m, 10_000 * WAD)
    assert token.holders_count() == 4


def test_repeated_transfers_do_not_grow_holders():
    chain, token, deployer = fresh_token()
    other, _ = chain.create_account(b"other")
    for _ in range(3):
        token.transfer(deployer, other, WAD)
    assert token.holders_count() == 2


def test_reserve_payout_requires_authorization():
    chain, token, deployer = fresh_token(0)
    with pytest.raises(errors.UnauthorizedCaller):
        token.send_tokens(deployer, deployer, 10)


def test_reserve_payout_and_exhaustion():
    chain, token, deployer = fresh_token(0)
    token.authorized_spenders = {deployer}
    token.send_tokens(deployer, deployer, 500)
    assert token.balance_of(deployer) == 500 * WAD
    token.send_tokens(deployer, deployer, 0)   # no-op success
    with pytest.raises(errors.InsufficientReserve):
        token.send_tokens(deployer, deployer, 10_000_000)
    assert token.supply_conserved()


def test_claim_disabled_by_default():
    node = make_governed_node()
    receipt = node.send("resident-1", "claim_tokens", amount=10)
    assert receipt.status == "reverted" and "ClaimDisabled" in receipt.revert_reason


def test_claim_respects_per_user_cap():
    node = make_governed_node(claim_enabled=True)
    assert node.send("resident-1", "claim_tokens", amount=1500).ok
    over = node.send("resident-1", "claim_tokens", amount=501)
    assert over.status == "reverted" and "ClaimCapExceeded" in over.revert_reason
    assert node.send("resident-1", "claim_tokens", amount=500).ok
    assert node.token.balance_of(node.address_of("resident-1")) == (10_000 + 2000) * WAD


def test_supply_conservation_through_operations():
    node = make_governed_node()
    assert node.token.supply_conserved()
    node.send("manager", "token_transfer", to="resident-1", amount=123)
    node.send("resident-2", "delegate", delegatee="manager")
    assert node.token.supply_conserved()


def test_checkpoint_blocks_strictly_increase():
    node = make_governed_node()
    for i in range(5):
        node.send("manager", "token_transfer", to="resident-1", amount=WAD)
        node.advance(1)
    for cps in node.token.state.checkpoints.values():
        blocks = [c.block_number for c in cps]
        assert blocks == sorted(set(blocks))
