from decimal import Decimal

import pytest

from cbfm import errors
from cbfm.ledger import Chain, make_tx
from cbfm.platform import Platform
from conftest import ONE_ETH, make_governed_node, make_node


def test_create_account_deterministic():
    a1, _ = Chain().create_account(b"occupant-1")
    a2, _ = Chain().create_account(b"occupant-1")
    assert a1 == a2
    assert a1.startswith("0x") and len(a1) == 42 and a1 == a1.lower()


def test_distinct_seeds_distinct_addresses():
    chain = Chain()
    addrs = {chain.create_account(seed)[0] for seed in (b"a", b"b", b"c")}
    assert len(addrs) == 3


def test_empty_seed_rejected():
    with pytest.raises(errors.EmptySeed):
        Chain().create_account(b"")


def test_duplicate_seed_rejected():
    chain = Chain()
    chain.create_account(b"occupant-1")
    with pytest.raises(errors.DuplicateSeed):
        chain.create_account(b"occupant-1")


def test_fund_one_token():
    chain = Chain()
    addr, _ = chain.create_account(b"a")
    receipt = chain.fund(addr, ONE_ETH)
    assert receipt.ok and receipt.fee_eth == 0
    assert chain.balance(addr) == ONE_ETH


def test_fund_zero_rejected():
    chain = Chain()
    addr, _ = chain.create_account(b"a")
    with pytest.raises(errors.InvalidAmount):
        chain.fund(addr, 0)


def test_fund_unknown_address():
    with pytest.raises(errors.UnknownAddress):
        Chain().fund("0x" + "00" * 20, 1)


def test_fund_additivity():
    chain = Chain()
    addr, _ = chain.create_account(b"a")
    chain.fund(addr, 5 * 10**17)
    chain.fund(addr, 5 * 10**17)
    assert chain.balance(addr) == ONE_ETH


def test_advance_300_blocks_is_one_hour():
    chain = Chain()
    t0 = chain.now
    assert chain.advance_blocks(300, 12) == 300
    assert chain.now - t0 == 3600


def test_advance_composition():
    a, b = Chain(), Chain()
    a.advance_blocks(5, 12)
    a.advance_blocks(5, 12)
    b.advance_blocks(10, 12)
    assert (a.head_number, a.now) == (b.head_number, b.now)
    assert a.head.digest() == b.head.digest()


def test_advance_requires_positive():
    with pytest.raises(errors.InvalidAmount):
        Chain().advance_blocks(0)


def test_vote_tx_uses_measured_fee():
    node = make_governed_node()
    receipt = node.submit_maintenance("manager", "leaky faucet", "kitchen", [])["receipt"]
    node.advance(2)
    vote = node.send("resident-1", "vote", proposal_id=receipt.result["proposal_id"], support=1)
    assert vote.ok
    assert vote.gas_used == 93_186
    assert vote.fee_eth == Decimal("0.000169")


def test_bad_nonce_rejected(node):
    kp = node.wallet("manager")
    tx = make_tx(kp, nonce=node.chain.account(kp.address).nonce + 2, op_kind="delegate",
                 args={"delegatee": kp.address})
    with pytest.raises(errors.BadNonce):
        node.chain.submit_tx(tx)


def test_bad_signature_rejected(node):
    kp = node.wallet("manager")
    good = make_tx(kp, node.chain.account(kp.address).nonce, "delegate", {"delegatee": kp.address})
    forged = type(good)(good.sender, good.nonce, good.op_kind, good.payload, b"\x00" * 64)
    with pytest.raises(errors.BadSignature):
        node.chain.submit_tx(forged)


def test_unknown_op_kind_rejected(node):
    kp = node.wallet("manager")
    tx = make_tx(kp, node.chain.account(kp.address).nonce, "warp_drive", {})
    with pytest.raises(errors.UnknownOpKind):
        node.chain.submit_tx(tx)


def test_insufficient_fee_balance():
    node = make_node()
    node.create_account("pauper")
    node.create_account("rich")
    node.chain.fund(node.address_of("rich"), ONE_ETH)
    node.deploy("rich")
    with pytest.raises(errors.InsufficientFeeBalance):
        node.send("pauper", "delegate", delegatee="pauper")


def test_reverted_tx_still_charges_fee():
    """Brute-force balance accounting: replay the fee amounts by hand."""
    node = make_governed_node()
    pid = node.submit_maintenance("manager", "broken window", "floor 2", [])["receipt"].result["proposal_id"]
    node.advance(2)
    addr = node.address_of("resident-1")
    fee = node.chain.fee_schedule.entry("vote").fee_wei

    before = node.chain.balance(addr)
    nonce_before = node.chain.account(addr).nonce
    first = node.send("resident-1", "vote", proposal_id=pid, support=1)
    second = node.send("resident-1", "vote", proposal_id=pid, support=1)
    assert first.ok
    assert second.status == "reverted" and "AlreadyVoted" in second.revert_reason
    assert node.chain.balance(addr) == before - 2 * fee
    assert node.chain.account(addr).nonce == nonce_before + 2
    # the reverted vote did not change the tally
    assert node.governor.proposal(pid).tallies["for"] == 10_000 * 10**18


def test_conservation_after_mixed_operations():
    node = make_governed_node()
    node.send("manager", "ether_transfer", to="resident-1", amount=10**17)
    node.submit_maintenance("manager", "peeling paint", "hallway", [])
    assert node.chain.conservation_holds()


def test_hash_chain_tamper_evidence():
    chain = Chain()
    addr, kp = chain.create_account(b"a")
    chain.advance_blocks(3)
    original_parent = chain.blocks[2].parent_digest
    assert chain.verify_hash_chain()
    chain.blocks[1].tx_digests.append(b"\xde\xad" * 16)
    assert chain.blocks[1].digest() != original_parent
    assert not chain.verify_hash_chain()


def test_replay_reproduces_state_digest():
    node = make_governed_node()
    node.submit_maintenance("manager", "dim corridor lighting", "floor 3", [])
    node.advance(5)
    replayed = Platform.replay(node.chain.events, node.config)
    assert replayed.state_digest() == node.state_digest()


def test_ether_transfer_moves_native_balance(node):
    a, b = node.address_of("manager"), node.address_of("resident-1")
    fee = node.chain.fee_schedule.entry("ether_transfer").fee_wei
    before_a, before_b = node.chain.balance(a), node.chain.balance(b)
    receipt = node.send("manager", "ether_transfer", to="resident-1", amount=10**17)
    assert receipt.ok
    assert node.chain.balance(a) == before_a - 10**17 - fee
    assert node.chain.balance(b) == before_b + 10**17
