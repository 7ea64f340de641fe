import pytest

from cbfm.config import PlatformConfig
from cbfm.govtoken import WAD
from cbfm.platform import Platform

ONE_ETH = 10**18
MEMBERS = ("manager", "resident-1", "resident-2")


def make_node(quorum_percentage: int = 2, **config_overrides) -> Platform:
    cfg = PlatformConfig(quorum_percentage=quorum_percentage, **config_overrides)
    return Platform(cfg)


def make_governed_node(quorum_percentage: int = 2, **config_overrides) -> Platform:
    """Deployed node with three members: 1 ETH and 10,000 self-delegated tokens each."""
    node = make_node(quorum_percentage, **config_overrides)
    for name in MEMBERS:
        node.create_account(name)
        node.chain.fund(node.address_of(name), ONE_ETH)
    node.deploy("manager", keep_percentage=3)
    for name in MEMBERS[1:]:
        assert node.send("manager", "token_transfer", to=name, amount=10_000 * WAD).ok
    for name in MEMBERS:
        assert node.send(name, "delegate", delegatee=name).ok
    for name in MEMBERS[1:]:
        assert node.send("manager", "add_member", member=name).ok
    return node


@pytest.fixture
def node() -> Platform:
    return make_governed_node()


@pytest.fixture
def bare_node() -> Platform:
    return make_node()
