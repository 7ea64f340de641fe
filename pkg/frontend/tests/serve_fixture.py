"""Dev-mode node for the frontend integration tests.

Serves a deployed platform with three funded members (10,000 self-delegated
tokens each) at a 2% quorum so the test can drive proposals through every
lifecycle state via /api/chain/advance.
"""

import sys

import uvicorn

from cbfm.config import PlatformConfig
from cbfm.govtoken import WAD
from cbfm.platform import Platform
from cbfm.service import create_app

MEMBERS = ("manager", "resident-1", "resident-2")


def build_node() -> Platform:
    node = Platform(PlatformConfig(quorum_percentage=2, dev_mode=True))
    for name in MEMBERS:
        node.create_account(name)
        node.chain.fund(node.address_of(name), 10**18)
    node.deploy("manager", keep_percentage=3)
    for name in MEMBERS[1:]:
        assert node.send("manager", "token_transfer", to=name, amount=10_000 * WAD).ok
    for name in MEMBERS:
        assert node.send(name, "delegate", delegatee=name).ok
    for name in MEMBERS[1:]:
        assert node.send("manager", "add_member", member=name).ok
    node.create_account("occupant")
    node.chain.fund(node.address_of("occupant"), 10**18)
    return node


if __name__ == "__main__":
    port = int(sys.argv[1]) if len(sys.argv) > 1 else 8123
    app = create_app(build_node(), dev_mode=True)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
