import base64
import io

import pytest
from fastapi.testclient import TestClient

from cbfm.scenarios import DOOR_PHOTO
from cbfm.service import create_app
from conftest import ONE_ETH, make_governed_node


@pytest.fixture()
def client():
    node = make_governed_node()
    app = create_app(node, dev_mode=True)
    with TestClient(app) as c:
        c.node = node
        yield c


def submit_request(client, description="broken door hinge", location="building A",
                   media=None, submitter="manager"):
    body = {
        "submitter": submitter,
        "description": description,
        "location": location,
        "media": [
            {"filename": name, "data_b64": base64.b64encode(data).decode()}
            for name, data in (media or [])
        ],
    }
    return client.post("/api/maintenance", json=body)


def test_maintenance_json_flow_with_media(client):
    r = submit_request(client, media=[("door.png", DOOR_PHOTO)])
    assert r.status_code == 200
    payload = r.json()
    assert len(payload["cids"]) == 1
    assert payload["receipt"]["status"] == "success"

    fetched = client.get(f"/api/content/{payload['cids'][0]}")
    assert fetched.status_code == 200
    assert fetched.content == DOOR_PHOTO

    view = client.get(f"/api/proposals/{payload['proposal_id']}").json()
    assert view["state"] == "Pending"
    assert view["details"]["location"] == "building A"
    assert view["details"]["cids"] == payload["cids"]


def test_maintenance_multipart_flow(client):
    r = client.post(
        "/api/maintenance",
        data={"submitter": "manager", "description": "leaking pipe", "location": "basement"},
        files=[("media", ("pipe.png", io.BytesIO(DOOR_PHOTO), "image/png"))],
    )
    assert r.status_code == 200
    cid = r.json()["cids"][0]
    assert client.get(f"/api/content/{cid}").content == DOOR_PHOTO


def test_maintenance_empty_description_400(client):
    r = submit_request(client, description="   ")
    assert r.status_code == 400
    assert r.json()["error"] == "EmptyDescription"


def test_maintenance_too_many_attachments(client):
    r = submit_request(client, media=[(f"{i}.png", DOOR_PHOTO) for i in range(6)])
    assert r.status_code == 400
    assert r.json()["error"] == "TooManyAttachments"


def test_oversized_media_413(client):
    client.node.content.max_bytes = 64
    r = submit_request(client, media=[("big.bin", b"\x00" * 65)])
    assert r.status_code == 413
    assert r.json()["error"] == "TooLarge"


def test_unfunded_submitter_402(client):
    client.node.create_account("broke")
    r = submit_request(client, submitter="broke")
    assert r.status_code == 402
    assert r.json()["error"] == "InsufficientFeeBalance"


def test_vote_state_gate_and_weight(client):
    pid = submit_request(client).json()["proposal_id"]

    early = client.post(f"/api/proposals/{pid}/vote", json={"voter": "resident-1", "support": 1})
    assert early.status_code == 409
    assert early.json()["error"] == "NotActive"

    assert client.post("/api/chain/advance", json={"blocks": 2}).status_code == 200
    ok = client.post(f"/api/proposals/{pid}/vote", json={"voter": "resident-1", "support": 1})
    assert ok.status_code == 200
    assert ok.json()["weight"] == 10_000 * 10**18

    dup = client.post(f"/api/proposals/{pid}/vote", json={"voter": "resident-1", "support": 1})
    assert dup.status_code == 409
    assert dup.json()["error"] == "AlreadyVoted"


def test_full_lifecycle_over_http(client):
    node = client.node
    pid = submit_request(client).json()["proposal_id"]
    client.post("/api/chain/advance", json={"blocks": 2})
    for who in ("manager", "resident-1", "resident-2"):
        assert client.post(f"/api/proposals/{pid}/vote",
                           json={"voter": who, "support": 1}).status_code == 200
    client.post("/api/chain/advance", json={"blocks": node.config.voting_period + 1})

    queued = client.post(f"/api/proposals/{pid}/queue", json={"caller": "manager"})
    assert queued.status_code == 200 and queued.json()["eta"] > 0

    early = client.post(f"/api/proposals/{pid}/execute", json={"caller": "manager"})
    assert early.status_code == 409 and early.json()["error"] == "TimelockNotReady"

    delay_blocks = node.config.timelock_min_delay // node.config.seconds_per_block + 1
    client.post("/api/chain/advance", json={"blocks": delay_blocks})
    done = client.post(f"/api/proposals/{pid}/execute", json={"caller": "manager"})
    assert done.status_code == 200
    assert any(p["kind"] == "proposer" for p in done.json()["payouts"])
    assert client.get(f"/api/proposals/{pid}").json()["state"] == "Executed"


def test_cancel_endpoint(client):
    pid = submit_request(client).json()["proposal_id"]
    r = client.post(f"/api/proposals/{pid}/cancel", json={"caller": "manager"})
    assert r.status_code == 200
    assert client.get(f"/api/proposals/{pid}").json()["state"] == "Canceled"
    again = client.post(f"/api/proposals/{pid}/cancel", json={"caller": "manager"})
    assert again.status_code == 409 and again.json()["error"] == "WrongState"


def test_proposals_listing(client):
    assert client.get("/api/proposals").json()["proposals"] == []
    submit_request(client, description="first")
    submit_request(client, description="second")
    listed = client.get("/api/proposals").json()["proposals"]
    assert [p["details"]["text"] for p in listed] == ["first", "second"]


def test_unknowns_404(client):
    assert client.get("/api/proposals/" + "0" * 64).status_code == 404
    assert client.get("/api/users/nobody-here").status_code == 404
    missing = "cid:sha256:" + "ab" * 32
    assert client.get(f"/api/content/{missing}").status_code == 404


def test_malformed_cid_400(client):
    assert client.get("/api/content/not-a-cid").status_code == 400


def test_user_view(client):
    r = client.get("/api/users/resident-1")
    assert r.status_code == 200
    u = r.json()
    assert u["name"] == "resident-1"
    assert u["tokens"] == 10_000 * 10**18
    assert u["votes"] == 10_000 * 10**18
    assert u["native_wei"] > 0
    assert u["nft_badges"] == []


def test_accounts_listing(client):
    names = {a["name"] for a in client.get("/api/accounts").json()["accounts"]}
    assert {"manager", "resident-1", "resident-2"} <= names


def test_treasury_view(client):
    client.node.chain.fund(client.node.timelock.address, ONE_ETH)
    t = client.get("/api/treasury").json()
    assert t["eth_wei"] == ONE_ETH
    assert t["reserve_tokens"] > 0
    assert t["incentive_params"]["successful_proposal_incentive"] == 100


def test_fee_endpoint_default_and_full(client):
    rows = client.get("/api/fees").json()["rows"]
    assert len(rows) == 12 and all(r["measured"] for r in rows)
    by_kind = {r["op_kind"]: r for r in rows}
    assert by_kind["vote"]["gas"] == 93_186
    assert by_kind["vote"]["fee_usd"] == "0.31"

    full = client.get("/api/fees", params={"all": "true"}).json()["rows"]
    assert len(full) > 12

    scaled = client.get("/api/fees", params={"rate": "1000"}).json()
    assert scaled["eth_usd_rate"] == "1000"
    assert {r["op_kind"]: r for r in scaled["rows"]}["vote"]["fee_usd"] == "0.17"

    assert client.get("/api/fees", params={"rate": "bogus"}).status_code == 400


def test_chain_view_and_dev_gate(client):
    info = client.get("/api/chain").json()
    assert info["dev_mode"] is True and info["deployed"] is True

    prod = create_app(make_governed_node(), dev_mode=False)
    with TestClient(prod) as locked:
        r = locked.post("/api/chain/advance", json={"blocks": 1})
        assert r.status_code == 403
        assert r.json()["error"] == "DevModeOnly"


def test_http_mutations_land_in_event_log(client):
    pid = submit_request(client).json()["proposal_id"]
    client.post("/api/chain/advance", json={"blocks": 2})
    client.post(f"/api/proposals/{pid}/vote", json={"voter": "manager", "support": 1})
    kinds = [e["op_kind"] for e in client.node.chain.events if e.get("kind") == "tx"]
    assert kinds[-2:] == ["proposal_submission", "vote"]
    advances = [e for e in client.node.chain.events if e.get("kind") == "advance"]
    assert advances, "block advancement must be replayable from the log"
