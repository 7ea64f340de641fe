"""HTTP facade over a running platform node.

Thin mappings from the JSON API onto module operations: mutating calls are
signed server-side with the dev-custody wallet named in the request and
funneled through the chain's single-writer loop; reads are pure snapshot
views. Errors use one envelope, {"error": <module error name>, "detail":
...}, with the HTTP status derived from the error class.
"""

from __future__ import annotations

import base64
import binascii
import json
import threading
from contextlib import asynccontextmanager
from decimal import Decimal, InvalidOperation
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors
from .content_store import parse_cid
from .platform import Platform

_STATUS_BY_ERROR: dict[str, int] = {
    # conflicts with current state
    "NotActive": 409, "AlreadyVoted": 409, "WrongState": 409, "TimelockNotReady": 409,
    "Expired": 409, "AlreadyScheduled": 409, "NotReady": 409, "AlreadyDistributed": 409,
    "DuplicateProposal": 409, "AlreadyMember": 409, "AlreadyInitialized": 409,
    "AlreadyDeployed": 409, "DuplicateSeed": 409, "BadNonce": 409, "TokenIdExists": 409,
    # payment required
    "InsufficientFeeBalance": 402,
    # too large
    "TooLarge": 413,
    # not found
    "UnknownAddress": 404, "UnknownProposal": 404, "UnknownToken": 404,
    "UnknownOperation": 404, "UnknownMember": 404, "NotFound": 404,
    # forbidden
    "NotAdmin": 403, "NotMember": 403, "NotOwner": 403, "UnauthorizedCaller": 403,
    "NotProposer": 403, "NotExecutor": 403, "BadSignature": 403, "DevModeOnly": 403,
}


def _error_response(name: str, detail: str) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS_BY_ERROR.get(name, 400),
        content={"error": name, "detail": detail},
    )


class VoteBody(BaseModel):
    voter: str
    support: int


class CallerBody(BaseModel):
    caller: str


class AdvanceBody(BaseModel):
    blocks: int = 1


class NodeService:
    """Owns the platform and the optional block auto-ticker."""

    def __init__(self, platform: Platform, dev_mode: Optional[bool] = None):
        self.platform = platform
        self.dev_mode = platform.config.dev_mode if dev_mode is None else dev_mode
        self._ticker: Optional[threading.Thread] = None
        self._stop = threading.Event()

    def start_ticker(self) -> None:
        interval = self.platform.config.auto_tick_seconds
        if interval <= 0 or self._ticker is not None:
            return

        def loop() -> None:
            while not self._stop.wait(interval):
                self.platform.advance(1)

        self._ticker = threading.Thread(target=loop, daemon=True, name="block-ticker")
        self._ticker.start()

    def stop_ticker(self) -> None:
        self._stop.set()


def _receipt_or_error(receipt) -> JSONResponse | dict:
    if receipt.status == "reverted":
        name, _, detail = (receipt.revert_reason or "ChainError").partition(": ")
        return _error_response(name, detail)
    return {"receipt": receipt.to_dict()}


def create_app(platform: Platform, dev_mode: Optional[bool] = None) -> FastAPI:
    svc = NodeService(platform, dev_mode)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        svc.start_ticker()
        yield
        svc.stop_ticker()

    app = FastAPI(title="CbFM governance node", lifespan=lifespan)
    app.state.service = svc

    @app.exception_handler(errors.ChainError)
    async def chain_error_handler(request: Request, exc: errors.ChainError):
        return _error_response(exc.name, str(exc))

    node = platform

    # --- maintenance intake ----------------------------------------------

    @app.post("/api/maintenance")
    async def submit_maintenance(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/"):
            form = await request.form()
            submitter = str(form.get("submitter", ""))
            description = str(form.get("description", ""))
            location = str(form.get("location", ""))
            media = []
            for upload in form.getlist("media"):
                media.append((upload.filename or "blob", await upload.read()))
        else:
            body = await request.json()
            submitter = body.get("submitter", "")
            description = body.get("description", "")
            location = body.get("location", "")
            media = []
            for item in body.get("media", []):
                try:
                    data = base64.b64decode(item["data_b64"], validate=True)
                except (KeyError, binascii.Error) as exc:
                    return _error_response("BadMedia", f"undecodable media entry: {exc}")
                media.append((item.get("filename", "blob"), data))
        if not description.strip():
            return _error_response("EmptyDescription", "description must be non-empty")
        if len(media) > 5:
            return _error_response("TooManyAttachments", "at most 5 media files per request")
        result = node.submit_maintenance(submitter, description, location, media)
        return {
            "cids": result["cids"],
            "proposal_id": result["proposal_id"],
            "receipt": result["receipt"].to_dict(),
        }

    @app.get("/api/content/{cid}")
    def get_content(cid: str):
        parse_cid(cid)
        return Response(content=node.content.get(cid), media_type="application/octet-stream")

    # --- governance -------------------------------------------------------

    @app.get("/api/proposals")
    def list_proposals():
        node._require_deployed()
        return {"proposals": [node.governor.proposal_view(pid) for pid in node.governor.proposal_order]}

    @app.get("/api/proposals/{pid}")
    def get_proposal(pid: str):
        node._require_deployed()
        return node.governor.proposal_view(pid)

    @app.post("/api/proposals/{pid}/vote")
    def vote(pid: str, body: VoteBody):
        receipt = node.send(body.voter, "vote", proposal_id=pid, support=body.support)
        out = _receipt_or_error(receipt)
        if isinstance(out, JSONResponse):
            return out
        out["weight"] = receipt.result["weight"]
        return out

    @app.post("/api/proposals/{pid}/queue")
    def queue(pid: str, body: CallerBody):
        receipt = node.send(body.caller, "queue_proposal", proposal_id=pid)
        out = _receipt_or_error(receipt)
        if isinstance(out, JSONResponse):
            return out
        out["eta"] = receipt.result["eta"]
        return out

    @app.post("/api/proposals/{pid}/execute")
    def execute(pid: str, body: CallerBody):
        receipt = node.send(body.caller, "execute_proposal", proposal_id=pid)
        out = _receipt_or_error(receipt)
        if isinstance(out, JSONResponse):
            return out
        out["payouts"] = receipt.result["payouts"]
        out["action_results"] = receipt.result["action_results"]
        return out

    @app.post("/api/proposals/{pid}/cancel")
    def cancel(pid: str, body: CallerBody):
        receipt = node.send(body.caller, "cancel_proposal", proposal_id=pid)
        return _receipt_or_error(receipt)

    # --- views ------------------------------------------------------------

    @app.get("/api/treasury")
    def treasury():
        node._require_deployed()
        return {
            "eth_wei": node.timelock.treasury_balance,
            "reserve_tokens": node.token.state.reserve,
            "payouts": [p.to_dict() for p in node.incentives.payouts],
            "incentive_params": {
                "voting_participation_incentive": node.incentives.get_voting_participation_incentive(),
                "successful_proposal_incentive": node.incentives.get_successful_proposal_incentive(),
                "ft_per_nft_exchange_rate": node.incentives.params.ft_per_nft_exchange_rate,
            },
        }

    @app.get("/api/users/{who}")
    def user(who: str):
        address = node.address_of(who)
        acct = node.chain.account(address)
        badges = []
        tokens = 0
        votes = 0
        if node.deployed:
            tokens = node.token.balance_of(address)
            votes = node.token.get_votes(address)
            for t in node.nft.tokens_of(address):
                meta = None
                try:
                    meta = json.loads(node.content.get(t.uri))
                except errors.ChainError:
                    pass
                badges.append({"token_id": t.token_id, "uri": t.uri, "metadata": meta})
        return {
            "name": node.wallet_names.get(address),
            "address": address,
            "native_wei": acct.balance,
            "nonce": acct.nonce,
            "tokens": tokens,
            "votes": votes,
            "nft_badges": sorted(badges, key=lambda b: b["token_id"]),
        }

    @app.get("/api/accounts")
    def accounts():
        return {
            "accounts": [
                {"name": name, "address": kp.address} for name, kp in node.wallets.items()
            ]
        }

    @app.get("/api/fees")
    def fees(rate: Optional[str] = None, all: bool = False):
        try:
            usd_rate = node.chain.eth_usd_rate if rate is None else Decimal(rate)
        except InvalidOperation:
            return _error_response("BadRate", f"not a decimal rate: {rate!r}")
        entries = node.chain.fee_schedule.all_entries() if all else node.chain.fee_schedule.measured_entries()
        return {
            "eth_usd_rate": str(usd_rate),
            "rows": [
                {
                    "op_kind": e.op_kind,
                    "contract": e.contract,
                    "gas": e.gas,
                    "fee_eth": str(e.fee_eth),
                    "fee_usd": str(e.fee_usd(usd_rate)),
                    "measured": e.measured,
                }
                for e in entries
            ],
        }

    @app.get("/api/chain")
    def chain_info():
        return {
            "head_number": node.chain.head_number,
            "timestamp": node.chain.now,
            "dev_mode": svc.dev_mode,
            "deployed": node.deployed,
        }

    @app.post("/api/chain/advance")
    def advance(body: AdvanceBody):
        if not svc.dev_mode:
            return _error_response("DevModeOnly", "chain advancement requires --dev")
        head = node.advance(body.blocks)
        return {"head_number": head, "timestamp": node.chain.now}

    return app
