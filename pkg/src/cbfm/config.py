"""Node configuration: genesis accounts, governance parameters, fee
overrides. Loaded from a JSON file (see README for the documented keys);
every field has a default so an empty config is a valid dev node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from .fees import DEFAULT_ETH_USD_RATE, FeeSchedule

SECONDS_PER_DAY = 86_400


@dataclass
class GenesisAccount:
    name: str
    fund_wei: int = 0


@dataclass
class PlatformConfig:
    eth_usd_rate: Decimal = DEFAULT_ETH_USD_RATE
    seconds_per_block: int = 12
    genesis_timestamp: int = 1_700_000_000

    voting_delay: int = 1            # blocks
    voting_period: int = 300         # blocks (~1 hour at 12 s/block)
    quorum_percentage: int = 4
    proposal_threshold: int = 0      # voting-power base units
    grace_period_seconds: int = 14 * SECONDS_PER_DAY

    timelock_min_delay: int = 3600   # seconds

    voting_participation_incentive: int = 10     # whole tokens, derived default
    successful_proposal_incentive: int = 100     # whole tokens, derived default
    ft_per_nft_exchange_rate: int = 1000         # whole tokens per badge, derived default

    token_name: str = "BFHTOKEN"
    token_symbol: str = "BFHT"
    nft_name: str = "CBFMNFT"

    claim_enabled: bool = False
    claim_cap_tokens: int = 2000     # per-account cap when claiming is enabled

    storage_root: str = ""           # empty -> in-memory content store
    max_blob_bytes: int = 25 * 2**20
    auto_tick_seconds: float = 0.0   # 0 disables the background block ticker
    dev_mode: bool = False

    fee_overrides: dict = field(default_factory=dict)
    genesis_accounts: list[GenesisAccount] = field(default_factory=list)

    def fee_schedule(self) -> FeeSchedule:
        sched = FeeSchedule()
        if self.fee_overrides:
            sched = sched.with_overrides(self.fee_overrides)
        return sched

    @classmethod
    def from_dict(cls, raw: dict) -> "PlatformConfig":
        cfg = cls()
        for key, value in raw.items():
            if key == "eth_usd_rate":
                cfg.eth_usd_rate = Decimal(str(value))
            elif key == "genesis_accounts":
                cfg.genesis_accounts = [
                    GenesisAccount(name=a["name"], fund_wei=int(a.get("fund_wei", 0))) for a in value
                ]
            elif hasattr(cfg, key):
                setattr(cfg, key, value)
            else:
                raise KeyError(f"unknown config key {key!r}")
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "PlatformConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))
