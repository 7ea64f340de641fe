"""Command-line entry points: run the HTTP node, replay the scripted
experiment scenarios, or print the fee schedule."""

from __future__ import annotations

import json
import sys
from decimal import Decimal
from pathlib import Path
from typing import Optional

import click

from .config import PlatformConfig
from .fees import FeeSchedule
from .platform import Platform
from .scenarios import SCENARIOS, run_scenario


def _load_config(path: Optional[str]) -> PlatformConfig:
    return PlatformConfig.from_file(path) if path else PlatformConfig()


@click.group()
def main() -> None:
    """Community-based facility management governance node."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), help="JSON config file.")
@click.option("--dev", is_flag=True, help="Enable the dev chain-advance endpoint.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--event-log", type=click.Path(), help="Append accepted events to this JSON-lines file.")
def node(config_path: Optional[str], dev: bool, host: str, port: int, event_log: Optional[str]) -> None:
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    cfg = _load_config(config_path)
    if dev:
        cfg.dev_mode = True
    platform = Platform(cfg)
    if event_log:
        platform.chain.event_log_path = Path(event_log)
    uvicorn.run(create_app(platform), host=host, port=port)


@main.command()
@click.argument("name", type=click.Choice(sorted(SCENARIOS)))
@click.option("--json", "as_json", is_flag=True, help="Emit the full report as JSON.")
@click.option("--quorum-percentage", default=2, show_default=True)
def scenario(name: str, as_json: bool, quorum_percentage: int) -> None:
    """Run a scripted end-to-end scenario and report pass/fail."""
    report = run_scenario(name, quorum_percentage=quorum_percentage)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for step in report.steps:
            mark = "ok " if step.ok else "FAIL"
            line = f"[{mark}] {step.name}"
            if step.detail and not step.ok:
                line += f" -- {step.detail}"
            click.echo(line)
        for dev_note in report.deviations:
            click.echo(f"[note] {dev_note}")
        click.echo(f"scenario {name}: {'PASS' if report.passed else 'FAIL'}")
    sys.exit(0 if report.passed else 1)


@main.group()
def report() -> None:
    """Reports over static data."""


@report.command()
@click.option("--rate", default=None, help="ETH/USD rate (default: configured rate).")
@click.option("--all", "show_all", is_flag=True, help="Include derived (non-measured) rows.")
def fees(rate: Optional[str], show_all: bool) -> None:
    """Print the per-operation gas/fee schedule."""
    cfg = PlatformConfig()
    usd_rate = Decimal(rate) if rate else cfg.eth_usd_rate
    sched = FeeSchedule()
    rows = sched.all_entries() if show_all else sched.measured_entries()
    click.echo(f"{'operation':<36} {'contract':<24} {'gas':>10} {'fee (ETH)':>12} {'fee (USD)':>10}")
    for e in rows:
        click.echo(
            f"{e.op_kind:<36} {e.contract:<24} {e.gas:>10,} {str(e.fee_eth):>12} {str(e.fee_usd(usd_rate)):>10}"
        )


if __name__ == "__main__":
    main()
