"""Decentralized community-based facility management: a deterministic
governance chain with token-weighted voting, timelock execution,
reputation badges, incentive distribution, and a local content store."""

__version__ = "0.1.0"
