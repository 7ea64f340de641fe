"""Canonical byte encodings and digests.

Every digest in the system (block digests, transaction digests, proposal
ids, state digests) is SHA-256 over a canonical encoding, so replaying the
same event log always reproduces the same ids. Canonical JSON means sorted
keys, no whitespace, UTF-8. The transaction signing preimage is a
little-endian length-prefixed concatenation of (nonce, op_kind, payload).
"""

from __future__ import annotations

import hashlib
import json
import struct
from typing import Any


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def canonical_json(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def digest_of(obj: Any) -> bytes:
    """SHA-256 of the canonical JSON encoding."""
    return sha256(canonical_json(obj))


def sign_preimage(nonce: int, op_kind: str, payload: bytes) -> bytes:
    """u64-LE nonce, then u32-LE length-prefixed op_kind and payload."""
    op = op_kind.encode("utf-8")
    return b"".join(
        [
            struct.pack("<Q", nonce),
            struct.pack("<I", len(op)),
            op,
            struct.pack("<I", len(payload)),
            payload,
        ]
    )
