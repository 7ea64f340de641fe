"""Local content-addressed blob store.

Stands in for a distributed file network: blobs are addressed by
"cid:sha256:<64 hex>" where the hex is the SHA-256 of the bytes. Only cids
ever reach the chain; the bytes live here, on disk under a two-level hex
fan-out (or in memory when no root is given). Reads re-hash the stored
bytes so out-of-band corruption is detected.
"""

from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path
from typing import Optional

from . import errors
from .encoding import sha256

CID_PREFIX = "cid:sha256:"
_CID_RE = re.compile(r"^cid:sha256:([0-9a-f]{64})$")

DEFAULT_MAX_BYTES = 25 * 2**20


def cid_of(data: bytes) -> str:
    return CID_PREFIX + sha256(data).hex()


def parse_cid(cid: str) -> str:
    """Return the hex digest, or raise MalformedCid."""
    m = _CID_RE.match(cid)
    if not m:
        raise errors.MalformedCid(cid)
    return m.group(1)


class ContentStore:
    def __init__(self, root: Optional[str | Path] = None, max_bytes: int = DEFAULT_MAX_BYTES):
        self.root = Path(root) if root else None
        self.max_bytes = max_bytes
        self._mem: dict[str, bytes] = {}
        if self.root:
            self.root.mkdir(parents=True, exist_ok=True)

    def _path_for(self, hex_digest: str) -> Path:
        assert self.root is not None
        return self.root / hex_digest[:2] / hex_digest[2:4] / hex_digest

    def put(self, data: bytes) -> str:
        if len(data) == 0:
            raise errors.EmptyContent("cannot store an empty blob")
        if len(data) > self.max_bytes:
            raise errors.TooLarge(f"{len(data)} bytes > cap {self.max_bytes}")
        cid = cid_of(data)
        hex_digest = parse_cid(cid)
        if self.root is None:
            self._mem[hex_digest] = data
            return cid
        path = self._path_for(hex_digest)
        if path.exists():
            return cid
        path.parent.mkdir(parents=True, exist_ok=True)
        # write-then-rename so concurrent readers never see partial blobs
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return cid

    def get(self, cid: str) -> bytes:
        hex_digest = parse_cid(cid)
        if self.root is None:
            if hex_digest not in self._mem:
                raise errors.NotFound(cid)
            data = self._mem[hex_digest]
        else:
            path = self._path_for(hex_digest)
            if not path.exists():
                raise errors.NotFound(cid)
            data = path.read_bytes()
        if sha256(data).hex() != hex_digest:
            raise errors.IntegrityFailure(f"stored bytes no longer match {cid}")
        return data

    def has(self, cid: str) -> bool:
        hex_digest = parse_cid(cid)
        if self.root is None:
            return hex_digest in self._mem
        return self._path_for(hex_digest).exists()
