"""Keypair wallets and addresses.

Signing scheme: Ed25519 (deterministic signatures, so replay is
bit-stable). The private key is SHA-256 of the user-supplied seed, which
makes account creation reproducible from the event log. The address is the
last 20 bytes of SHA-256 of the 32-byte raw public key, displayed as
lowercase hex with a 0x prefix.
"""

from __future__ import annotations

from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from .encoding import sha256


def address_of_pubkey(public_key: bytes) -> str:
    return "0x" + sha256(public_key)[-20:].hex()


def module_address(name: str) -> str:
    """Pseudo contract address for an on-chain module (no signing key)."""
    return "0x" + sha256(b"module:" + name.encode("utf-8"))[-20:].hex()


@dataclass(frozen=True)
class Keypair:
    seed: bytes
    public_key: bytes
    address: str

    @classmethod
    def from_seed(cls, seed: bytes) -> "Keypair":
        priv = Ed25519PrivateKey.from_private_bytes(sha256(seed))
        pub = priv.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
        return cls(seed=seed, public_key=pub, address=address_of_pubkey(pub))

    def _private(self) -> Ed25519PrivateKey:
        return Ed25519PrivateKey.from_private_bytes(sha256(self.seed))

    def sign(self, message: bytes) -> bytes:
        return self._private().sign(message)


def verify_signature(public_key: bytes, message: bytes, signature: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
        return True
    except InvalidSignature:
        return False
