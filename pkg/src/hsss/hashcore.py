"""Hash primitive, canonical share ordering, concatenation and key derivation.

Shares and digests are plain ``bytes``. A deployment uses SHA-512 throughout,
so digests, keys and non-empty shares are all 64 bytes long.
"""

from __future__ import annotations

import hashlib
from typing import Iterable

HASH_ID = "sha512"
DIGEST_SIZE = 64
SHARE_SIZE = DIGEST_SIZE

Digest = bytes
Share = bytes
SecretKey = bytes

EMPTY_SHARE_TOKEN = "-"


def hash(data: bytes) -> Digest:  # noqa: A001 - mirrors h() of the scheme
    return hashlib.sha512(data).digest()


def check_hash_id(name: str) -> None:
    if name != HASH_ID:
        from hsss.errors import ConfigurationError

        raise ConfigurationError(f"unsupported hash algorithm {name!r}; only {HASH_ID!r} is accepted")


def order_shares(shares: Iterable[Share]) -> list[Share]:
    """Distinct non-empty shares in ascending unsigned byte order.

    Empty shares are dropped: a neutral dealer share must not change the
    concatenation.
    """
    return sorted({bytes(s) for s in shares if s})


def concat_shares(ordered: Iterable[Share]) -> bytes:
    return b"".join(ordered)


def xi(basis: Iterable[Share]) -> bytes:
    return concat_shares(order_shares(basis))


def derive_key(q: Digest, basis: Iterable[Share]) -> SecretKey:
    """Key for the secret whose digest is ``q``: ``hash(q || xi(basis))``."""
    if len(q) != DIGEST_SIZE:
        raise ValueError(f"secret digest must be {DIGEST_SIZE} bytes, got {len(q)}")
    return hash(bytes(q) + xi(basis))


def share_to_hex(share: Share) -> str:
    return share.hex() if share else EMPTY_SHARE_TOKEN


def share_from_hex(text: str) -> Share:
    text = text.strip()
    if text == EMPTY_SHARE_TOKEN:
        return b""
    if text != text.lower():
        raise ValueError("share hex must be lowercase")
    share = bytes.fromhex(text)
    if len(share) != SHARE_SIZE:
        raise ValueError(f"share must be {SHARE_SIZE} bytes, got {len(share)}")
    return share


def digest_from_hex(text: str) -> Digest:
    if text != text.lower():
        raise ValueError("digest hex must be lowercase")
    d = bytes.fromhex(text)
    if len(d) != DIGEST_SIZE:
        raise ValueError(f"digest must be {DIGEST_SIZE} bytes, got {len(d)}")
    return d
