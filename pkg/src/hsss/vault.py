"""Secrets sealed under their derived keys with AES-256-GCM.

The cipher key is the first 32 bytes of the 64-byte derived key. Associated
data is empty; an entry's index is bound by its position in the vault file.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from hsss.entropy import as_entropy
from hsss.errors import FormatError, UnknownSecretIndex, VaultAuthenticationError
from hsss.hashcore import DIGEST_SIZE

CIPHER_ID = "aes256gcm"
NONCE_SIZE = 12
TAG_SIZE = 16
VAULT_MAGIC = "HSSS-VAULT v1"


@dataclass(frozen=True)
class VaultEntry:
    index: int
    nonce: bytes
    ciphertext: bytes
    tag: bytes
    cipher: str = CIPHER_ID


@dataclass
class VaultFile:
    epoch: int
    entries: list[VaultEntry] = field(default_factory=list)

    def entry(self, j: int) -> VaultEntry:
        for e in self.entries:
            if e.index == j:
                return e
        raise UnknownSecretIndex(f"vault has no entry {j}")

    def to_text(self) -> str:
        lines = [VAULT_MAGIC, f"cipher {CIPHER_ID}", f"epoch {self.epoch}"]
        for e in sorted(self.entries, key=lambda e: e.index):
            lines.append(f"entry {e.index} {e.nonce.hex()} {e.ciphertext.hex()} {e.tag.hex()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "VaultFile":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if len(lines) < 3 or lines[0] != VAULT_MAGIC:
            raise FormatError("not an HSSS-VAULT v1 file")
        if lines[1] != f"cipher {CIPHER_ID}":
            raise FormatError(f"unsupported cipher line {lines[1]!r}")
        epoch = _int_field(lines[2], "epoch")
        entries = []
        for line in lines[3:]:
            parts = line.split(" ")
            if len(parts) != 5 or parts[0] != "entry":
                raise FormatError(f"bad vault line {line!r}")
            try:
                nonce, ct, tag = (bytes.fromhex(x) for x in parts[2:])
                j = int(parts[1])
            except ValueError as exc:
                raise FormatError(f"bad vault line {line!r}") from exc
            if len(nonce) != NONCE_SIZE or len(tag) != TAG_SIZE:
                raise FormatError(f"bad nonce or tag length in entry {j}")
            entries.append(VaultEntry(j, nonce, ct, tag))
        if [e.index for e in entries] != sorted({e.index for e in entries}):
            raise FormatError("vault entries must be unique and in ascending order")
        return cls(epoch, entries)


def _int_field(line: str, name: str) -> int:
    parts = line.split(" ")
    if len(parts) != 2 or parts[0] != name:
        raise FormatError(f"expected '{name} <int>', got {line!r}")
    try:
        return int(parts[1])
    except ValueError as exc:
        raise FormatError(f"expected '{name} <int>', got {line!r}") from exc


def _cipher(key: bytes) -> AESGCM:
    if len(key) != DIGEST_SIZE:
        raise ValueError(f"vault key must be {DIGEST_SIZE} bytes, got {len(key)}")
    return AESGCM(bytes(key[:32]))


def seal(secret: bytes, key: bytes, rng=None, index: int = 0) -> VaultEntry:
    if not secret:
        raise ValueError("cannot seal an empty secret")
    nonce = as_entropy(rng).bytes(NONCE_SIZE)
    sealed = _cipher(key).encrypt(nonce, bytes(secret), None)
    return VaultEntry(index, nonce, sealed[:-TAG_SIZE], sealed[-TAG_SIZE:])


def open_entry(entry: VaultEntry, key: bytes) -> bytes:
    try:
        return _cipher(key).decrypt(entry.nonce, entry.ciphertext + entry.tag, None)
    except InvalidTag:
        raise VaultAuthenticationError(f"vault entry {entry.index} failed authentication") from None


def seal_all(secrets: list[bytes], keys: list[bytes], epoch: int, rng=None) -> VaultFile:
    rng = as_entropy(rng)
    return VaultFile(epoch, [seal(s, k, rng, index=j) for j, (s, k) in enumerate(zip(secrets, keys))])
