"""Dealer side: setup, publication, distribution and proactive maintenance.

Every operation that changes the basis or a secret returns a fresh
``(DealerState, PublicBundle, VaultFile)`` triple and leaves its inputs
untouched. Basis indices are stable: index 0 is the dealer share, group
shares and controlling shares get new indices that are never reused.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from hsss.access import GroupAssignment, participant_name
from hsss.entropy import Entropy, as_entropy
from hsss.errors import (
    BasisIndexError,
    ConfigurationError,
    FormatError,
    RefreshRefused,
    UnknownSecretIndex,
    VaultAuthenticationError,
)
from hsss.hashcore import (
    HASH_ID,
    SHARE_SIZE,
    derive_key,
    digest_from_hex,
    hash,
    share_from_hex,
    share_to_hex,
)
from hsss.vault import VaultFile, open_entry, seal, seal_all

DEALER_MAGIC = "HSSS-DEALER v1"
PUBLIC_MAGIC = "HSSS-PUBLIC v1"
DEALER_ID = "D"


@dataclass
class DealerState:
    basis: dict[int, bytes]
    group_assignment: GroupAssignment
    secret_digests: list[bytes]
    controlling: set[int] = field(default_factory=set)
    epoch: int = 0
    revoked: set[int] = field(default_factory=set)

    def __post_init__(self):
        self.basis = dict(sorted(self.basis.items()))
        if 0 not in self.basis:
            raise ConfigurationError("basis must contain the dealer share at index 0")
        held = set(self.group_assignment.groups) | self.controlling | {0}
        if held != set(self.basis):
            raise ConfigurationError("every basis share must belong to the dealer, a group or the controlling ledger")
        if set(self.group_assignment.groups) & self.controlling or 0 in self.controlling:
            raise ConfigurationError("controlling indices must not be group or dealer indices")
        live = [s for s in self.basis.values() if s]
        if len(set(live)) != len(live):
            raise ConfigurationError("basis shares must be pairwise distinct")
        if any(s and len(s) != SHARE_SIZE for s in self.basis.values()):
            raise ConfigurationError(f"shares must be {SHARE_SIZE} bytes")
        if set(self.basis) & self.revoked:
            raise ConfigurationError("a revoked index cannot be live")

    @property
    def t(self) -> int:
        return len(self.basis) - 1

    @property
    def m(self) -> int:
        return len(self.secret_digests)

    @property
    def dealer_share(self) -> bytes:
        return self.basis[0]

    @property
    def group_count(self) -> int:
        return len(self.group_assignment.groups)

    def role(self, b: int) -> str:
        if b == 0:
            return "dealer"
        if b in self.controlling:
            return "controlling"
        return "group"

    def combiner_shares(self) -> list[bytes]:
        """Shares the combiner adds itself: the dealer share and every controlling share."""
        return [self.basis[0]] + [self.basis[b] for b in sorted(self.controlling)]

    def keys(self) -> list[bytes]:
        shares = list(self.basis.values())
        return [derive_key(q, shares) for q in self.secret_digests]

    def next_index(self) -> int:
        return max(set(self.basis) | self.revoked) + 1

    def to_text(self) -> str:
        lines = [DEALER_MAGIC, f"hash {HASH_ID}", f"t {self.t}", f"epoch {self.epoch}"]
        for b, share in self.basis.items():
            lines.append(f"basis {b} {self.role(b)} {share_to_hex(share)}")
        for b, members in self.group_assignment.groups.items():
            lines.append(f"group {b} {','.join(members)}")
        for j, q in enumerate(self.secret_digests):
            lines.append(f"q {j} {q.hex()}")
        if self.revoked:
            lines.append("revoked " + ",".join(str(b) for b in sorted(self.revoked)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DealerState":
        lines = _split_lines(text)
        if len(lines) < 4 or lines[0] != DEALER_MAGIC:
            raise FormatError("not an HSSS-DEALER v1 file")
        _check_hash_line(lines[1])
        t = _int_field(lines[2], "t")
        epoch = _int_field(lines[3], "epoch")
        basis, controlling, groups, digests, revoked = {}, set(), {}, [], set()
        roles = {}
        try:
            for line in lines[4:]:
                parts = line.split(" ")
                if parts[0] == "basis" and len(parts) == 4:
                    b = int(parts[1])
                    if parts[2] not in ("dealer", "group", "controlling"):
                        raise FormatError(f"unknown basis role {parts[2]!r}")
                    basis[b] = share_from_hex(parts[3])
                    roles[b] = parts[2]
                    if parts[2] == "controlling":
                        controlling.add(b)
                elif parts[0] == "group" and len(parts) == 3:
                    groups[int(parts[1])] = tuple(parts[2].split(","))
                elif parts[0] == "q" and len(parts) == 3:
                    if int(parts[1]) != len(digests):
                        raise FormatError("secret digests must be listed in index order")
                    digests.append(digest_from_hex(parts[2]))
                elif parts[0] == "revoked" and len(parts) == 2:
                    revoked = {int(x) for x in parts[1].split(",")}
                else:
                    raise FormatError(f"bad dealer state line {line!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc)) from exc
        if roles.get(0) != "dealer" or any(r == "dealer" for b, r in roles.items() if b != 0):
            raise FormatError("index 0 and only index 0 must carry the dealer role")
        try:
            state = cls(basis, GroupAssignment(groups), digests, controlling, epoch, revoked)
        except ConfigurationError as exc:
            raise FormatError(str(exc)) from exc
        if state.t != t:
            raise FormatError(f"t line says {t} but {len(basis)} basis shares are listed")
        if any(roles[b] != "group" for b in groups):
            raise FormatError("group lines must refer to group-role basis shares")
        return state


@dataclass(frozen=True)
class PublicBundle:
    t: int
    epoch: int
    share_hashes: tuple[bytes, ...]
    secret_hashes: tuple[bytes, ...]
    version: str = "v1"
    hash_id: str = HASH_ID

    def __post_init__(self):
        object.__setattr__(self, "share_hashes", tuple(sorted(self.share_hashes)))
        object.__setattr__(self, "secret_hashes", tuple(self.secret_hashes))

    def to_text(self) -> str:
        lines = [PUBLIC_MAGIC, f"hash {self.hash_id}", f"t {self.t}", f"epoch {self.epoch}"]
        lines += [f"g {g.hex()}" for g in self.share_hashes]
        lines += [f"r {j} {r.hex()}" for j, r in enumerate(self.secret_hashes)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PublicBundle":
        lines = _split_lines(text)
        if len(lines) < 4 or lines[0] != PUBLIC_MAGIC:
            raise FormatError("not an HSSS-PUBLIC v1 file")
        _check_hash_line(lines[1])
        t = _int_field(lines[2], "t")
        epoch = _int_field(lines[3], "epoch")
        g, r = [], []
        try:
            for line in lines[4:]:
                parts = line.split(" ")
                if parts[0] == "g" and len(parts) == 2 and not r:
                    g.append(digest_from_hex(parts[1]))
                elif parts[0] == "r" and len(parts) == 3:
                    if int(parts[1]) != len(r):
                        raise FormatError("r lines must be in index order")
                    r.append(digest_from_hex(parts[2]))
                else:
                    raise FormatError(f"bad public bundle line {line!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc)) from exc
        if g != sorted(g) or len(set(g)) != len(g):
            raise FormatError("g lines must be distinct and in ascending order")
        if len(g) != t + 1:
            raise FormatError(f"expected {t + 1} g lines for t={t}, found {len(g)}")
        return cls(t, epoch, tuple(g), tuple(r))


def _split_lines(text: str) -> list[str]:
    if not text.endswith("\n"):
        raise FormatError("file must end with a newline")
    return text[:-1].split("\n")


def _check_hash_line(line: str) -> None:
    if line != f"hash {HASH_ID}":
        raise FormatError(f"unsupported hash line {line!r}")


def _int_field(line: str, name: str) -> int:
    parts = line.split(" ")
    if len(parts) != 2 or parts[0] != name:
        raise FormatError(f"expected '{name} <int>', got {line!r}")
    try:
        return int(parts[1])
    except ValueError as exc:
        raise FormatError(f"expected '{name} <int>', got {line!r}") from exc


def publish(state: DealerState) -> PublicBundle:
    # r_j = h(h(S_j)) = h(q_j), so the bundle never needs the plaintext secrets
    return PublicBundle(
        t=state.t,
        epoch=state.epoch,
        share_hashes=tuple(hash(s) for s in state.basis.values()),
        secret_hashes=tuple(hash(q) for q in state.secret_digests),
    )


def _fresh_share(rng: Entropy, taken) -> bytes:
    while True:
        share = rng.bytes(SHARE_SIZE)
        if share not in taken:
            return share


def _check_secrets(secrets) -> list[bytes]:
    secrets = [bytes(s) for s in secrets]
    if not secrets:
        raise ConfigurationError("at least one secret is required")
    if any(not s for s in secrets):
        raise ConfigurationError("secrets must be non-empty")
    return secrets


def _resolve_secrets(state: DealerState, secrets=None, vault: VaultFile | None = None) -> list[bytes]:
    """Plaintext secrets needed to re-seal the vault, checked against the stored digests."""
    if secrets is None:
        if vault is None:
            raise RefreshRefused("the dealer needs the secrets or the current vault to re-seal")
        try:
            secrets = [open_entry(vault.entry(j), k) for j, k in enumerate(state.keys())]
        except (VaultAuthenticationError, UnknownSecretIndex) as exc:
            raise RefreshRefused(f"cannot re-open the current vault: {exc}") from exc
    secrets = [bytes(s) for s in secrets]
    if len(secrets) != state.m:
        raise RefreshRefused(f"expected {state.m} secrets, got {len(secrets)}")
    for j, s in enumerate(secrets):
        if hash(s) != state.secret_digests[j]:
            raise RefreshRefused(f"secret {j} does not match the stored digest")
    return secrets


def _reseal(state: DealerState, secrets: list[bytes], rng: Entropy):
    return state, publish(state), seal_all(secrets, state.keys(), state.epoch, rng)


def setup(t, group_sizes, secrets, rng=None, neutral_dealer: bool = False):
    """Generate a basis of ``t + 1`` shares, derive the keys and seal the secrets.

    ``t`` may be ``None`` to take it from ``len(group_sizes)``. With
    ``neutral_dealer`` the dealer share is the empty string.
    """
    rng = as_entropy(rng)
    group_sizes = list(group_sizes)
    if t is None:
        t = len(group_sizes)
    if t < 1:
        raise ConfigurationError(f"threshold must be >= 1, got {t}")
    if len(group_sizes) != t:
        raise ConfigurationError(f"need exactly t={t} group sizes, got {len(group_sizes)}")
    ga = GroupAssignment.from_sizes(group_sizes)
    secrets = _check_secrets(secrets)

    basis: dict[int, bytes] = {}
    for b in range(t + 1):
        if b == 0 and neutral_dealer:
            basis[0] = b""
        else:
            basis[b] = _fresh_share(rng, basis.values())
    state = DealerState(basis, ga, [hash(s) for s in secrets])
    return _reseal(state, secrets, rng)


def distribute(state: DealerState) -> dict[str, bytes]:
    return {
        p: state.basis[b]
        for b, members in state.group_assignment.groups.items()
        for p in members
    }


def refresh(state: DealerState, secrets=None, rng=None, vault: VaultFile | None = None):
    """Replace every basis share, keeping groups, controlling slots and secrets."""
    rng = as_entropy(rng)
    secrets = _resolve_secrets(state, secrets, vault)
    basis: dict[int, bytes] = {}
    for b, old in state.basis.items():
        # a neutral dealer stays neutral
        basis[b] = b"" if b == 0 and not old else _fresh_share(rng, set(basis.values()) | set(state.basis.values()))
    new = copy.deepcopy(state)
    new.basis = basis
    new.epoch += 1
    return _reseal(new, secrets, rng)


def _live_index(state: DealerState, b: int) -> None:
    if b not in state.basis:
        what = "revoked" if b in state.revoked else "unknown"
        raise BasisIndexError(f"basis index {b} is {what}")


def refresh_share(state: DealerState, b: int, secrets=None, rng=None, vault: VaultFile | None = None):
    rng = as_entropy(rng)
    _live_index(state, b)
    secrets = _resolve_secrets(state, secrets, vault)
    new = copy.deepcopy(state)
    new.basis[b] = _fresh_share(rng, state.basis.values())
    new.epoch += 1
    return _reseal(new, secrets, rng)


def _check_group_index(state: DealerState, b: int) -> None:
    if b == 0:
        raise BasisIndexError("the dealer share is refreshed, not revoked")
    _live_index(state, b)
    if b in state.controlling:
        raise BasisIndexError(f"basis index {b} is a controlling share; retire it instead")


def _drop(state: DealerState, b: int) -> DealerState:
    new = copy.deepcopy(state)
    del new.basis[b]
    new.revoked.add(b)
    new.controlling.discard(b)
    if b in new.group_assignment.groups:
        new.group_assignment = new.group_assignment.without(b)
    return new


def revoke(state: DealerState, b: int, secrets=None, rng=None, vault: VaultFile | None = None):
    """Remove group ``b``'s share from the basis; the threshold drops by one."""
    rng = as_entropy(rng)
    _check_group_index(state, b)
    if state.group_count == 1:
        raise ConfigurationError("cannot revoke the last participant group")
    secrets = _resolve_secrets(state, secrets, vault)
    new = _drop(state, b)
    new.epoch += 1
    return _reseal(new, secrets, rng)


def swap_in_controlling(state: DealerState, revoked_b: int, secrets=None, rng=None, vault: VaultFile | None = None):
    """Revoke group ``revoked_b`` and fill its slot with a fresh dealer-held share.

    Threshold and ``|g*|`` are conserved; the new share joins the controlling
    ledger, so recovery needs the combiner to supply it.
    """
    rng = as_entropy(rng)
    _check_group_index(state, revoked_b)
    if state.group_count == 1:
        raise ConfigurationError("cannot revoke the last participant group")
    secrets = _resolve_secrets(state, secrets, vault)
    new = _drop(state, revoked_b)
    c = new.next_index()
    new.basis[c] = _fresh_share(rng, state.basis.values())
    new.controlling.add(c)
    new.epoch += 1
    return _reseal(new, secrets, rng)


def add_controlling_share(state: DealerState, secrets=None, rng=None, vault: VaultFile | None = None):
    rng = as_entropy(rng)
    secrets = _resolve_secrets(state, secrets, vault)
    new = copy.deepcopy(state)
    c = new.next_index()
    new.basis[c] = _fresh_share(rng, state.basis.values())
    new.controlling.add(c)
    new.epoch += 1
    return _reseal(new, secrets, rng)


def retire_controlling_share(state: DealerState, b: int, secrets=None, rng=None, vault: VaultFile | None = None):
    rng = as_entropy(rng)
    if b not in state.controlling:
        raise BasisIndexError(f"basis index {b} is not a controlling share")
    secrets = _resolve_secrets(state, secrets, vault)
    new = _drop(state, b)
    new.epoch += 1
    return _reseal(new, secrets, rng)


def add_group(state: DealerState, size: int, secrets=None, rng=None, vault: VaultFile | None = None, members=None):
    """Add a new participant group with its own fresh basis share (threshold + 1)."""
    rng = as_entropy(rng)
    if members is None:
        if size < 1:
            raise ConfigurationError(f"group size must be >= 1, got {size}")
        start = 1 + max((int(p[1:]) for p in state.group_assignment.participants
                         if p[:1] == "P" and p[1:].isdigit()), default=0)
        members = [participant_name(start + k) for k in range(size)]
    secrets = _resolve_secrets(state, secrets, vault)
    new = copy.deepcopy(state)
    b = new.next_index()
    new.basis[b] = _fresh_share(rng, state.basis.values())
    new.group_assignment = new.group_assignment.with_group(b, members)
    new.epoch += 1
    return _reseal(new, secrets, rng)


def update_secret(state: DealerState, j: int, new_secret: bytes, vault: VaultFile, rng=None):
    """Replace secret ``j``; the basis and every other vault entry stay as they are."""
    rng = as_entropy(rng)
    if not 0 <= j < state.m:
        raise UnknownSecretIndex(f"no secret with index {j}")
    if not new_secret:
        raise ConfigurationError("secrets must be non-empty")
    new = copy.deepcopy(state)
    new.secret_digests[j] = hash(bytes(new_secret))
    key = derive_key(new.secret_digests[j], new.basis.values())
    entries = [seal(new_secret, key, rng, index=j) if e.index == j else e for e in vault.entries]
    return new, publish(new), VaultFile(vault.epoch, entries)


def share_hashes_from_basis(state: DealerState) -> set[bytes]:
    return {hash(s) for s in state.basis.values()}

