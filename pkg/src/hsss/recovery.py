"""Combiner-side recovery and participant-side verification."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from hsss.dealer import DealerState, PublicBundle
from hsss.errors import (
    EpochMismatchError,
    ExcessSharesError,
    InsufficientSharesError,
    InvalidShareError,
    UnknownSecretIndex,
)
from hsss.hashcore import derive_key, hash
from hsss.vault import VaultFile, open_entry

log = logging.getLogger(__name__)


@dataclass
class RecoveryRequest:
    index: int
    submitted_shares: list[tuple[str, bytes]] = field(default_factory=list)


def validate_share(share: bytes, bundle: PublicBundle) -> bool:
    return hash(share) in bundle.share_hashes


def verify_recovered_secret(secret: bytes, j: int, bundle: PublicBundle) -> bool:
    if not 0 <= j < len(bundle.secret_hashes):
        raise UnknownSecretIndex(f"no secret with index {j}")
    return hash(hash(secret)) == bundle.secret_hashes[j]


def check_epochs(state: DealerState, bundle: PublicBundle, vault: VaultFile | None = None) -> None:
    epochs = {"state": state.epoch, "bundle": bundle.epoch}
    if vault is not None:
        epochs["vault"] = vault.epoch
    if len(set(epochs.values())) != 1:
        raise EpochMismatchError(**epochs)


def collect_basis(req: RecoveryRequest, state: DealerState, bundle: PublicBundle) -> list[bytes]:
    """Validate the submitted shares and complete the basis with the combiner's own shares.

    Participants must bring exactly one distinct share per live group; the
    dealer share and any controlling shares are added here.
    """
    for participant, share in req.submitted_shares:
        if not validate_share(share, bundle):
            raise InvalidShareError(participant)
    distinct = {s for _, s in req.submitted_shares}
    required = state.group_count
    if len(distinct) < required:
        raise InsufficientSharesError(len(distinct), required)
    if len(distinct) > required:
        raise ExcessSharesError(len(distinct), required)
    return sorted(distinct) + state.combiner_shares()


def recover(req: RecoveryRequest, dealer_state: DealerState, bundle: PublicBundle, vault: VaultFile) -> bytes:
    j = req.index
    if not 0 <= j < dealer_state.m:
        raise UnknownSecretIndex(f"no secret with index {j}")
    check_epochs(dealer_state, bundle, vault)
    basis = collect_basis(req, dealer_state, bundle)
    key = derive_key(dealer_state.secret_digests[j], basis)
    secret = open_entry(vault.entry(j), key)
    log.debug("recovered secret %d from %d submissions", j, len(req.submitted_shares))
    return secret
