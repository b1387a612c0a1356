"""Hash-based adaptive threshold multi-secret sharing."""

from hsss.access import GroupAssignment, count_minimal_authorized, is_authorized, is_minimal_authorized
from hsss.dealer import DealerState, PublicBundle, setup, distribute
from hsss.entropy import Entropy
from hsss.errors import HSSSError
from hsss.hashcore import concat_shares, derive_key, hash, order_shares, xi
from hsss.recovery import RecoveryRequest, recover, validate_share, verify_recovered_secret
from hsss.vault import VaultEntry, VaultFile, open_entry, seal

__version__ = "0.1.0"

__all__ = [
    "DealerState",
    "Entropy",
    "GroupAssignment",
    "HSSSError",
    "PublicBundle",
    "RecoveryRequest",
    "VaultEntry",
    "VaultFile",
    "concat_shares",
    "count_minimal_authorized",
    "derive_key",
    "distribute",
    "hash",
    "is_authorized",
    "is_minimal_authorized",
    "open_entry",
    "order_shares",
    "recover",
    "seal",
    "setup",
    "validate_share",
    "verify_recovered_secret",
    "xi",
]
