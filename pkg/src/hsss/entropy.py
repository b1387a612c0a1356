"""Randomness source used by every randomized operation.

``Entropy()`` draws from the operating system; ``Entropy(seed)`` is a
deterministic stream for tests and reproducible fixtures. The seeded mode is
not cryptographically secure.
"""

from __future__ import annotations

import random
import secrets


class Entropy:
    def __init__(self, seed: int | None = None):
        self.seed = seed
        self._rng = random.Random(seed) if seed is not None else None

    @property
    def deterministic(self) -> bool:
        return self._rng is not None

    def bytes(self, n: int) -> bytes:
        if self._rng is None:
            return secrets.token_bytes(n)
        return self._rng.randbytes(n)

    def randbelow(self, n: int) -> int:
        if self._rng is None:
            return secrets.randbelow(n)
        return self._rng.randrange(n)

    def __repr__(self):
        return f"Entropy(seed={self.seed!r})"


def as_entropy(rng) -> Entropy:
    """Accept an ``Entropy``, an int seed or ``None``."""
    if isinstance(rng, Entropy):
        return rng
    return Entropy(rng)
