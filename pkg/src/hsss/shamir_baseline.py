"""Shamir (t, n) threshold sharing over a prime field.

Kept as a correctness-tested baseline for timing comparisons. Evaluation
points are fixed to x = 1..n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from hsss.entropy import as_entropy
from hsss.errors import ConfigurationError

# 2**255 - 19
DEFAULT_PRIME = (1 << 255) - 19


@dataclass(frozen=True)
class ShamirShare:
    x: int
    y: int


def f_add(a: int, b: int, p: int = DEFAULT_PRIME) -> int:
    return (a + b) % p


def f_sub(a: int, b: int, p: int = DEFAULT_PRIME) -> int:
    return (a - b) % p


def f_mul(a: int, b: int, p: int = DEFAULT_PRIME) -> int:
    return (a * b) % p


def f_inv(a: int, p: int = DEFAULT_PRIME) -> int:
    if a % p == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, -1, p)


def eval_poly(coeffs: Sequence[int], x: int, p: int = DEFAULT_PRIME) -> int:
    """Horner evaluation; ``coeffs[0]`` is the constant term."""
    y = 0
    for c in reversed(coeffs):
        y = (y * x + c) % p
    return y


def split(secret: int, t: int, n: int, rng=None, p: int = DEFAULT_PRIME) -> list[ShamirShare]:
    if not 1 <= t <= n:
        raise ConfigurationError(f"need 1 <= t <= n, got t={t}, n={n}")
    if n >= p:
        raise ConfigurationError(f"n={n} needs more than p-1 distinct nonzero points")
    if not 0 <= secret < p:
        raise ConfigurationError("secret must lie in [0, p)")
    rng = as_entropy(rng)
    coeffs = [secret] + [rng.randbelow(p) for _ in range(t - 1)]
    return [ShamirShare(x, eval_poly(coeffs, x, p)) for x in range(1, n + 1)]


def reconstruct(shares: Sequence[ShamirShare], t: int, p: int = DEFAULT_PRIME) -> int:
    """Lagrange interpolation at zero over the first ``t`` shares."""
    if len(shares) < t:
        raise ConfigurationError(f"need at least {t} shares, got {len(shares)}")
    xs = [s.x for s in shares]
    if len(set(xs)) != len(xs):
        raise ConfigurationError("share x-coordinates must be distinct")
    used = shares[:t]
    secret = 0
    for i, si in enumerate(used):
        num, den = 1, 1
        for k, sk in enumerate(used):
            if k != i:
                num = num * (-sk.x) % p
                den = den * (si.x - sk.x) % p
        secret = (secret + si.y * num * f_inv(den, p)) % p
    return secret
