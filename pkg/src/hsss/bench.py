"""Timing comparison between the hash scheme and the Shamir baseline."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from hsss.dealer import distribute, setup
from hsss.entropy import as_entropy
from hsss.recovery import RecoveryRequest, recover
from hsss.shamir_baseline import DEFAULT_PRIME, reconstruct, split

SECRET_BYTES = 32

CAVEAT = (
    "note: pure-Python Shamir baseline (built-in big integers, one modular inverse per "
    "Lagrange term); not a maximally optimized finite-field implementation"
)


@dataclass
class BenchRow:
    t: int
    n: int
    hash_setup_us: float
    hash_recover_us: float
    shamir_split_us: float
    shamir_reconstruct_us: float

    def hash_us(self, phase: str = "recover") -> float:
        if phase == "recover":
            return self.hash_recover_us
        return self.hash_setup_us + self.hash_recover_us

    def shamir_us(self, phase: str = "recover") -> float:
        if phase == "recover":
            return self.shamir_reconstruct_us
        return self.shamir_split_us + self.shamir_reconstruct_us

    def ratio(self, phase: str = "recover") -> float:
        return self.shamir_us(phase) / self.hash_us(phase)


def group_sizes_for(t: int, n: int) -> list[int]:
    """Spread ``n`` participants over ``t`` groups as evenly as possible."""
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    base, extra = divmod(n, t)
    return [base + (1 if b < extra else 0) for b in range(t)]


def _us(start: int, stop: int) -> float:
    return (stop - start) / 1000.0


def bench_pair(t: int, n: int, trials: int, rng) -> BenchRow:
    clock = time.perf_counter_ns
    sizes = group_sizes_for(t, n)
    h_setup, h_rec, s_split, s_rec = [], [], [], []
    for _ in range(trials):
        secret = rng.bytes(SECRET_BYTES)

        t0 = clock()
        state, bundle, vault = setup(t, sizes, [secret], rng)
        t1 = clock()
        shares = distribute(state)
        # one member per group
        coalition = [(members[0], shares[members[0]]) for members in state.group_assignment.groups.values()]
        req = RecoveryRequest(0, coalition)
        t2 = clock()
        got = recover(req, state, bundle, vault)
        t3 = clock()
        assert got == secret, "hash scheme round-trip failed"
        h_setup.append(_us(t0, t1))
        h_rec.append(_us(t2, t3))

        value = int.from_bytes(secret, "big") % DEFAULT_PRIME
        t0 = clock()
        pieces = split(value, t, n, rng)
        t1 = clock()
        subset = pieces[n - t:]
        t2 = clock()
        back = reconstruct(subset, t)
        t3 = clock()
        assert back == value, "Shamir round-trip failed"
        s_split.append(_us(t0, t1))
        s_rec.append(_us(t2, t3))

    med = statistics.median
    return BenchRow(t, n, med(h_setup), med(h_rec), med(s_split), med(s_rec))


def bench_compare(pairs, trials: int = 100, rng=None) -> list[BenchRow]:
    rng = as_entropy(rng)
    return [bench_pair(t, n, trials, rng) for t, n in pairs]


def format_report(rows: list[BenchRow], phase: str = "recover") -> str:
    lines = ["t n hash_us shamir_us ratio"]
    for r in rows:
        lines.append(f"{r.t} {r.n} {r.hash_us(phase):.2f} {r.shamir_us(phase):.2f} {r.ratio(phase):.3f}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> list[dict]:
    lines = text.strip().split("\n")
    header = lines[0].split()
    out = []
    for line in lines[1:]:
        vals = line.split()
        out.append({k: (int(v) if k in ("t", "n") else float(v)) for k, v in zip(header, vals)})
    return out
