import hashlib
import random

import pytest
from cryptography.hazmat.primitives import hashes
from hypothesis import given
from hypothesis import strategies as st

from hsss.hashcore import (
    DIGEST_SIZE,
    concat_shares,
    derive_key,
    hash,
    order_shares,
    share_from_hex,
    share_to_hex,
    xi,
)

# FIPS 180-2 published SHA-512 vectors
SHA512_EMPTY = (
    "cf83e1357eefb8bdf1542850d66d8007d620e4050b5715dc83f4a921d36ce9ce"
    "47d0d13c5d85f2b0ff8318d2877eec2f63b931bd47417a81a538327af927da3e"
)
SHA512_ABC = (
    "ddaf35a193617abacc417349ae20413112e6fa4e89a97ea20a9eeee64b55d39a"
    "2192992a274fc1a836ba3c23a3feebbd454d4423643ce80e2a9ac94fa54ca49f"
)

shares_st = st.lists(st.binary(min_size=64, max_size=64), max_size=8)


def openssl_sha512(data):
    h = hashes.Hash(hashes.SHA512())
    h.update(data)
    return h.finalize()


def test_hash_published_vectors():
    assert hash(b"").hex() == SHA512_EMPTY
    assert hash(b"abc").hex() == SHA512_ABC


@given(st.binary(max_size=2048))
def test_hash_matches_independent_implementation(data):
    d = hash(data)
    assert len(d) == DIGEST_SIZE
    assert d == openssl_sha512(data)
    assert hash(data) == d


def test_order_shares_examples():
    a, b = b"\x01" * 64, b"\x02" * 64
    assert order_shares([b, a]) == [a, b]
    assert order_shares([a, a, b]) == [a, b]
    assert order_shares([a, b""]) == [a]
    # unsigned comparison: 0x80 sorts after 0x7f
    assert order_shares([b"\x80" + a[1:], b"\x7f" + a[1:]])[0][0] == 0x7F


@given(shares_st)
def test_order_shares_strict_and_idempotent(shares):
    ordered = order_shares(shares)
    assert all(x < y for x, y in zip(ordered, ordered[1:]))
    assert order_shares(ordered) == ordered
    assert set(ordered) == set(shares)


def test_concat_shares():
    assert concat_shares([b"a", b"b", b"c"]) == b"abc"
    assert concat_shares([]) == b""
    assert concat_shares([b"x"]) == b"x"


@given(st.lists(st.binary(max_size=70), max_size=6))
def test_concat_length(parts):
    assert len(concat_shares(parts)) == sum(map(len, parts))


@given(shares_st, st.randoms(use_true_random=False))
def test_xi_permutation_and_duplication_invariant(shares, r):
    shuffled = list(shares) + list(shares[:2])
    r.shuffle(shuffled)
    assert xi(shuffled) == xi(shares)


def test_xi_empty():
    assert xi([]) == b""


def test_derive_key_definition():
    q = hash(b"secret")
    basis = [bytes([i]) * 64 for i in (3, 1, 2)]
    expected = hashlib.sha512(q + bytes([1]) * 64 + bytes([2]) * 64 + bytes([3]) * 64).digest()
    assert derive_key(q, basis) == expected
    assert derive_key(q, list(reversed(basis))) == expected


def test_derive_key_rejects_bad_digest():
    with pytest.raises(ValueError):
        derive_key(b"short", [])


def test_derive_key_avalanche_single_bit():
    r = random.Random(7)
    for _ in range(1000):
        basis = [r.randbytes(64) for _ in range(r.randint(1, 5))]
        q = r.randbytes(64)
        key = derive_key(q, basis)
        if r.random() < 0.5:
            i = r.randrange(len(basis))
            bit = r.randrange(512)
            flipped = bytearray(basis[i])
            flipped[bit // 8] ^= 1 << (bit % 8)
            other = basis[:i] + [bytes(flipped)] + basis[i + 1:]
            assert derive_key(q, other) != key
        else:
            bit = r.randrange(512)
            q2 = bytearray(q)
            q2[bit // 8] ^= 1 << (bit % 8)
            assert derive_key(bytes(q2), basis) != key


def test_derive_key_deterministic_after_hex_roundtrip():
    r = random.Random(3)
    basis = [r.randbytes(64) for _ in range(4)]
    q = hash(b"x")
    reread = [share_from_hex(share_to_hex(s)) for s in basis]
    assert derive_key(q, reread) == derive_key(q, basis)


def test_share_hex_encoding():
    s = bytes(range(64))
    text = share_to_hex(s)
    assert len(text) == 128 and text == text.lower()
    assert share_from_hex(text) == s
    assert share_to_hex(b"") == "-"
    assert share_from_hex("-") == b""
    with pytest.raises(ValueError):
        share_from_hex(text.upper())
    with pytest.raises(ValueError):
        share_from_hex("ab" * 10)


def test_no_accidental_collisions():
    r = random.Random(11)
    seen = {}
    for _ in range(20000):
        data = r.randbytes(r.randint(0, 100))
        assert seen.setdefault(hash(data), data) == data
