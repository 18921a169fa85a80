from __future__ import annotations

import struct

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from polyprime import (BitSet, CorruptCache, InvalidArgument, build_sieve, load_cache, prime_count,
                       primes_in_progression, save_cache)
from polyprime.sieve import CACHE_MAGIC, simple_sieve


@pytest.fixture(scope="module")
def sieve_1e5():
    return build_sieve(10**5)


def test_small_primes():
    assert build_sieve(10).members() == [2, 3, 5, 7]
    assert build_sieve(2).members() == [2]


def test_count_to_100():
    s = build_sieve(100)
    assert s.count() == 25 == len(oracles.primes_td(100))


def test_count_to_1e6():
    s = build_sieve(10**6)
    assert s.count() == sum(oracles.simple_sieve(10**6)) == 78498


def test_agrees_with_trial_division(sieve_1e5):
    flags = sieve_1e5.to_bool()
    assert [k for k in range(10**5 + 1) if flags[k]] == oracles.primes_td(10**5)


@pytest.mark.parametrize("limit, segment_bits", [
    (limit, seg)
    for limit in (2, 3, 97, 1000, 4095, 4096, 65537, 10**6)
    for seg in (2, 64, 4096, 2**21)
    if seg > 2 or limit <= 10**4  # two-bit segments are slow at scale
])
def test_segmented_matches_plain(limit, segment_bits):
    assert np.array_equal(build_sieve(limit, segment_bits=segment_bits).to_bool(), simple_sieve(limit))


def test_workers_do_not_change_result():
    assert build_sieve(10**6, segment_bits=2**14, workers=4) == build_sieve(10**6)


@pytest.mark.parametrize("limit", [0, 1, 2**34 + 1])
def test_limit_range(limit):
    with pytest.raises(InvalidArgument):
        build_sieve(limit)


@pytest.mark.parametrize("n, expected", [(1, 0), (10, 4), (100, 25), (0, 0)])
def test_prime_count(sieve_1e5, n, expected):
    assert prime_count(sieve_1e5, n) == expected


def test_prime_count_past_limit(sieve_1e5):
    with pytest.raises(InvalidArgument):
        prime_count(sieve_1e5, 10**5 + 1)


@pytest.mark.parametrize("a, q, expected", [(1, 4, 11), (0, 2, 1), (2, 4, 1), (3, 4, 13)])
def test_primes_in_progression(sieve_1e5, a, q, expected):
    assert primes_in_progression(sieve_1e5, a, q, 100) == expected


@pytest.mark.parametrize("a, q", [(4, 4), (-1, 4), (0, 0)])
def test_primes_in_progression_bad_args(sieve_1e5, a, q):
    with pytest.raises(InvalidArgument):
        primes_in_progression(sieve_1e5, a, q, 100)


@given(st.integers(1, 60), st.integers(0, 10**5))
@settings(max_examples=60, deadline=None)
def test_progressions_partition_prime_count(sieve_1e5, q, n):
    total = sum(primes_in_progression(sieve_1e5, a, q, n) for a in range(q))
    assert total == prime_count(sieve_1e5, n)


# --- BitSet -------------------------------------------------------------------

@given(st.lists(st.booleans(), min_size=1, max_size=200))
def test_bitset_round_trip(flags):
    bits = BitSet.from_bool(np.array(flags))
    assert bits.limit == len(flags) - 1
    assert bits.to_bool().tolist() == flags
    assert bits.count() == sum(flags)
    assert all((i in bits) == f for i, f in enumerate(flags))
    for n in range(len(flags)):
        assert bits.count(n) == sum(flags[: n + 1])


def test_bitset_ops_and_padding():
    a = BitSet.from_members(20, [1, 2, 3, 19])
    b = BitSet.from_members(10, [2, 3, 4])
    assert (a & b).members() == [2, 3]
    assert (a | b).members() == [1, 2, 3, 4]
    assert (a & b).limit == 10
    assert a.truncate(3).members() == [1, 2, 3]
    # bits past the limit are cleared on construction
    assert BitSet(3, np.array([0xFF], dtype=np.uint8)).data.tolist() == [0x0F]


def test_bitset_is_immutable():
    bits = BitSet.from_members(10, [3])
    with pytest.raises(ValueError):
        bits.data[0] = 0xFF


# --- cache --------------------------------------------------------------------

def test_cache_round_trip(tmp_path):
    s = build_sieve(10**4)
    path = tmp_path / "p.bin"
    save_cache(s, path)
    assert load_cache(path) == s
    raw = path.read_bytes()
    magic, limit, length = struct.unpack("<8sQQ", raw[:24])
    assert (magic, limit, length) == (CACHE_MAGIC, 10**4, (10**4 + 8) // 8)
    assert len(raw) == 24 + length
    # bit i of the stream is primality of i, least significant first
    assert raw[24] == 0b10101100
    assert raw[-1] >> ((10**4 + 1) % 8) == 0


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "p.bin"
    save_cache(build_sieve(100), path)
    raw = bytearray(path.read_bytes())
    raw[:8] = b"NOTPRIME"
    path.write_bytes(bytes(raw))
    with pytest.raises(CorruptCache):
        load_cache(path)


@pytest.mark.parametrize("cut", [1, 10, 23, 25])
def test_cache_truncated(tmp_path, cut):
    path = tmp_path / "p.bin"
    save_cache(build_sieve(1000), path)
    raw = path.read_bytes()
    path.write_bytes(raw[: len(raw) - cut] if cut > 24 else raw[:cut])
    with pytest.raises(CorruptCache):
        load_cache(path)


def test_cache_length_mismatch(tmp_path):
    path = tmp_path / "p.bin"
    s = build_sieve(1000)
    path.write_bytes(struct.pack("<8sQQ", CACHE_MAGIC, 1000, 7) + s.data.tobytes())
    with pytest.raises(CorruptCache):
        load_cache(path)


def test_cache_trailing_garbage(tmp_path):
    path = tmp_path / "p.bin"
    save_cache(build_sieve(1000), path)
    path.write_bytes(path.read_bytes() + b"\0")
    with pytest.raises(CorruptCache):
        load_cache(path)
