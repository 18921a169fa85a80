"""Segmented Eratosthenes sieve over a packed bit array, plus its disk cache."""
from __future__ import annotations

import os
import struct
from concurrent.futures import ThreadPoolExecutor
from math import isqrt
from pathlib import Path

import numpy as np

from .errors import CorruptCache, InvalidArgument, ResourceError

MAX_LIMIT = 2**34
DEFAULT_SEGMENT_BITS = 2**21

CACHE_MAGIC = b"PGPRIME1"
_HEADER = struct.Struct("<8sQQ")


class BitSet:
    """Immutable set of integers in [0, limit], stored one bit per integer.

    Bit i lives in byte i // 8 at position i % 8, least significant first,
    and bits past ``limit`` in the last byte are always zero.
    """

    __slots__ = ("limit", "_data")

    def __init__(self, limit: int, data: np.ndarray):
        if limit < 0:
            raise InvalidArgument(f"limit must be >= 0, got {limit}")
        data = np.ascontiguousarray(data, dtype=np.uint8)
        if data.shape != (_nbytes(limit),):
            raise InvalidArgument(f"expected {_nbytes(limit)} bytes for limit {limit}, got {data.size}")
        tail = (limit + 1) % 8
        if tail and data[-1] >> tail:
            data = data.copy()
            data[-1] &= (1 << tail) - 1
        data.flags.writeable = False
        self.limit = limit
        self._data = data

    @classmethod
    def from_bool(cls, flags: np.ndarray) -> BitSet:
        flags = np.asarray(flags, dtype=bool)
        return cls(flags.size - 1, np.packbits(flags, bitorder="little"))

    @classmethod
    def from_members(cls, limit: int, members) -> BitSet:
        flags = np.zeros(limit + 1, dtype=bool)
        idx = np.fromiter(members, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() > limit):
            raise InvalidArgument("member outside [0, limit]")
        flags[idx] = True
        return cls.from_bool(flags)

    @property
    def data(self) -> np.ndarray:
        return self._data

    def to_bool(self, n: int | None = None) -> np.ndarray:
        """Unpacked flags for positions 0..n (default: the whole set)."""
        n = self.limit if n is None else self._check_n(n)
        return np.unpackbits(self._data[:_nbytes(n)], bitorder="little", count=n + 1).view(bool)

    def _check_n(self, n: int) -> int:
        if n > self.limit:
            raise InvalidArgument(f"n={n} exceeds the bitset limit {self.limit}")
        return n

    def count(self, n: int | None = None) -> int:
        """Number of members <= n."""
        n = self.limit if n is None else self._check_n(n)
        if n < 0:
            return 0
        full, rem = divmod(n + 1, 8)
        total = int(np.bitwise_count(self._data[:full]).sum(dtype=np.int64))
        if rem:
            total += int(self._data[full] & ((1 << rem) - 1)).bit_count()
        return total

    def members(self, n: int | None = None) -> list[int]:
        return np.flatnonzero(self.to_bool(n)).tolist()

    def __contains__(self, i: int) -> bool:
        if i < 0 or i > self.limit:
            return False
        return bool((self._data[i >> 3] >> (i & 7)) & 1)

    def __getitem__(self, i: int) -> bool:
        if i < 0 or i > self.limit:
            raise IndexError(i)
        return i in self

    def __len__(self) -> int:
        return self.count()

    def _binary(self, other: BitSet, op) -> BitSet:
        if not isinstance(other, BitSet):
            return NotImplemented
        n = min(self.limit, other.limit)
        k = _nbytes(n)
        return BitSet(n, op(self._data[:k], other._data[:k]))

    def __and__(self, other: BitSet) -> BitSet:
        return self._binary(other, np.bitwise_and)

    def __or__(self, other: BitSet) -> BitSet:
        return self._binary(other, np.bitwise_or)

    def truncate(self, n: int) -> BitSet:
        self._check_n(n)
        return BitSet(n, self._data[:_nbytes(n)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitSet):
            return NotImplemented
        return self.limit == other.limit and np.array_equal(self._data, other._data)

    def __hash__(self) -> int:
        return hash((self.limit, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"BitSet(limit={self.limit}, count={self.count()})"


def _nbytes(limit: int) -> int:
    return (limit + 1 + 7) // 8


def simple_sieve(limit: int) -> np.ndarray:
    """Plain boolean sieve of [0, limit]; used for base primes and as a cross-check."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[: min(2, limit + 1)] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def _sieve_segment(flags: np.ndarray, lo: int, hi: int, odd_primes: list[int]) -> None:
    # lo is even; segment slot i stands for the odd number lo + 2i + 1
    odd = np.ones((hi - lo) // 2, dtype=bool)
    for p in odd_primes:
        pp = p * p
        if pp >= hi:
            break
        start = max(pp, -(-lo // p) * p)
        if not start & 1:
            start += p
        odd[(start - lo - 1) // 2 :: p] = False
    flags[lo + 1 : hi : 2] = odd


def build_sieve(limit: int, segment_bits: int = DEFAULT_SEGMENT_BITS, workers: int = 1) -> BitSet:
    """Primality bitset of [0, limit], sieved one cache-sized segment at a time.

    Segments cover disjoint index ranges, so ``workers`` threads can fill them
    independently; the result does not depend on the worker count.
    """
    if not 2 <= limit <= MAX_LIMIT:
        raise InvalidArgument(f"limit must be in [2, 2**34], got {limit}")
    if segment_bits < 2 or segment_bits % 2:
        raise InvalidArgument("segment_bits must be an even number >= 2")
    if workers < 1:
        raise InvalidArgument("workers must be >= 1")
    try:
        flags = np.zeros(limit + 1, dtype=bool)
    except MemoryError as exc:
        raise ResourceError(f"cannot allocate a sieve of {limit + 1} entries") from exc
    base = np.flatnonzero(simple_sieve(isqrt(limit)))
    odd_primes = base[base > 2].tolist()

    bounds = [(lo, min(lo + segment_bits, limit + 1)) for lo in range(0, limit + 1, segment_bits)]
    if workers == 1:
        for lo, hi in bounds:
            _sieve_segment(flags, lo, hi, odd_primes)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda b: _sieve_segment(flags, b[0], b[1], odd_primes), bounds))
    flags[1] = False
    flags[2] = True
    return BitSet.from_bool(flags)


def prime_count(sieve: BitSet, n: int) -> int:
    """Number of primes <= n."""
    if n > sieve.limit:
        raise InvalidArgument(f"n={n} exceeds the sieve limit {sieve.limit}")
    return sieve.count(n)


def count_in_progression(bits: BitSet, a: int, q: int, n: int) -> int:
    """Members of ``bits`` that are <= n and congruent to a mod q."""
    if q < 1 or not 0 <= a < q:
        raise InvalidArgument(f"need q >= 1 and 0 <= a < q, got a={a}, q={q}")
    if n > bits.limit:
        raise InvalidArgument(f"n={n} exceeds the bitset limit {bits.limit}")
    if n < a:
        return 0
    return int(np.count_nonzero(bits.to_bool(n)[a::q]))


def primes_in_progression(sieve: BitSet, a: int, q: int, n: int) -> int:
    """Count primes p <= n with p = a (mod q)."""
    return count_in_progression(sieve, a, q, n)


def save_cache(sieve: BitSet, path: str | os.PathLike) -> None:
    """Write ``sieve`` atomically in the PGPRIME1 format."""
    path = Path(path)
    payload = sieve.data
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, sieve.limit, payload.size))
        fh.write(payload.tobytes())
    os.replace(tmp, path)


def load_cache(path: str | os.PathLike) -> BitSet:
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise CorruptCache(f"{path}: truncated header")
        magic, limit, length = _HEADER.unpack(header)
        if magic != CACHE_MAGIC:
            raise CorruptCache(f"{path}: bad magic {magic!r}")
        if length != _nbytes(limit):
            raise CorruptCache(f"{path}: payload length {length} does not match limit {limit}")
        payload = fh.read(length + 1)
    if len(payload) != length:
        raise CorruptCache(f"{path}: expected {length} payload bytes, found {len(payload)}")
    data = np.frombuffer(payload, dtype=np.uint8)
    tail = (limit + 1) % 8
    if tail and data[-1] >> tail:
        raise CorruptCache(f"{path}: nonzero padding bits")
    return BitSet(limit, data.copy())
