"""Sieve tables: primes, smallest prime factor, Mobius, theta prefix.

build_sieve produces one immutable bundle of arrays indexed by n that
every other module consumes:

  spf[n]          smallest prime factor of n            (0 for n < 2)
  mobius[n]       mu(n) in {-1, 0, 1}                   (mobius[0] = 0)
  primes[i]       i-th prime (ascending, all <= limit)
  theta_prefix[i] sum of log p over primes[0..i]

Construction is chunked: a base bool sieve finds the primes up to
sqrt(limit), then fixed-size segments are filled with strided numpy
writes only.  The same segment kernel serves ranges above the base
table (segment_scan), so scans beyond limit need nothing but the prime
list up to sqrt of the range end.
"""
from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from math import isqrt
from typing import BinaryIO, Iterator

import numpy as np

from .summation import compensated_cumsum

__all__ = [
    "SEGMENT_SIZE",
    "MAX_LIMIT",
    "InsufficientSieveError",
    "SieveTables",
    "build_sieve",
    "theta",
    "segment_scan",
    "dump_tables",
    "load_tables",
]

SEGMENT_SIZE = 1 << 20
MAX_LIMIT = 1 << 40

_MAGIC = b"PSX1"
_DUMP_VERSION = 1


class InsufficientSieveError(ValueError):
    """An operation needed primes beyond the built table."""


@dataclass(frozen=True)
class SieveTables:
    """Immutable arithmetic tables over [0, limit], index = n."""

    limit: int
    spf: np.ndarray
    mobius: np.ndarray
    primes: np.ndarray
    theta_prefix: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.spf, self.mobius, self.primes, self.theta_prefix):
            arr.setflags(write=False)

    def prime_count(self, x: float) -> int:
        """Number of primes <= x (x may exceed limit only if no prime does)."""
        return int(np.searchsorted(self.primes, x, side="right"))


def _small_primes(limit: int) -> np.ndarray:
    """Plain bool-array sieve; used only up to sqrt of the real target."""
    marks = np.ones(limit + 1, dtype=bool)
    marks[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if marks[p]:
            marks[p * p::p] = False
    return np.nonzero(marks)[0].astype(np.int64)


def _sieve_block(lo: int, hi: int, primes: np.ndarray,
                 spf_dtype: type) -> tuple[np.ndarray, np.ndarray]:
    """SPF and Mobius arrays for the half-open range [lo, hi).

    primes must cover sqrt(hi - 1).  All work is strided slice writes:

    - spf: each prime overwrites its multiples, applied in descending
      order so the last write at every index is the smallest factor.
    - mobius: each prime flips the sign of its multiples; each prime
      power p^a (a >= 2) zeroes multiples of p^2 and divides p out of a
      residual copy of the range, so indices left with residual > 1
      carry exactly one prime factor above sqrt(hi) and get one final
      flip (indices already zeroed stay zero under negation).

    Entries for n < 2 are cleaned up by the caller.
    """
    n = hi - lo
    spf = np.zeros(n, dtype=spf_dtype)
    mobius = np.ones(n, dtype=np.int8)
    rem = np.arange(lo, hi, dtype=np.int64)
    top = hi - 1
    small = primes[primes <= isqrt(top)]
    for p in small[::-1].tolist():
        spf[(-lo) % p::p] = p
    for p in small.tolist():
        start = (-lo) % p
        mobius[start::p] = -mobius[start::p]
        rem[start::p] //= p
        power = p * p
        if power <= top:
            mobius[(-lo) % power::power] = 0
        while power <= top:
            rem[(-lo) % power::power] //= p
            power *= p
    large = rem > 1
    mobius[large] = -mobius[large]
    unmarked = spf == 0
    if lo == 0:
        unmarked[:min(2, n)] = False
    spf[unmarked] = (np.nonzero(unmarked)[0] + lo).astype(spf_dtype)
    return spf, mobius


def build_sieve(limit: int) -> SieveTables:
    """Build all tables for [0, limit].

    Args:
        limit: inclusive upper bound, 2 <= limit <= 2**40.  Memory use
            is about 5-13 bytes per n depending on dtype choices.

    Returns:
        SieveTables with read-only arrays.
    """
    if not isinstance(limit, (int, np.integer)) or isinstance(limit, bool):
        raise ValueError(f"limit must be an integer, got {limit!r}")
    limit = int(limit)
    if not 2 <= limit <= MAX_LIMIT:
        raise ValueError(f"limit must be in [2, 2**40], got {limit}")

    spf_dtype = np.int32 if limit < 2 ** 31 else np.int64
    base_primes = _small_primes(isqrt(limit))
    spf = np.empty(limit + 1, dtype=spf_dtype)
    mobius = np.empty(limit + 1, dtype=np.int8)
    large_prime_chunks: list[np.ndarray] = []
    for lo in range(0, limit + 1, SEGMENT_SIZE):
        hi = min(lo + SEGMENT_SIZE, limit + 1)
        blk_spf, blk_mob = _sieve_block(lo, hi, base_primes, spf_dtype)
        spf[lo:hi] = blk_spf
        mobius[lo:hi] = blk_mob
        # primes above sqrt(limit) are exactly the entries spf left at n
        hits = np.nonzero(blk_spf == (np.arange(lo, hi, dtype=spf_dtype)))[0]
        if lo == 0:
            hits = hits[hits >= 2]
        big = (hits + lo).astype(np.int64)
        large_prime_chunks.append(big[big > base_primes[-1]] if base_primes.size else big)
    spf[0] = 0
    if limit >= 1:
        spf[1] = 0
    mobius[0] = 0
    primes = np.concatenate([base_primes] + large_prime_chunks)
    theta_prefix = compensated_cumsum(np.log(primes.astype(np.float64)))
    return SieveTables(limit=limit, spf=spf, mobius=mobius,
                       primes=primes, theta_prefix=theta_prefix)


def theta(x: float, tables: SieveTables) -> float:
    """Chebyshev theta: sum of log p over primes p <= x.

    Args:
        x: real cutoff, 0 <= x <= tables.limit.
        tables: sieve tables covering x.

    Returns:
        theta(x) from the compensated prefix table (0.0 below 2).
    """
    if not 0 <= x <= tables.limit:
        raise ValueError(f"x must be in [0, limit={tables.limit}], got {x}")
    i = int(np.searchsorted(tables.primes, x, side="right"))
    return float(tables.theta_prefix[i - 1]) if i else 0.0


def segment_scan(lo: int, hi: int,
                 tables: SieveTables) -> Iterator[tuple[int, int, int]]:
    """Yield (n, spf(n), mu(n)) for every n in the inclusive range [lo, hi].

    Works above tables.limit as long as the prime list covers sqrt(hi);
    values are recomputed segment by segment with the same kernel that
    built the base table, so a scan over the base range reproduces it
    exactly.
    """
    if not 2 <= lo <= hi:
        raise ValueError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    if isqrt(hi) > tables.limit:
        raise InsufficientSieveError(
            f"segment end {hi} needs primes to {isqrt(hi)}, "
            f"but tables stop at {tables.limit}")
    root = isqrt(hi)
    need = tables.primes[:int(np.searchsorted(tables.primes, root, side="right"))]
    spf_dtype = np.int32 if hi < 2 ** 31 else np.int64
    for seg_lo in range(lo, hi + 1, SEGMENT_SIZE):
        seg_hi = min(seg_lo + SEGMENT_SIZE, hi + 1)
        blk_spf, blk_mob = _sieve_block(seg_lo, seg_hi, need, spf_dtype)
        for off in range(seg_hi - seg_lo):
            yield seg_lo + off, int(blk_spf[off]), int(blk_mob[off])


def _write_array(sink: BinaryIO, name: str, arr: np.ndarray) -> None:
    data = np.ascontiguousarray(arr).tobytes()
    dtype = str(arr.dtype).encode()
    sink.write(struct.pack("<B", len(name)))
    sink.write(name.encode())
    sink.write(struct.pack("<B", len(dtype)))
    sink.write(dtype)
    sink.write(struct.pack("<QI", len(data), zlib.crc32(data)))
    sink.write(data)


def _read_array(source: BinaryIO) -> tuple[str, np.ndarray]:
    name_len = struct.unpack("<B", source.read(1))[0]
    name = source.read(name_len).decode()
    dtype_len = struct.unpack("<B", source.read(1))[0]
    dtype = np.dtype(source.read(dtype_len).decode())
    nbytes, crc = struct.unpack("<QI", source.read(12))
    data = source.read(nbytes)
    if len(data) != nbytes or zlib.crc32(data) != crc:
        raise ValueError(f"corrupt table dump: checksum mismatch in {name!r}")
    return name, np.frombuffer(data, dtype=dtype).copy()


def dump_tables(tables: SieveTables, sink: BinaryIO) -> None:
    """Write tables to a binary stream (versioned, checksummed)."""
    sink.write(_MAGIC)
    sink.write(struct.pack("<IQ", _DUMP_VERSION, tables.limit))
    for name in ("spf", "mobius", "primes", "theta_prefix"):
        _write_array(sink, name, getattr(tables, name))


def load_tables(source: BinaryIO) -> SieveTables:
    """Read tables written by dump_tables, verifying checksums."""
    magic = source.read(4)
    if magic != _MAGIC:
        raise ValueError(f"not a table dump (bad magic {magic!r})")
    version, limit = struct.unpack("<IQ", source.read(12))
    if version != _DUMP_VERSION:
        raise ValueError(f"unsupported dump version {version}")
    arrays = {}
    for _ in range(4):
        name, arr = _read_array(source)
        arrays[name] = arr
    missing = {"spf", "mobius", "primes", "theta_prefix"} - set(arrays)
    if missing:
        raise ValueError(f"table dump missing arrays: {sorted(missing)}")
    return SieveTables(limit=int(limit), **arrays)
