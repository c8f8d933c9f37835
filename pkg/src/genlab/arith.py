"""Segmented sieves for the Mobius function, the Liouville function and
the square-free indicator.

Values over [lo, hi) are produced segment by segment with numpy slice
updates against a prime table <= sqrt(hi), so memory stays bounded for
ranges up to the configured capacity.  The capacity defaults to 10^8
and can be overridden with the ``GENLAB_MAX_N`` environment variable.

Per segment:

* ``mobius``: one sign flip per prime divisor p <= sqrt(hi), zeros on
  multiples of p^2, and a final flip wherever a prime factor > sqrt(hi)
  remains (detected by dividing the tracked cofactor).
* ``liouville``: one sign flip per prime power p^e dividing n (this
  counts prime factors with multiplicity), plus the leftover-prime flip.
* ``squarefree``: zeros on multiples of p^2; primes > sqrt(hi) cannot
  contribute a square.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from typing import Dict, Iterator, List

import numpy as np

from .symbolic import Alphabet, SIGNS, SymbolicSequence

KINDS = ("mobius", "liouville", "squarefree")

DEFAULT_MAX_N = 100_000_000
DEFAULT_SEGMENT_SIZE = 1 << 20

_ALPHABETS = {
    "mobius": SIGNS,
    "liouville": Alphabet((-1, 1)),
    "squarefree": Alphabet((0, 1)),
}


class CapacityError(RuntimeError):
    """Requested sieve range exceeds the configured capacity."""


def sieve_capacity() -> int:
    raw = os.environ.get("GENLAB_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"GENLAB_MAX_N must be an integer, got {raw!r}") from None
    if value < 2:
        raise ValueError("GENLAB_MAX_N must be >= 2")
    return value


def alphabet_for(kind: str) -> Alphabet:
    _check_kind(kind)
    return _ALPHABETS[kind]


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def primes_up_to(n: int) -> List[int]:
    """All primes <= n by a plain byte sieve."""
    if n < 2:
        return []
    flags = bytearray(b"\x01") * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * ((n - start) // p + 1)
    return [i for i, f in enumerate(flags) if f]


@dataclass(frozen=True)
class SieveSegment:
    """Values of one arithmetic function on the integer range [lo, hi)."""

    kind: str
    lo: int
    hi: int
    values: np.ndarray  # int8, values[n - lo] = f(n)

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo:
            raise ValueError("values length must equal hi - lo")

    def value(self, n: int) -> int:
        if not self.lo <= n < self.hi:
            raise IndexError(f"{n} outside [{self.lo}, {self.hi})")
        return int(self.values[n - self.lo])


def _mobius_block(lo: int, hi: int, primes: List[int]) -> np.ndarray:
    size = hi - lo
    mu = np.ones(size, dtype=np.int8)
    rem = np.arange(lo, hi, dtype=np.int64)
    for p in primes:
        start = ((lo + p - 1) // p) * p
        sl = slice(start - lo, size, p)
        mu[sl] = -mu[sl]
        rem[sl] //= p
        p2 = p * p
        if p2 < hi:
            start2 = ((lo + p2 - 1) // p2) * p2
            mu[start2 - lo :: p2] = 0
    # entries with a leftover prime factor > sqrt(hi); zeros stay zero
    left = rem > 1
    mu[left] = -mu[left]
    return mu


def _liouville_block(lo: int, hi: int, primes: List[int]) -> np.ndarray:
    size = hi - lo
    lam = np.ones(size, dtype=np.int8)
    rem = np.arange(lo, hi, dtype=np.int64)
    top = hi - 1
    for p in primes:
        pe = p
        while pe <= top:
            start = ((lo + pe - 1) // pe) * pe
            sl = slice(start - lo, size, pe)
            lam[sl] = -lam[sl]
            rem[sl] //= p
            if pe > top // p:
                break
            pe *= p
    left = rem > 1
    lam[left] = -lam[left]
    return lam


def _squarefree_block(lo: int, hi: int, primes: List[int]) -> np.ndarray:
    size = hi - lo
    sf = np.ones(size, dtype=np.int8)
    for p in primes:
        p2 = p * p
        if p2 >= hi:
            break
        start = ((lo + p2 - 1) // p2) * p2
        sf[start - lo :: p2] = 0
    return sf


_BLOCK_FN = {
    "mobius": _mobius_block,
    "liouville": _liouville_block,
    "squarefree": _squarefree_block,
}


def _segments(
    kind: str, lo: int, hi: int, segment_size: int
) -> Iterator[np.ndarray]:
    primes = primes_up_to(math.isqrt(hi - 1))
    block = _BLOCK_FN[kind]
    for a in range(lo, hi, segment_size):
        b = min(a + segment_size, hi)
        yield block(a, b, primes)


def _check_range(lo: int, hi: int) -> None:
    if lo < 1 or hi <= lo:
        raise ValueError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    cap = sieve_capacity()
    if hi > cap + 1:
        raise CapacityError(
            f"hi={hi} exceeds sieve capacity {cap} (override with GENLAB_MAX_N)"
        )


def sieve_range(
    kind: str, lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> SieveSegment:
    """Values f(n) for n in [lo, hi) as a :class:`SieveSegment`."""
    _check_kind(kind)
    _check_range(lo, hi)
    parts = list(_segments(kind, lo, hi, segment_size))
    values = parts[0] if len(parts) == 1 else np.concatenate(parts)
    return SieveSegment(kind=kind, lo=lo, hi=hi, values=values)


def summatory(kind: str, N: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """The exact integer sum of f(n) over 1 <= n <= N."""
    _check_kind(kind)
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_range(1, N + 1)
    total = 0
    for part in _segments(kind, 1, N + 1, segment_size):
        total += int(part.sum(dtype=np.int64))
    return total


class _SievedSequence(SymbolicSequence):
    """Arithmetic function viewed as a symbolic sequence.

    Position n carries f(n + 1).  Values are sieved on demand in cached
    chunks; the cache is only ever filled with identical recomputable
    data, so concurrent use is safe.
    """

    CHUNK = 1 << 16

    def __init__(self, kind: str):
        super().__init__(kind, _ALPHABETS[kind])
        self.kind = kind
        self._chunks: Dict[int, np.ndarray] = {}
        self._primes_cache: List[int] = []
        self._lock = threading.Lock()

    def symbol_at(self, n: int) -> int:
        if n < 0:
            raise ValueError("index must be >= 0")
        m = n + 1
        if m > sieve_capacity():
            raise CapacityError(f"index {n} exceeds sieve capacity")
        idx = (m - 1) // self.CHUNK
        chunk = self._chunks.get(idx)
        if chunk is None:
            lo = idx * self.CHUNK + 1
            hi = lo + self.CHUNK
            primes = primes_up_to(math.isqrt(hi - 1))
            chunk = _BLOCK_FN[self.kind](lo, hi, primes)
            with self._lock:
                self._chunks.setdefault(idx, chunk)
        return int(chunk[(m - 1) % self.CHUNK])


def arithmetic_sequence(kind: str) -> SymbolicSequence:
    """``mobius``, ``liouville`` or ``squarefree`` as a lazy sequence."""
    _check_kind(kind)
    return _SievedSequence(kind)
