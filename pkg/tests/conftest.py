"""Shared independent oracles for the test suite.

Everything here recomputes expected values from first principles
(trial division, explicit power tables, per-index loops, numpy
bincounts) without touching the package's sieves or run-structure fast
paths, so agreement is a genuine check.
"""

from __future__ import annotations

import numpy as np
import pytest


# ---------------------------------------------------------------------------
# arithmetic function oracles by trial division


def factorize(n: int):
    """Prime factorization by trial division; n >= 1."""
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def naive_mobius(n: int) -> int:
    fac = factorize(n)
    if len(set(fac)) != len(fac):
        return 0
    return -1 if len(fac) % 2 else 1


def naive_liouville(n: int) -> int:
    return -1 if len(factorize(n)) % 2 else 1


def naive_squarefree(n: int) -> int:
    return naive_mobius(n) ** 2


# ---------------------------------------------------------------------------
# block-sequence oracle: searchsorted against explicit power tables


def _power_table(base: int, limit: int) -> np.ndarray:
    out = [1]
    while out[-1] <= limit:
        out.append(out[-1] * base)
    return np.array(out, dtype=np.int64)


def brute_symbols(name: str, count: int) -> np.ndarray:
    """First ``count`` symbols of a built-in example, independently."""
    m = np.arange(1, count + 1, dtype=np.int64)
    if name == "example1":
        blk = np.searchsorted(_power_table(2, count), m, side="right") - 1
        return (blk % 2 == 1).astype(np.int64)
    if name == "example2":
        blk = np.searchsorted(_power_table(2, count), m, side="right") - 1
        squares = [k * k - 1 for k in range(1, 64)]
        return np.isin(blk, squares).astype(np.int64)
    if name == "example3":
        blk = np.searchsorted(_power_table(3, count), m, side="right") - 1
        return (blk % 3).astype(np.int64)
    raise ValueError(name)


def brute_window_stats(name: str, N: int, k: int, alphabet_size: int):
    """(counts, harmonic masses) per window word by numpy bincount."""
    s = brute_symbols(name, N + k - 1)
    enc = np.zeros(N, dtype=np.int64)
    for i in range(k):
        enc = enc * alphabet_size + s[i : N + i]
    weights = 1.0 / np.arange(1, N + 1, dtype=np.float64)
    counts = np.bincount(enc, minlength=alphabet_size**k)
    masses = np.bincount(enc, weights=weights, minlength=alphabet_size**k)

    def decode(code: int):
        word = []
        for _ in range(k):
            word.append(code % alphabet_size)
            code //= alphabet_size
        return tuple(reversed(word))

    count_dict = {decode(c): int(v) for c, v in enumerate(counts) if v}
    mass_dict = {decode(c): float(v) for c, v in enumerate(masses) if v}
    return count_dict, mass_dict


def loop_window_counts(x, N: int, k: int):
    """Pure per-index window counting through symbol_at."""
    counts = {}
    for p in range(N):
        w = tuple(x.symbol_at(p + i) for i in range(k))
        counts[w] = counts.get(w, 0) + 1
    return counts


@pytest.fixture(scope="session")
def rng_seed():
    return 20240831
