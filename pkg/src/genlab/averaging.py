"""Counting, empirical and harmonic (logarithmic) empirical measures of
a symbolic sequence, plus density estimators for word occurrence sets.

Position weights follow the 0-based indexing convention: position j
carries weight 1/(j+1), matching the classical sum over n = 1..N with
weight 1/n at the (n-1)-st orbit point.

For sequences exposing run structure, window statistics over the first
N positions are assembled from O(log N) runs: windows fully inside a
run are constant and counted in bulk (harmonic weights via partial
harmonic sums), and only the <= k-1 windows straddling each run
boundary are evaluated symbol by symbol.  This makes N as large as
2^80 practical.  Exact (Fraction) statistics always use the direct
per-index pass and are intended for moderate N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .measures import CylinderMeasure, Number
from .symbolic import SymbolicSequence, Word, parse_word

_EULER_GAMMA = 0.5772156649015328606065121

_DIRECT_HARMONIC_LIMIT = 256
_EXACT_PASS_LIMIT = 2_000_000  # guard against accidental huge exact passes


def harmonic_float(n: int) -> float:
    """H_n = sum_{m<=n} 1/m in double precision.

    Direct summation for small n; the asymptotic expansion
    ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4) beyond, whose error
    is below 1/(252 n^6) < 1e-16 for n >= 256.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 0.0
    if n <= _DIRECT_HARMONIC_LIMIT:
        return math.fsum(1.0 / m for m in range(1, n + 1))
    inv = 1.0 / n
    inv2 = inv * inv
    return (
        math.log(n)
        + _EULER_GAMMA
        + 0.5 * inv
        - inv2 / 12.0
        + inv2 * inv2 / 120.0
    )


def harmonic_fraction(n: int) -> Fraction:
    """H_n as an exact rational."""
    if n < 0:
        raise ValueError("n must be >= 0")
    total = Fraction(0)
    for m in range(1, n + 1):
        total += Fraction(1, m)
    return total


def harmonic_range(a: int, b: int) -> float:
    """sum_{m=a+1}^{b} 1/m = H_b - H_a, cancellation free.

    Short ranges are summed directly (differencing H at two nearby huge
    arguments would lose all significant digits); long ranges use the
    asymptotic form of H at both ends, where the leading ln(b/a) term
    carries the value.
    """
    if b < a:
        raise ValueError("need a <= b")
    if b - a <= 4096:
        return math.fsum(1.0 / m for m in range(a + 1, b + 1))
    return harmonic_float(b) - harmonic_float(a)


def _clipped_runs(x: SymbolicSequence, N: int, k: int):
    """Runs covering positions [0, N + k - 1), or None."""
    return x.runs(N + k - 1)


def window_counts(x: SymbolicSequence, N: int, k: int) -> Dict[Word, int]:
    """Occurrence counts of each depth-k window among positions 0..N-1."""
    if N < 1 or k < 1:
        raise ValueError("N and k must be >= 1")
    runs = _clipped_runs(x, N, k)
    counts: Dict[Word, int] = {}
    if runs is None:
        for p in range(N):
            w = x.window(p, k)
            counts[w] = counts.get(w, 0) + 1
        return counts
    for start, end, symbol in runs:
        if start >= N:
            break
        # windows fully inside the run are symbol^k
        pure_hi = min(end - k, N - 1)
        if pure_hi >= start:
            word = (symbol,) * k
            counts[word] = counts.get(word, 0) + (pure_hi - start + 1)
        # straddling windows, at most k-1 per run
        for p in range(max(start, end - k + 1), min(end, N)):
            if p <= pure_hi:
                continue
            w = x.window(p, k)
            counts[w] = counts.get(w, 0) + 1
    return counts


def window_harmonic_masses(
    x: SymbolicSequence, N: int, k: int
) -> Dict[Word, float]:
    """sum of 1/(p+1) over occurrence positions p < N, per window word."""
    if N < 1 or k < 1:
        raise ValueError("N and k must be >= 1")
    runs = _clipped_runs(x, N, k)
    masses: Dict[Word, float] = {}
    if runs is None:
        for p in range(N):
            w = x.window(p, k)
            masses[w] = masses.get(w, 0.0) + 1.0 / (p + 1)
        return masses
    for start, end, symbol in runs:
        if start >= N:
            break
        pure_hi = min(end - k, N - 1)
        if pure_hi >= start:
            word = (symbol,) * k
            # positions start..pure_hi carry weights 1/(start+1)..1/(pure_hi+1)
            masses[word] = masses.get(word, 0.0) + harmonic_range(start, pure_hi + 1)
        for p in range(max(start, end - k + 1), min(end, N)):
            if p <= pure_hi:
                continue
            w = x.window(p, k)
            masses[w] = masses.get(w, 0.0) + 1.0 / (p + 1)
    return masses


def _window_harmonic_exact(
    x: SymbolicSequence, N: int, k: int
) -> Dict[Word, Fraction]:
    if N > _EXACT_PASS_LIMIT:
        raise ValueError(
            f"exact harmonic masses need a direct pass; N={N} is too large"
        )
    masses: Dict[Word, Fraction] = {}
    for p in range(N):
        w = x.window(p, k)
        masses[w] = masses.get(w, Fraction(0)) + Fraction(1, p + 1)
    return masses


def counting_measure(x: SymbolicSequence, N: int, k: int) -> CylinderMeasure:
    """Depth-k counting measure over the first N window positions.

    mass(w) = #{1 <= n <= N : the window at position n-1 equals w};
    total mass is exactly N.
    """
    return CylinderMeasure(x.alphabet, k, dict(window_counts(x, N, k)))


def empirical(
    x: SymbolicSequence, N: int, k: int, exact: bool = True
) -> CylinderMeasure:
    """Normalized counting measure; total mass exactly 1 in exact mode."""
    counts = window_counts(x, N, k)
    if exact:
        mass: Dict[Word, Number] = {w: Fraction(c, N) for w, c in counts.items()}
    else:
        mass = {w: c / N for w, c in counts.items()}
    return CylinderMeasure(x.alphabet, k, mass)


def log_empirical(
    x: SymbolicSequence,
    N: int,
    k: int,
    normalized: bool = True,
    exact: bool = False,
) -> CylinderMeasure:
    """Harmonically weighted empirical measure at depth k.

    Unnormalized: mass(w) = (1/log N) * sum over occurrences of 1/n,
    total mass H_N / log N (requires N >= 3 so that the total stays
    <= 2).  Normalized: divide by H_N instead, total mass exactly 1.
    Exact mode is only available for the normalized variant (the
    normalizer log N is irrational).
    """
    if N < 1 or k < 1:
        raise ValueError("N and k must be >= 1")
    if not normalized and N < 3:
        raise ValueError("unnormalized harmonic averaging requires N >= 3")
    if exact:
        if not normalized:
            raise ValueError("exact mode requires the normalized variant")
        raw = _window_harmonic_exact(x, N, k)
        h_n = harmonic_fraction(N)
        return CylinderMeasure(
            x.alphabet, k, {w: v / h_n for w, v in raw.items()}
        )
    raw = window_harmonic_masses(x, N, k)
    norm = sum(raw.values()) if normalized else math.log(N)
    return CylinderMeasure(x.alphabet, k, {w: v / norm for w, v in raw.items()})


def sbp_residual(x: SymbolicSequence, N: int, k: int) -> CylinderMeasure:
    """Residual of the summation-by-parts identity, in exact rationals.

    Computes sum_{n<=N} (1/n) delta-terms minus
    [ E(x,N) + sum_{n=1}^{N-1} E(x,n)/(n+1) ] as a signed cylinder
    table.  Both sides are evaluated independently (the right side from
    running counting measures), so the result being identically zero is
    a genuine check, not a tautology.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    lhs: Dict[Word, Fraction] = {}
    rhs: Dict[Word, Fraction] = {}
    counts: Dict[Word, int] = {}
    for n in range(1, N + 1):
        w = x.window(n - 1, k)
        counts[w] = counts.get(w, 0) + 1
        lhs[w] = lhs.get(w, Fraction(0)) + Fraction(1, n)
        if n <= N - 1:
            coeff = Fraction(1, n * (n + 1))
            for word, c in counts.items():
                rhs[word] = rhs.get(word, Fraction(0)) + c * coeff
    for word, c in counts.items():
        rhs[word] = rhs.get(word, Fraction(0)) + Fraction(c, N)
    residual = {
        w: lhs.get(w, Fraction(0)) - rhs.get(w, Fraction(0))
        for w in set(lhs) | set(rhs)
    }
    return CylinderMeasure(x.alphabet, k, residual, signed=True)


def sbp_residual_sweep(
    x: SymbolicSequence, N_max: int, k: int
) -> List[Tuple[int, CylinderMeasure]]:
    """:func:`sbp_residual` for every N in 2..N_max in one pass.

    The harmonic side and the partial sums of E(x,n)/(n+1) are shared
    across N, so the sweep costs O(N_max * distinct words) rational
    operations instead of O(N_max^2).
    """
    if N_max < 2:
        raise ValueError("N_max must be >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    lhs: Dict[Word, Fraction] = {}
    partial: Dict[Word, Fraction] = {}  # sum_{n<N} counts_n(w) / (n(n+1))
    counts: Dict[Word, int] = {}
    out: List[Tuple[int, CylinderMeasure]] = []
    for n in range(1, N_max + 1):
        w = x.window(n - 1, k)
        counts[w] = counts.get(w, 0) + 1
        lhs[w] = lhs.get(w, Fraction(0)) + Fraction(1, n)
        if n >= 2:
            residual = {
                word: lhs.get(word, Fraction(0))
                - partial.get(word, Fraction(0))
                - Fraction(counts.get(word, 0), n)
                for word in counts
            }
            out.append(
                (n, CylinderMeasure(x.alphabet, k, residual, signed=True))
            )
        coeff = Fraction(1, n * (n + 1))
        for word, c in counts.items():
            partial[word] = partial.get(word, Fraction(0)) + c * coeff
    return out


@dataclass(frozen=True)
class DensityEstimate:
    """Finite-N density estimators for the occurrence set of one word.

    ``freqs[i]`` is |J_w intersect [0, N_i)| / N_i and ``logfreqs[i]``
    the harmonically weighted analogue (1/H_N) sum 1/(j+1).  The four
    extrema are taken over the tail of the grid starting at index
    ``tail_start``.  ``chain_ok`` reports whether the estimators obey
    lower_asymptotic <= lower_logarithmic <= upper_logarithmic <=
    upper_asymptotic (guaranteed for the true limits, not at finite N).
    """

    word: Word
    grid: Tuple[int, ...]
    freqs: Tuple[float, ...]
    logfreqs: Tuple[float, ...]
    tail_start: int
    lower_asymptotic: float
    upper_asymptotic: float
    lower_logarithmic: float
    upper_logarithmic: float
    chain_ok: bool


def density_estimate(
    x: SymbolicSequence,
    word: Union[str, Word],
    grid: Sequence[int],
    tail_fraction: float = 0.5,
) -> DensityEstimate:
    """Asymptotic and logarithmic density estimators for a word.

    The lower/upper values are the extrema of the frequency traces over
    the last ceil(tail_fraction * len(grid)) grid points.
    """
    if isinstance(word, str):
        word = parse_word(x.alphabet, word)
    word = tuple(word)
    if not word:
        raise ValueError("word must be nonempty")
    grid = [int(n) for n in grid]
    if len(grid) < 4:
        raise ValueError("grid must contain at least 4 points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    k = len(word)
    freqs: List[float] = []
    logfreqs: List[float] = []
    for N in grid:
        counts = window_counts(x, N, k)
        freqs.append(counts.get(word, 0) / N)
        masses = window_harmonic_masses(x, N, k)
        logfreqs.append(masses.get(word, 0.0) / sum(masses.values()))
    tail_start = len(grid) - math.ceil(tail_fraction * len(grid))
    tail_f = freqs[tail_start:]
    tail_l = logfreqs[tail_start:]
    lo_a, hi_a = min(tail_f), max(tail_f)
    lo_l, hi_l = min(tail_l), max(tail_l)
    tol = 1e-9
    chain_ok = lo_a <= lo_l + tol and lo_l <= hi_l + tol and hi_l <= hi_a + tol
    return DensityEstimate(
        word=word,
        grid=tuple(grid),
        freqs=tuple(freqs),
        logfreqs=tuple(logfreqs),
        tail_start=tail_start,
        lower_asymptotic=lo_a,
        upper_asymptotic=hi_a,
        lower_logarithmic=lo_l,
        upper_logarithmic=hi_l,
        chain_ok=chain_ok,
    )


class FrequencyAccumulator:
    """Streaming window statistics, extendable one position at a time.

    In exact mode counts are ints and harmonic masses Fractions, so
    snapshots agree exactly with from-scratch computation at every N.
    """

    def __init__(self, x: SymbolicSequence, k: int, exact: bool = True):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.x = x
        self.k = k
        self.exact = exact
        self.n = 0
        self.counts: Dict[Word, int] = {}
        if exact:
            self.harmonic: Dict[Word, Fraction] = {}
        else:
            self.harmonic = {}
            self._kahan: Dict[Word, float] = {}

    def advance_to(self, N: int) -> None:
        if N < self.n:
            raise ValueError("cannot rewind the accumulator")
        for n in range(self.n + 1, N + 1):
            w = self.x.window(n - 1, self.k)
            self.counts[w] = self.counts.get(w, 0) + 1
            if self.exact:
                self.harmonic[w] = self.harmonic.get(w, Fraction(0)) + Fraction(1, n)
            else:
                # Kahan-compensated accumulation per word
                c = self._kahan.get(w, 0.0)
                y = 1.0 / n - c
                t = self.harmonic.get(w, 0.0) + y
                self._kahan[w] = (t - self.harmonic.get(w, 0.0)) - y
                self.harmonic[w] = t
        self.n = N

    def counting_measure(self) -> CylinderMeasure:
        return CylinderMeasure(self.x.alphabet, self.k, dict(self.counts))

    def empirical(self) -> CylinderMeasure:
        if self.n == 0:
            raise ValueError("accumulator is empty")
        if self.exact:
            mass = {w: Fraction(c, self.n) for w, c in self.counts.items()}
        else:
            mass = {w: c / self.n for w, c in self.counts.items()}
        return CylinderMeasure(self.x.alphabet, self.k, mass)

    def log_empirical(self, normalized: bool = True) -> CylinderMeasure:
        if self.n == 0:
            raise ValueError("accumulator is empty")
        if normalized:
            total = sum(self.harmonic.values())
            mass = {w: v / total for w, v in self.harmonic.items()}
        else:
            if self.n < 3:
                raise ValueError("unnormalized harmonic averaging requires N >= 3")
            norm = math.log(self.n)
            mass = {w: float(v) / norm for w, v in self.harmonic.items()}
        return CylinderMeasure(self.x.alphabet, self.k, mass)
