"""Autocorrelation sums of the Mobius function, the Liouville function
and the square-free indicator, under Cesaro and harmonic averaging.

A correlation pattern is a shift tuple 0 < a_1 < ... < a_k together
with exponents j_0, ..., j_k in {1, 2}; its value at N is

    cesaro:      (1/N)     sum_{n<=N} f^{j_0}(n) prod_i f^{j_i}(n+a_i)
    logarithmic: (1/log N) sum_{n<=N} (1/n) * the same integrand.

Cesaro numerators are exact 64-bit integer sums (the integrand is in
{-1,0,1}); harmonic sums accumulate chunk partial sums with Kahan
compensation in a fixed ascending order, so results are independent of
the worker count.

Predicted limits: patterns with every exponent equal to 2 reduce to
densities of simultaneously square-free tuples, given by the Euler
product over residues mod p^2 (:func:`mirsky_prediction`) - these are
classical and testable.  Patterns with at least one exponent 1 carry
the predicted limit 0 flagged as ``conjectural``; the flag is metadata
only and nothing in this package asserts those limits.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import KINDS, primes_up_to, sieve_range

MAX_SHIFT = 10_000
MAX_ORDER = 5

_CHUNK = 1 << 20


def _check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


@dataclass(frozen=True)
class CorrelationSpec:
    """One correlation pattern: shifts, exponents and averaging mode."""

    shifts: Tuple[int, ...]
    exponents: Tuple[int, ...]
    mode: str = "cesaro"

    def __post_init__(self):
        shifts = tuple(int(a) for a in self.shifts)
        exponents = tuple(int(j) for j in self.exponents)
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "exponents", exponents)
        if any(a <= 0 for a in shifts):
            raise ValueError("shifts must be positive")
        if any(b <= a for a, b in zip(shifts, shifts[1:])):
            raise ValueError("shifts must be strictly increasing")
        if len(exponents) != len(shifts) + 1:
            raise ValueError("need one exponent per factor (shift 0 included)")
        if any(j not in (1, 2) for j in exponents):
            raise ValueError("exponents must be 1 or 2")
        if self.mode not in ("cesaro", "logarithmic"):
            raise ValueError(f"bad mode {self.mode!r}")

    @property
    def offsets(self) -> Tuple[int, ...]:
        return (0,) + self.shifts

    @property
    def order(self) -> int:
        return len(self.shifts)

    def all_squares(self) -> bool:
        return all(j == 2 for j in self.exponents)


Factor = Tuple[int, int]  # (offset, exponent)


def canonical_factors(
    kind: str, shifts: Sequence[int], exponents: Sequence[int]
) -> Tuple[Factor, ...]:
    """The factor list actually evaluated for a pattern.

    * liouville: squares are identically 1 and are dropped entirely
      (the result can be empty: a constant-1 integrand);
    * squarefree: the values are already 0/1, so exponents collapse
      to 1 at the same offsets;
    * mobius: factors are kept as given.
    """
    _check_kind(kind)
    offsets = (0,) + tuple(shifts)
    factors = tuple(zip(offsets, exponents))
    if kind == "liouville":
        return tuple((o, 1) for o, j in factors if j == 1)
    if kind == "squarefree":
        return tuple((o, 1) for o, _ in factors)
    return factors


def _chunk_term(values: np.ndarray, lo: int, hi: int, factors: Sequence[Factor]):
    """Integrand values for n in [lo+1, hi] (values[i] = f(i+1))."""
    if not factors:
        return None  # constant 1
    term = None
    for offset, exponent in factors:
        part = values[lo + offset : hi + offset]
        if exponent == 2:
            part = part * part
        term = part.copy() if term is None else term * part
    return term


def _prepare(kind: str, spec_like, N: int):
    if isinstance(spec_like, CorrelationSpec):
        factors = canonical_factors(kind, spec_like.shifts, spec_like.exponents)
        amax = max(spec_like.shifts) if spec_like.shifts else 0
    else:
        factors = tuple(spec_like)
        amax = max((o for o, _ in factors), default=0)
    seg = sieve_range(kind, 1, N + amax + 1)
    return factors, seg.values


def correlation_numerator(
    kind: str,
    shifts: Sequence[int],
    exponents: Sequence[int],
    N: int,
    canonicalize: bool = True,
    chunk_size: int = _CHUNK,
    threads: int = 1,
    _values: Optional[np.ndarray] = None,
) -> int:
    """Exact integer numerator of the Cesaro correlation at N.

    With ``canonicalize=False`` the exponents are applied verbatim;
    otherwise the kind-specific identities (e.g. the square of the
    Liouville function being 1) are applied first.  Both paths must
    agree exactly.
    """
    _check_kind(kind)
    if N < 1:
        raise ValueError("N must be >= 1")
    shifts = tuple(int(a) for a in shifts)
    exponents = tuple(int(j) for j in exponents)
    if canonicalize:
        factors = canonical_factors(kind, shifts, exponents)
    else:
        factors = tuple(zip((0,) + shifts, exponents))
    amax = max(shifts) if shifts else 0
    values = _values
    if values is None:
        values = sieve_range(kind, 1, N + amax + 1).values

    bounds = list(range(0, N, chunk_size)) + [N]
    ranges = list(zip(bounds[:-1], bounds[1:]))

    def one(span):
        lo, hi = span
        term = _chunk_term(values, lo, hi, factors)
        if term is None:
            return hi - lo
        return int(term.sum(dtype=np.int64))

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, ranges))
    else:
        parts = [one(r) for r in ranges]
    return sum(parts)


def _kahan_add(total: float, comp: float, term: float) -> Tuple[float, float]:
    y = term - comp
    t = total + y
    return t, (t - total) - y


def correlation(
    kind: str,
    spec: CorrelationSpec,
    N: int,
    chunk_size: int = _CHUNK,
    threads: int = 1,
) -> float:
    """Correlation value of the pattern at N under its averaging mode."""
    _check_kind(kind)
    if N < 3:
        raise ValueError("N must be >= 3")
    factors, values = _prepare(kind, spec, N)
    if spec.mode == "cesaro":
        num = correlation_numerator(
            kind,
            spec.shifts,
            spec.exponents,
            N,
            chunk_size=chunk_size,
            threads=threads,
            _values=values,
        )
        return num / N

    bounds = list(range(0, N, chunk_size)) + [N]
    ranges = list(zip(bounds[:-1], bounds[1:]))

    def one(span):
        lo, hi = span
        inv = 1.0 / np.arange(lo + 1, hi + 1, dtype=np.float64)
        term = _chunk_term(values, lo, hi, factors)
        if term is None:
            return float(inv.sum())
        return float(np.dot(term.astype(np.float64), inv))

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, ranges))
    else:
        parts = [one(r) for r in ranges]
    total, comp = 0.0, 0.0
    for part in parts:  # fixed ascending reduction order
        total, comp = _kahan_add(total, comp, part)
    return total / math.log(N)


def mirsky_prediction(shifts: Sequence[int], prime_bound: int) -> float:
    """Density of n with n + a square-free for a in {0} union shifts.

    Equals prod_{p <= prime_bound} (1 - w_p / p^2) where w_p counts the
    distinct residues -a mod p^2: each excluded residue class mod p^2
    is where p^2 divides some n + a.  The product is nonincreasing in
    the prime bound and converges as the bound grows.
    """
    if prime_bound < 100:
        raise ValueError("prime_bound must be >= 100")
    offsets = {0}
    for a in shifts:
        a = int(a)
        if a <= 0:
            raise ValueError("shifts must be positive")
        offsets.add(a)
    product = 1.0
    for p in primes_up_to(prime_bound):
        p2 = p * p
        residues = {(-a) % p2 for a in offsets}
        product *= 1.0 - len(residues) / p2
    return product


@dataclass(frozen=True)
class Prediction:
    value: float
    kind: str  # "mirsky" (testable density) or "conjectural"


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation values of a family of patterns over an N grid."""

    kind: str
    mode: str
    grid: Tuple[int, ...]
    specs: Tuple[CorrelationSpec, ...]
    values: Tuple[Tuple[float, ...], ...]  # one row per spec
    predictions: Tuple[Optional[Prediction], ...]
    prime_bound: int

    def __post_init__(self):
        if len(self.values) != len(self.specs):
            raise ValueError("one value row per spec required")
        for row in self.values:
            if len(row) != len(self.grid):
                raise ValueError("one value per grid point required")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "grid": list(self.grid),
            "prime_bound": self.prime_bound,
            "specs": [
                {
                    "shifts": list(spec.shifts),
                    "exponents": list(spec.exponents),
                    "values": list(row),
                    "prediction": None
                    if pred is None
                    else {"value": pred.value, "kind": pred.kind},
                }
                for spec, row, pred in zip(self.specs, self.values, self.predictions)
            ],
        }


def _prediction_for(kind: str, spec: CorrelationSpec, prime_bound: int) -> Prediction:
    if kind == "squarefree":
        return Prediction(mirsky_prediction(spec.shifts, prime_bound), "mirsky")
    if kind == "mobius" and spec.all_squares():
        return Prediction(mirsky_prediction(spec.shifts, prime_bound), "mirsky")
    return Prediction(0.0, "conjectural")


def enumerate_specs(
    kind: str, max_shift: int, max_order: int, mode: str
) -> List[CorrelationSpec]:
    """All patterns with <= max_order shifts bounded by max_shift.

    Patterns whose canonical factor lists coincide are emitted once
    (for the Liouville function only all-ones exponent patterns remain;
    a pattern that canonicalizes to an empty product is dropped).
    """
    _check_kind(kind)
    if not 0 <= max_shift <= MAX_SHIFT:
        raise ValueError(f"max_shift must lie in [0, {MAX_SHIFT}]")
    if not 0 <= max_order <= MAX_ORDER:
        raise ValueError(f"max_order must lie in [0, {MAX_ORDER}]")
    specs: List[CorrelationSpec] = []
    seen = set()
    for k in range(0, max_order + 1):
        for shifts in itertools.combinations(range(1, max_shift + 1), k):
            for exponents in itertools.product((1, 2), repeat=k + 1):
                factors = canonical_factors(kind, shifts, exponents)
                if not factors:
                    continue
                if factors in seen:
                    continue
                seen.add(factors)
                specs.append(
                    CorrelationSpec(shifts=shifts, exponents=exponents, mode=mode)
                )
    return specs


def chowla_scan(
    kind: str,
    max_shift: int,
    max_order: int,
    grid: Sequence[int],
    mode: str = "cesaro",
    prime_bound: int = 10_000,
    threads: int = 1,
    specs: Optional[Sequence[CorrelationSpec]] = None,
) -> CorrelationReport:
    """Evaluate a family of patterns over an N grid.

    When ``specs`` is given it overrides the (kind, max_shift,
    max_order) enumeration; each spec's mode must match ``mode``.
    """
    _check_kind(kind)
    grid = [int(n) for n in grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be nonempty and strictly increasing")
    if grid[0] < 3:
        raise ValueError("grid values must be >= 3")
    if specs is None:
        spec_list = enumerate_specs(kind, max_shift, max_order, mode)
    else:
        spec_list = list(specs)
        for spec in spec_list:
            if spec.mode != mode:
                raise ValueError("spec mode does not match the scan mode")

    amax = max((max(s.shifts) if s.shifts else 0 for s in spec_list), default=0)
    values = sieve_range(kind, 1, grid[-1] + amax + 1).values

    rows: List[Tuple[float, ...]] = []
    for spec in spec_list:
        factors = canonical_factors(kind, spec.shifts, spec.exponents)
        row: List[float] = []
        if spec.mode == "cesaro":
            total = 0
            prev = 0
            for n_grid in grid:
                total += _numerator_span(values, prev, n_grid, factors, threads)
                prev = n_grid
                row.append(total / n_grid)
        else:
            total, comp = 0.0, 0.0
            prev = 0
            for n_grid in grid:
                for part in _harmonic_parts(values, prev, n_grid, factors, threads):
                    total, comp = _kahan_add(total, comp, part)
                prev = n_grid
                row.append(total / math.log(n_grid))
        rows.append(tuple(row))

    predictions = tuple(_prediction_for(kind, spec, prime_bound) for spec in spec_list)
    return CorrelationReport(
        kind=kind,
        mode=mode,
        grid=tuple(grid),
        specs=tuple(spec_list),
        values=tuple(rows),
        predictions=predictions,
        prime_bound=prime_bound,
    )


def _spans(lo: int, hi: int, chunk_size: int = _CHUNK):
    bounds = list(range(lo, hi, chunk_size)) + [hi]
    return list(zip(bounds[:-1], bounds[1:]))


def _numerator_span(values, lo, hi, factors, threads) -> int:
    ranges = _spans(lo, hi)

    def one(span):
        a, b = span
        term = _chunk_term(values, a, b, factors)
        if term is None:
            return b - a
        return int(term.sum(dtype=np.int64))

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(one, ranges))
    return sum(one(r) for r in ranges)


def _harmonic_parts(values, lo, hi, factors, threads) -> List[float]:
    ranges = _spans(lo, hi)

    def one(span):
        a, b = span
        inv = 1.0 / np.arange(a + 1, b + 1, dtype=np.float64)
        term = _chunk_term(values, a, b, factors)
        if term is None:
            return float(inv.sum())
        return float(np.dot(term.astype(np.float64), inv))

    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, ranges))
    return [one(r) for r in ranges]
