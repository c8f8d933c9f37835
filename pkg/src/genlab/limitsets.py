"""Estimation of Cesaro and harmonic limit sets from frequency traces.

A frequency trace records the normalized empirical (or harmonic
empirical) measure at each grid N.  The limit set at a fixed cylinder
depth is estimated by a greedy epsilon-net over the tail of the trace
under the truncated weak-star metric.  The tail is scanned from the
largest N downward, so each cluster is represented by its most
converged member; "first seen wins" then refers to that order.

Representatives whose first-coordinate and last-coordinate marginals
disagree (a necessary condition for shift invariance of the limit) are
flagged, never dropped.  Connectedness of the underlying limit set is
reported only as a diagnostic (the largest metric gap between
consecutive tail measures); finite data cannot certify it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .averaging import empirical, log_empirical
from .measures import (
    CylinderMeasure,
    HullDistance,
    basis_vector,
    hull_distance,
    marginal_drop_first,
    max_basis_index,
    metric,
    restrict,
    tv_distance,
)
from .symbolic import SymbolicSequence

MODES = ("cesaro", "logarithmic")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


@dataclass(frozen=True)
class FrequencyTrace:
    """Normalized measures of one sequence at increasing values of N."""

    name: str
    depth: int
    mode: str
    entries: Tuple[Tuple[int, CylinderMeasure], ...]

    def __post_init__(self):
        _check_mode(self.mode)
        ns = [n for n, _ in self.entries]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("grid values must be strictly increasing")
        for n, mu in self.entries:
            if abs(float(mu.total_mass) - 1.0) > 1e-9:
                raise ValueError(f"entry at N={n} is not normalized")

    @property
    def grid(self) -> Tuple[int, ...]:
        return tuple(n for n, _ in self.entries)


def frequency_trace(
    x: SymbolicSequence, k: int, grid: Sequence[int], mode: str
) -> FrequencyTrace:
    """Trace of normalized depth-k measures of x along the grid."""
    _check_mode(mode)
    grid = [int(n) for n in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if mode == "logarithmic" and grid and grid[0] < 3:
        raise ValueError("logarithmic traces require grid values >= 3")
    entries = []
    for n in grid:
        if mode == "cesaro":
            mu = empirical(x, n, k, exact=True)
        else:
            mu = log_empirical(x, n, k, normalized=True, exact=False)
        entries.append((n, mu))
    return FrequencyTrace(name=x.name, depth=k, mode=mode, entries=tuple(entries))


def shift_invariance_defect(mu: CylinderMeasure) -> float:
    """TV distance between the two depth-(k-1) marginals of mu.

    Zero for measures invariant under the shift; trivially zero at
    depth 1, where both marginals collapse to the total mass.
    """
    if mu.depth < 2:
        return 0.0
    return tv_distance(marginal_drop_first(mu), restrict(mu, mu.depth - 1))


@dataclass(frozen=True)
class Representative:
    measure: CylinderMeasure
    witnesses: Tuple[int, ...]  # grid N values represented, ascending
    shift_defect: float
    shift_ok: bool


@dataclass(frozen=True)
class LimitSetEstimate:
    name: str
    depth: int
    mode: str
    representatives: Tuple[Representative, ...]
    cluster_radius: float
    metric_index: int
    tail_start: int
    max_consecutive_gap: float  # connectedness diagnostic, never asserted


def estimate_limit_set(
    trace: FrequencyTrace,
    tail_fraction: float = 0.5,
    epsilon: float = 0.05,
    J: Optional[int] = None,
    shift_tolerance: float = 0.02,
) -> LimitSetEstimate:
    """Greedy epsilon-net over the trace tail.

    Tail measures are visited from the largest N down; a measure
    farther than epsilon from every representative found so far opens a
    new cluster.  Representatives are therefore pairwise > epsilon
    apart, and every tail measure lies within epsilon of one of them.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    if J is None:
        J = max_basis_index(trace.entries[0][1].alphabet, trace.depth)
    n_entries = len(trace.entries)
    if n_entries == 0:
        raise ValueError("trace is empty")
    tail_start = n_entries - max(1, math.ceil(tail_fraction * n_entries))
    tail = trace.entries[tail_start:]
    if not tail:
        raise ValueError("trace tail is empty")

    reps: List[Tuple[CylinderMeasure, List[int]]] = []
    for n, mu in reversed(tail):
        placed = False
        for rep_mu, witnesses in reps:
            if float(metric(mu, rep_mu, J)[0]) <= epsilon:
                witnesses.append(n)
                placed = True
                break
        if not placed:
            reps.append((mu, [n]))

    max_gap = 0.0
    for (_, a), (_, b) in zip(tail, tail[1:]):
        max_gap = max(max_gap, float(metric(a, b, J)[0]))

    representatives = []
    for rep_mu, witnesses in reps:
        defect = shift_invariance_defect(rep_mu)
        representatives.append(
            Representative(
                measure=rep_mu,
                witnesses=tuple(sorted(witnesses)),
                shift_defect=defect,
                shift_ok=defect <= shift_tolerance,
            )
        )
    return LimitSetEstimate(
        name=trace.name,
        depth=trace.depth,
        mode=trace.mode,
        representatives=tuple(representatives),
        cluster_radius=epsilon,
        metric_index=J,
        tail_start=tail_start,
        max_consecutive_gap=max_gap,
    )


@dataclass(frozen=True)
class HullInclusionReport:
    """Hull distances from each harmonic-limit representative to the
    convex hull of the Cesaro representatives."""

    depth: int
    metric_index: int
    per_representative: Tuple[HullDistance, ...]
    max_distance: float


def hull_inclusion_report(
    vlog_est: LimitSetEstimate, v_est: LimitSetEstimate, J: int
) -> HullInclusionReport:
    """Check every harmonic representative against conv(Cesaro reps)."""
    if vlog_est.depth != v_est.depth:
        raise ValueError("estimates must share the cylinder depth")
    candidates = [rep.measure for rep in v_est.representatives]
    alphabet = candidates[0].alphabet
    for rep in vlog_est.representatives:
        if rep.measure.alphabet != alphabet:
            raise ValueError("estimates must share the alphabet")
    results = []
    for rep in vlog_est.representatives:
        results.append(hull_distance(rep.measure, candidates, J))
    max_distance = max((r.distance for r in results), default=0.0)
    return HullInclusionReport(
        depth=vlog_est.depth,
        metric_index=J,
        per_representative=tuple(results),
        max_distance=max_distance,
    )
