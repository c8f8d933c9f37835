"""Finite-depth cylinder measures on the full shift and the truncated
weak-star metric.

A depth-k measure stores one nonnegative mass per length-k word; the
mass of a shorter cylinder is obtained by summing over suffixes
(:func:`restrict`).  The metric uses the fixed basis of cylinder
indicator functions enumerated length-lexicographically (all length-1
words in alphabet order, then length 2, ...), the j-th one weighted by
2^-j:

    d(mu, nu) = sum_j 2^-j |mu(C_j) - nu(C_j)|.

Masses may be exact (int / Fraction) or float.  When both operands are
exact, metric and algebra results are exact; the distance-to-hull
solver always works in floats.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .symbolic import Alphabet, Word, parse_word, word_to_str

Number = Union[int, Fraction, float]


def _is_exact(value: Number) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


@dataclass(eq=False)
class CylinderMeasure:
    """Masses of all depth-``depth`` cylinders over ``alphabet``.

    Zero masses are dropped, so ``mass`` is sparse.  ``signed`` allows
    negative entries (used only for residuals of algebraic identities);
    ordinary measures reject them.
    """

    alphabet: Alphabet
    depth: int
    mass: Dict[Word, Number]
    signed: bool = False

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        cleaned: Dict[Word, Number] = {}
        for word, value in self.mass.items():
            word = tuple(word)
            if len(word) != self.depth:
                raise ValueError(f"word {word!r} does not have length {self.depth}")
            for s in word:
                if s not in self.alphabet:
                    raise ValueError(f"symbol {s!r} not in alphabet")
            if not self.signed and value < 0:
                raise ValueError(f"negative mass {value!r} for word {word!r}")
            if value != 0:
                cleaned[word] = value
        self.mass = cleaned

    @property
    def total_mass(self) -> Number:
        total: Number = 0
        for value in self.mass.values():
            total = total + value
        return total

    @property
    def exact(self) -> bool:
        return all(_is_exact(v) for v in self.mass.values())

    def mass_of(self, word: Word) -> Number:
        return self.mass.get(tuple(word), 0)

    def is_zero(self) -> bool:
        return not self.mass

    def scaled(self, factor: Number) -> "CylinderMeasure":
        if not self.signed and factor < 0:
            raise ValueError("negative scale factor on an unsigned measure")
        return CylinderMeasure(
            self.alphabet,
            self.depth,
            {w: v * factor for w, v in self.mass.items()},
            signed=self.signed,
        )

    def normalized(self) -> "CylinderMeasure":
        total = self.total_mass
        if total == 0:
            raise ValueError("cannot normalize a zero measure")
        if all(isinstance(v, int) for v in self.mass.values()) and isinstance(
            total, int
        ):
            return CylinderMeasure(
                self.alphabet,
                self.depth,
                {w: Fraction(v, total) for w, v in self.mass.items()},
            )
        return self.scaled(1 / total if not _is_exact(total) else Fraction(1, 1) / total)

    def as_float(self) -> "CylinderMeasure":
        return CylinderMeasure(
            self.alphabet,
            self.depth,
            {w: float(v) for w, v in self.mass.items()},
            signed=self.signed,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, CylinderMeasure):
            return NotImplemented
        if self.alphabet != other.alphabet or self.depth != other.depth:
            return False
        words = set(self.mass) | set(other.mass)
        return all(self.mass_of(w) == other.mass_of(w) for w in words)


def dirac(alphabet: Alphabet, symbol, depth: int = 1) -> CylinderMeasure:
    """Unit mass on the constant word symbol^depth (a shift fixed point)."""
    return CylinderMeasure(alphabet, depth, {(symbol,) * depth: Fraction(1)})


def restrict(mu: CylinderMeasure, k2: int) -> CylinderMeasure:
    """Depth-k2 measure obtained by summing masses over word suffixes."""
    if not 1 <= k2 <= mu.depth:
        raise ValueError(f"restriction depth {k2} outside [1, {mu.depth}]")
    if k2 == mu.depth:
        return mu
    acc: Dict[Word, Number] = {}
    for word, value in mu.mass.items():
        key = word[:k2]
        acc[key] = acc.get(key, 0) + value
    return CylinderMeasure(mu.alphabet, k2, acc, signed=mu.signed)


def marginal_drop_first(mu: CylinderMeasure) -> CylinderMeasure:
    """Depth-(k-1) marginal obtained by dropping the first coordinate."""
    if mu.depth < 2:
        raise ValueError("need depth >= 2 to drop the first coordinate")
    acc: Dict[Word, Number] = {}
    for word, value in mu.mass.items():
        key = word[1:]
        acc[key] = acc.get(key, 0) + value
    return CylinderMeasure(mu.alphabet, mu.depth - 1, acc, signed=mu.signed)


def combine(
    weights: Sequence[Number], measures: Sequence[CylinderMeasure]
) -> CylinderMeasure:
    """Pointwise weighted sum of measures of common alphabet and depth."""
    if len(weights) != len(measures):
        raise ValueError("weights and measures must have equal length")
    if not measures:
        raise ValueError("need at least one measure")
    alphabet = measures[0].alphabet
    depth = measures[0].depth
    for mu in measures:
        if mu.alphabet != alphabet or mu.depth != depth:
            raise ValueError("measures must share alphabet and depth")
    total_weight: Number = 0
    for w in weights:
        if w < 0:
            raise ValueError("weights must be nonnegative")
        total_weight = total_weight + w
    if total_weight > 2:
        raise ValueError("total weight must be <= 2")
    acc: Dict[Word, Number] = {}
    for w, mu in zip(weights, measures):
        if w == 0:
            continue
        for word, value in mu.mass.items():
            acc[word] = acc.get(word, 0) + w * value
    return CylinderMeasure(alphabet, depth, acc)


def tv_distance(mu: CylinderMeasure, nu: CylinderMeasure) -> float:
    """Total-variation distance (half the L1 mass difference)."""
    if mu.alphabet != nu.alphabet or mu.depth != nu.depth:
        raise ValueError("measures must share alphabet and depth")
    words = set(mu.mass) | set(nu.mass)
    return 0.5 * float(sum(abs(mu.mass_of(w) - nu.mass_of(w)) for w in words))


# ---------------------------------------------------------------------------
# metric basis


def iter_length_lex_words(alphabet: Alphabet) -> Iterable[Word]:
    """All nonempty words, shortest first, alphabet order within a length."""
    length = 1
    while True:
        for word in itertools.product(alphabet.symbols, repeat=length):
            yield word
        length += 1


def basis_words(alphabet: Alphabet, J: int) -> List[Word]:
    """The first J basis cylinder words (f_1, ..., f_J)."""
    if J < 1:
        raise ValueError("J must be >= 1")
    return list(itertools.islice(iter_length_lex_words(alphabet), J))


def max_basis_index(alphabet: Alphabet, depth: int) -> int:
    """Number of basis cylinders of length <= depth."""
    m = len(alphabet)
    return sum(m**l for l in range(1, depth + 1))


@dataclass(frozen=True)
class MetricBasis:
    """First ``max_index`` cylinder indicators in length-lex order,
    f_j weighted by 2^-j."""

    alphabet: Alphabet
    max_index: int

    def __post_init__(self):
        if self.max_index < 1:
            raise ValueError("max_index must be >= 1")

    @property
    def words(self) -> List[Word]:
        return basis_words(self.alphabet, self.max_index)

    def weight(self, j: int) -> Fraction:
        if not 1 <= j <= self.max_index:
            raise ValueError("basis index out of range")
        return Fraction(1, 2**j)


def basis_vector(mu: CylinderMeasure, J: int) -> List[Number]:
    """Integrals of f_1..f_J against mu (cylinder masses via restriction)."""
    if J > max_basis_index(mu.alphabet, mu.depth):
        raise ValueError(
            f"J={J} indexes cylinders deeper than the stored depth {mu.depth}"
        )
    restrictions: Dict[int, CylinderMeasure] = {}
    out: List[Number] = []
    for word in basis_words(mu.alphabet, J):
        l = len(word)
        if l not in restrictions:
            restrictions[l] = restrict(mu, l)
        out.append(restrictions[l].mass_of(word))
    return out


def metric(
    mu: CylinderMeasure, nu: CylinderMeasure, J: int
) -> Tuple[Number, Number]:
    """Truncated weak-star distance and a bound on the omitted tail.

    Returns ``(distance, truncation_bound)`` with
    distance = sum_{j<=J} 2^-j |mu(C_j) - nu(C_j)| and
    truncation_bound = 2^(1-J) * max(total masses).  Exact when both
    measures carry exact masses.
    """
    if mu.alphabet != nu.alphabet:
        raise ValueError("measures must share an alphabet")
    min_depth = min(mu.depth, nu.depth)
    if J > max_basis_index(mu.alphabet, min_depth):
        raise ValueError(
            f"J={J} indexes cylinders deeper than the common depth {min_depth}"
        )
    exact = mu.exact and nu.exact
    vec_mu = basis_vector(mu, J) if mu.depth == min_depth else basis_vector(restrict(mu, min_depth), J)
    vec_nu = basis_vector(nu, J) if nu.depth == min_depth else basis_vector(restrict(nu, min_depth), J)
    distance: Number = 0
    for j, (a, b) in enumerate(zip(vec_mu, vec_nu), start=1):
        weight = Fraction(1, 2**j) if exact else 2.0 ** (-j)
        distance = distance + weight * abs(a - b)
    max_mass = max(mu.total_mass, nu.total_mass)
    bound = (Fraction(2, 2**J) if exact else 2.0 ** (1 - J)) * max_mass
    return distance, bound


# ---------------------------------------------------------------------------
# distance to the convex hull of finitely many measures


@dataclass(frozen=True)
class HullDistance:
    """Result of the hull projection.

    ``distance`` is the truncated-metric value at the final convex
    weights; it always upper-bounds the true hull distance, and
    ``distance - gap`` lower-bounds it (``gap`` is the final
    Frank-Wolfe duality gap).
    """

    distance: float
    gap: float
    weights: Tuple[float, ...]


def _smoothed_line_search(
    r: np.ndarray, b: np.ndarray, w: np.ndarray, s: float, gamma_max: float
) -> float:
    """Minimize gamma -> sum_j w_j sqrt((r_j + gamma b_j)^2 + s^2) over
    [0, gamma_max] by bisection on the (monotone) derivative."""

    def deriv(g: float) -> float:
        t = r + g * b
        return float(np.dot(w * b, t / np.sqrt(t * t + s * s)))

    if deriv(0.0) >= 0.0:
        return 0.0
    if deriv(gamma_max) <= 0.0:
        return gamma_max
    lo, hi = 0.0, gamma_max
    for _ in range(70):
        mid = 0.5 * (lo + hi)
        if deriv(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def hull_distance(
    mu: CylinderMeasure,
    candidates: Sequence[CylinderMeasure],
    J: int,
    iterations: int = 500,
    gap_tol: float = 1e-8,
) -> HullDistance:
    """Minimum truncated-metric distance from mu to the convex hull of
    ``candidates``, by Frank-Wolfe over the weight simplex.

    The objective g(lam) = sum_j w_j |(A lam - c)_j| is convex piecewise
    linear, so plain subgradient Frank-Wolfe can stall at kinks; the
    absolute values are therefore smoothed to sqrt(.^2 + s^2) with the
    smoothing level s driven towards zero as the smoothed duality gap
    closes (continuation), with exact line search at each step.  The
    reported ``gap`` is the duality gap of the unsmoothed objective at
    the returned weights, computed from a subgradient; it is a valid
    bound, i.e. the true hull distance lies in
    [distance - gap, distance].
    """
    if not candidates:
        raise ValueError("candidate list must be nonempty")
    depth = mu.depth
    for nu in candidates:
        if nu.alphabet != mu.alphabet or nu.depth != depth:
            raise ValueError("candidates must share the alphabet and depth of mu")
    totals = [float(mu.total_mass)] + [float(nu.total_mass) for nu in candidates]
    if max(totals) - min(totals) > 1e-9:
        raise ValueError(
            "total masses differ by more than 1e-9; normalize before projecting"
        )

    c = np.array([float(v) for v in basis_vector(mu, J)])
    M = np.column_stack(
        [np.array([float(v) for v in basis_vector(nu, J)]) for nu in candidates]
    )
    w = 2.0 ** -np.arange(1, J + 1)
    m = M.shape[1]

    if m == 1:
        dist = float(np.dot(w, np.abs(M[:, 0] - c)))
        return HullDistance(distance=dist, gap=0.0, weights=(1.0,))

    w_sum = float(w.sum())

    def objective(lam: np.ndarray) -> float:
        return float(np.dot(w, np.abs(M @ lam - c)))

    def certified_gap(lam: np.ndarray) -> float:
        # soft-thresholding |t| to max(|t| - delta, 0) gives a convex
        # minorant within delta * sum(w) of the objective whose
        # subgradient vanishes on near-zero residuals; each delta yields
        # a valid suboptimality bound, so take the smallest.
        r = M @ lam - c
        best = float("inf")
        for delta in (0.0, 1e-12, 1e-9, 1e-6):
            sgn = np.where(np.abs(r) <= delta, 0.0, np.sign(r))
            xi = M.T @ (w * sgn)
            gap = float(np.dot(xi, lam) - xi.min()) + delta * w_sum
            best = min(best, gap)
        return max(best, 0.0)

    vertex_values = [float(np.dot(w, np.abs(M[:, i] - c))) for i in range(m)]
    lam = np.zeros(m)
    lam[int(np.argmin(vertex_values))] = 1.0
    best_lam = lam.copy()
    best_value = objective(lam)

    scale = max(1.0, float(np.abs(c).max()), float(np.abs(M).max()))
    s = 1e-2 * scale
    s_floor = 1e-16 * scale

    for _ in range(iterations):
        value = objective(lam)
        if value < best_value:
            best_value, best_lam = value, lam.copy()
        if value == 0.0 or certified_gap(lam) <= gap_tol:
            best_value, best_lam = value, lam.copy()
            break
        r = M @ lam - c
        grad = M.T @ (w * (r / np.sqrt(r * r + s * s)))
        i_fw = int(np.argmin(grad))
        smoothed_gap = float(np.dot(grad, lam) - grad[i_fw])
        if smoothed_gap <= max(0.1 * s, gap_tol):
            # smoothed problem solved to its resolution; sharpen it
            if s <= s_floor:
                break
            s *= 0.1
            continue
        # classical step towards the best vertex ...
        b_fw = M[:, i_fw] - (r + c)  # = M e_fw - M lam
        g_fw = _smoothed_line_search(r, b_fw, w, s, 1.0)
        v_fw = objective((1.0 - g_fw) * lam + g_fw * _unit(m, i_fw))
        # ... or a pairwise step shifting weight off the worst vertex,
        # which reaches interior optima without zig-zagging
        support = np.flatnonzero(lam > 0)
        i_away = int(support[np.argmax(grad[support])])
        b_pw = M[:, i_fw] - M[:, i_away]
        g_pw = _smoothed_line_search(r, b_pw, w, s, float(lam[i_away]))
        lam_pw = lam.copy()
        lam_pw[i_fw] += g_pw
        lam_pw[i_away] -= g_pw
        v_pw = objective(lam_pw)

        if g_fw <= 0.0 and g_pw <= 0.0:
            if s <= s_floor:
                break
            s *= 0.1
            continue
        if v_pw <= v_fw:
            lam = np.clip(lam_pw, 0.0, None)
        else:
            lam = (1.0 - g_fw) * lam
            lam[i_fw] += g_fw
        lam /= lam.sum()

    return HullDistance(
        distance=best_value,
        gap=certified_gap(best_lam),
        weights=tuple(float(v) for v in best_lam),
    )


def _unit(m: int, i: int) -> np.ndarray:
    e = np.zeros(m)
    e[i] = 1.0
    return e


# ---------------------------------------------------------------------------
# JSON serialization


def measure_to_json(mu: CylinderMeasure) -> dict:
    """JSON-friendly dict: alphabet, depth, cylinders (word -> mass),
    total_mass.  Masses become floats."""
    return {
        "alphabet": list(mu.alphabet.symbols),
        "depth": mu.depth,
        "cylinders": {
            word_to_str(mu.alphabet, w): float(v) for w, v in sorted(mu.mass.items())
        },
        "total_mass": float(mu.total_mass),
    }


def measure_from_json(payload: Mapping) -> CylinderMeasure:
    alphabet = Alphabet(tuple(payload["alphabet"]))
    depth = int(payload["depth"])
    mass = {
        parse_word(alphabet, key): float(value)
        for key, value in payload["cylinders"].items()
    }
    mu = CylinderMeasure(alphabet, depth, mass)
    declared = float(payload.get("total_mass", mu.total_mass))
    if abs(declared - float(mu.total_mass)) > 1e-9:
        raise ValueError("total_mass does not match the cylinder masses")
    return mu


def measure_to_json_str(mu: CylinderMeasure) -> str:
    return json.dumps(measure_to_json(mu), indent=2, sort_keys=True)
