"""Grid descriptors for the N values at which traces are evaluated.

Descriptor syntax (all bounds inclusive):

* ``pow2:a:b``      -> 2^a, ..., 2^b
* ``pow3:a:b``      -> 3^a, ..., 3^b
* ``pow10:a:b``     -> 10^a, ..., 10^b
* ``geometric:r:lo:hi`` -> lo, then repeated rounding of n*r, capped at hi
* ``1024,2048,...`` -> explicit comma-separated list

Default grids per example merge a geometric fill with the structure
points where the block sequences attain their extreme frequencies
(powers of 2, the square-exponent powers, powers of 3).
"""

from __future__ import annotations

from typing import List, Sequence


def power_grid(base: int, lo_exp: int, hi_exp: int) -> List[int]:
    if lo_exp > hi_exp:
        raise ValueError("empty exponent range")
    return [base**e for e in range(lo_exp, hi_exp + 1)]


def geometric_grid(lo: int, hi: int, ratio: float) -> List[int]:
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    if ratio <= 1.0:
        raise ValueError("ratio must be > 1")
    out = [lo]
    n = lo
    while n < hi:
        n = max(n + 1, int(round(n * ratio)))
        out.append(min(n, hi))
    return sorted(set(out))


def merge_grids(*grids: Sequence[int]) -> List[int]:
    merged = sorted({int(n) for grid in grids for n in grid})
    if not merged:
        raise ValueError("merged grid is empty")
    return merged


def parse_grid(descriptor: str) -> List[int]:
    """Parse a grid descriptor into a strictly increasing list of N."""
    text = descriptor.strip()
    if ":" in text:
        head, *rest = text.split(":")
        if head in ("pow2", "pow3", "pow10"):
            if len(rest) != 2:
                raise ValueError(f"expected {head}:a:b, got {descriptor!r}")
            base = {"pow2": 2, "pow3": 3, "pow10": 10}[head]
            return power_grid(base, int(rest[0]), int(rest[1]))
        if head == "geometric":
            if len(rest) != 3:
                raise ValueError(
                    f"expected geometric:ratio:lo:hi, got {descriptor!r}"
                )
            return geometric_grid(int(rest[1]), int(rest[2]), float(rest[0]))
        raise ValueError(f"unknown grid descriptor {descriptor!r}")
    values = [int(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError("empty grid")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("explicit grid must be strictly increasing")
    return values


def square_exponent_points(k_min: int, k_max: int) -> List[int]:
    """The block boundaries 2^(k^2-1) and 2^(k^2) for k = k_min..k_max."""
    out = []
    for k in range(k_min, k_max + 1):
        out.append(2 ** (k * k - 1))
        out.append(2 ** (k * k))
    return out


def default_density_grid(name: str) -> List[int]:
    """Grids used by the density reports for the built-in examples."""
    if name == "example1":
        return power_grid(2, 10, 24)
    if name == "example2":
        return merge_grids(
            square_exponent_points(2, 5), geometric_grid(16, 2**25, 1.1)
        )
    if name == "example3":
        return power_grid(3, 4, 12)
    raise ValueError(f"no default density grid for {name!r}")


def default_limitset_grid(name: str) -> List[int]:
    """Grids used by the limit-set estimates for the built-in examples.

    These reach much higher N than the density grids: block statistics
    cost O(log N), and the harmonic traces approach their limit only
    like 1/log N, so convergence diagnostics (shift invariance of the
    representatives in particular) need large N to be meaningful.
    """
    if name == "example1":
        return merge_grids(power_grid(2, 10, 60), geometric_grid(2**10, 2**60, 1.15))
    if name == "example2":
        return merge_grids(
            square_exponent_points(2, 9), geometric_grid(2**10, 2**81, 1.2)
        )
    if name == "example3":
        return merge_grids(power_grid(3, 4, 24), geometric_grid(3**4, 3**24, 1.15))
    raise ValueError(f"no default limit-set grid for {name!r}")
