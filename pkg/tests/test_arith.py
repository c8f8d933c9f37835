import math
import random

import numpy as np
import pytest

from genlab.arith import (
    CapacityError,
    arithmetic_sequence,
    primes_up_to,
    sieve_range,
    summatory,
)

from conftest import naive_liouville, naive_mobius, naive_squarefree


def test_mobius_first_ten():
    seg = sieve_range("mobius", 1, 11)
    assert seg.values.tolist() == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_liouville_first_four():
    # lambda(4) = (-1)^2 = 1
    assert sieve_range("liouville", 1, 5).values.tolist() == [1, -1, -1, 1]


def test_squarefree_is_mobius_squared():
    mob = sieve_range("mobius", 1, 11).values
    sf = sieve_range("squarefree", 1, 11).values
    assert sf.tolist() == [1, 1, 1, 0, 1, 1, 1, 0, 0, 1]
    assert np.array_equal(sf, mob * mob)


@pytest.mark.parametrize(
    "kind,oracle",
    [
        ("mobius", naive_mobius),
        ("liouville", naive_liouville),
        ("squarefree", naive_squarefree),
    ],
)
def test_sieve_matches_trial_division(kind, oracle):
    lo, hi = 1, 5001
    seg = sieve_range(kind, lo, hi)
    for n in range(lo, hi):
        assert seg.value(n) == oracle(n), f"{kind}({n})"


def test_sieve_across_segment_boundaries():
    # small segment size forces several segments
    seg = sieve_range("mobius", 1, 3 * 1024 + 17, segment_size=1024)
    for n in (1023, 1024, 1025, 2048, 3071, 3072):
        assert seg.value(n) == naive_mobius(n)


def test_offset_range_matches_trial_division():
    seg = sieve_range("liouville", 9_999_900, 10_000_000)
    for n in range(9_999_900, 10_000_000):
        assert seg.value(n) == naive_liouville(n)


def test_summatory_examples():
    assert summatory("mobius", 10) == -1
    assert summatory("mobius", 1) == 1
    assert summatory("squarefree", 10) == 7


def test_summatory_matches_cumulative_values():
    vals = sieve_range("liouville", 1, 301).values
    for N in (1, 2, 17, 300):
        assert summatory("liouville", N) == int(vals[:N].sum())


def test_multiplicativity_on_random_coprime_pairs(rng_seed):
    rng = random.Random(rng_seed)
    seg = sieve_range("mobius", 1, 10**6 + 1)
    lam = sieve_range("liouville", 1, 10**6 + 1)
    done = 0
    while done < 1000:
        a = rng.randint(2, 1000)
        b = rng.randint(2, 10**6 // a)
        if math.gcd(a, b) != 1:
            continue
        assert seg.value(a * b) == seg.value(a) * seg.value(b)
        assert lam.value(a * b) == lam.value(a) * lam.value(b)
        done += 1


@pytest.mark.parametrize("kind", ["mobius", "liouville", "squarefree"])
def test_segment_consistency(kind, rng_seed):
    M = 10**5
    full = sieve_range(kind, 1, M + 1)
    rng = random.Random(rng_seed + 1)
    for _ in range(100):
        lo = rng.randint(1, M - 1)
        hi = rng.randint(lo + 1, M + 1)
        part = sieve_range(kind, lo, hi)
        assert np.array_equal(part.values, full.values[lo - 1 : hi - 1])


def test_squarefree_density_near_euler_product():
    N = 10**7
    count = summatory("squarefree", N)
    density = count / N
    product = 1.0
    for p in primes_up_to(10**4):
        product *= 1.0 - 1.0 / (p * p)
    assert abs(density - product) < 1e-3
    # the truncated product is itself within 2e-5 of 6/pi^2
    assert abs(product - 6 / math.pi**2) < 2e-5


def test_capacity_error(monkeypatch):
    monkeypatch.setenv("GENLAB_MAX_N", "1000")
    with pytest.raises(CapacityError):
        sieve_range("mobius", 1, 2000)
    monkeypatch.setenv("GENLAB_MAX_N", "5000")
    assert sieve_range("mobius", 1, 2000).values[0] == 1


def test_bad_ranges_rejected():
    with pytest.raises(ValueError):
        sieve_range("mobius", 0, 10)
    with pytest.raises(ValueError):
        sieve_range("mobius", 10, 10)
    with pytest.raises(ValueError):
        sieve_range("primes", 1, 10)


def test_arithmetic_sequence_matches_sieve():
    x = arithmetic_sequence("mobius")
    seg = sieve_range("mobius", 1, 200_001)
    # spans several cached chunks
    for n in (0, 1, 2, 65535, 65536, 131072, 199_999):
        assert x.symbol_at(n) == seg.value(n + 1)
    assert x.window(0, 5) == (1, -1, -1, 0, -1)
