import random
from fractions import Fraction

import pytest

from genlab.measures import (
    CylinderMeasure,
    MetricBasis,
    basis_words,
    combine,
    dirac,
    hull_distance,
    marginal_drop_first,
    max_basis_index,
    measure_from_json,
    measure_to_json,
    metric,
    restrict,
    tv_distance,
)
from genlab.symbolic import Alphabet, BINARY, TERNARY


def random_measure(rng, alphabet, depth, total=None):
    words = basis_words(alphabet, max_basis_index(alphabet, depth))
    words = [w for w in words if len(w) == depth]
    mass = {w: Fraction(rng.randint(0, 20), 20) for w in words}
    mu = CylinderMeasure(alphabet, depth, mass)
    if total is not None and mu.total_mass > 0:
        mu = mu.scaled(Fraction(total) / mu.total_mass)
    return mu


def test_basis_enumeration_order():
    assert basis_words(BINARY, 6) == [
        (0,),
        (1,),
        (0, 0),
        (0, 1),
        (1, 0),
        (1, 1),
    ]
    assert max_basis_index(TERNARY, 2) == 12
    basis = MetricBasis(BINARY, 4)
    assert basis.weight(3) == Fraction(1, 8)
    assert len(basis.words) == 4


def test_metric_identity_and_example():
    d0, d1 = dirac(BINARY, 0), dirac(BINARY, 1)
    assert metric(d0, d0, 2)[0] == 0
    dist, bound = metric(d0, d1, 2)
    assert dist == Fraction(3, 4)
    assert bound == Fraction(1, 2)  # 2^(1-J) * max mass with J=2


def test_metric_homogeneity_exact(rng_seed):
    rng = random.Random(rng_seed)
    for _ in range(20):
        mu = random_measure(rng, BINARY, 2)
        nu = random_measure(rng, BINARY, 2)
        alpha = Fraction(rng.randint(0, 8), 8)
        lhs = metric(mu.scaled(alpha), nu.scaled(alpha), 4)[0]
        rhs = alpha * metric(mu, nu, 4)[0]
        assert lhs == rhs


def test_metric_rejects_deep_index_and_alphabet_mismatch():
    d0 = dirac(BINARY, 0)
    with pytest.raises(ValueError):
        metric(d0, dirac(BINARY, 1), 3)  # J=3 needs depth-2 cylinders
    with pytest.raises(ValueError):
        metric(d0, dirac(TERNARY, 0), 1)


def test_metric_zero_implies_equal_masses(rng_seed):
    rng = random.Random(rng_seed + 2)
    for _ in range(20):
        mu = random_measure(rng, BINARY, 2)
        nu = random_measure(rng, BINARY, 2)
        J = max_basis_index(BINARY, 2)
        if metric(mu, nu, J)[0] == 0:
            assert mu == nu


def test_combine_examples():
    d0, d1 = dirac(BINARY, 0), dirac(BINARY, 1)
    mid = combine([Fraction(1, 2), Fraction(1, 2)], [d0, d1])
    assert mid.mass_of((0,)) == Fraction(1, 2)
    assert mid.mass_of((1,)) == Fraction(1, 2)
    assert combine([1], [d0]) == d0
    third = Fraction(1, 3)
    uniform = combine(
        [third, third, third],
        [dirac(TERNARY, 0), dirac(TERNARY, 1), dirac(TERNARY, 2)],
    )
    assert uniform.mass_of((2,)) == third and uniform.total_mass == 1


def test_combine_validation():
    d0, d1 = dirac(BINARY, 0), dirac(BINARY, 1)
    with pytest.raises(ValueError):
        combine([1], [d0, d1])
    with pytest.raises(ValueError):
        combine([-1, 1], [d0, d1])
    with pytest.raises(ValueError):
        combine([2, 1], [d0, d1])  # total mass above 2
    with pytest.raises(ValueError):
        combine([1, 1], [d0, dirac(TERNARY, 0)])


def test_restrict_identities():
    word_measure = CylinderMeasure(BINARY, 2, {(0, 1): Fraction(1)})
    assert restrict(word_measure, 2) == word_measure
    r = restrict(word_measure, 1)
    assert r.mass_of((0,)) == 1 and r.depth == 1
    assert r.total_mass == word_measure.total_mass
    with pytest.raises(ValueError):
        restrict(word_measure, 3)


def test_restrict_preserves_total_mass(rng_seed):
    rng = random.Random(rng_seed + 3)
    mu = random_measure(rng, TERNARY, 3)
    assert restrict(mu, 1).total_mass == mu.total_mass


def test_marginal_drop_first():
    mu = CylinderMeasure(BINARY, 2, {(0, 1): Fraction(1, 2), (1, 1): Fraction(1, 2)})
    m = marginal_drop_first(mu)
    assert m.mass_of((1,)) == 1
    assert tv_distance(m, restrict(mu, 1)) == pytest.approx(0.5)


def test_negative_mass_rejected_unless_signed():
    with pytest.raises(ValueError):
        CylinderMeasure(BINARY, 1, {(0,): -1})
    signed = CylinderMeasure(BINARY, 1, {(0,): -1, (1,): 1}, signed=True)
    assert signed.total_mass == 0


def test_metric_axioms_random(rng_seed):
    rng = random.Random(rng_seed + 4)
    J = 6
    for _ in range(50):
        mu = random_measure(rng, BINARY, 2)
        nu = random_measure(rng, BINARY, 2)
        rho = random_measure(rng, BINARY, 2)
        d_mn = metric(mu, nu, J)[0]
        assert d_mn == metric(nu, mu, J)[0]  # symmetry exact
        assert d_mn >= 0
        # triangle inequality, exact in rationals
        assert d_mn <= metric(mu, rho, J)[0] + metric(rho, nu, J)[0]


def test_metric_convexity_random(rng_seed):
    rng = random.Random(rng_seed + 5)
    J = 6
    for _ in range(30):
        mus = [random_measure(rng, BINARY, 2) for _ in range(3)]
        nus = [random_measure(rng, BINARY, 2) for _ in range(3)]
        raw = [Fraction(rng.randint(1, 10)) for _ in range(3)]
        total = sum(raw)
        weights = [w / total for w in raw]
        lhs = metric(combine(weights, mus), combine(weights, nus), J)[0]
        rhs = sum(w * metric(m, n, J)[0] for w, m, n in zip(weights, mus, nus))
        assert lhs <= rhs


def test_hull_distance_member_and_midpoint():
    d0, d1 = dirac(BINARY, 0), dirac(BINARY, 1)
    member = hull_distance(d0, [d0, d1], 2)
    assert member.distance <= 1e-9
    mid = combine([Fraction(1, 2), Fraction(1, 2)], [d0, d1])
    res = hull_distance(mid, [d0, d1], 2)
    assert res.distance <= 1e-6
    single = hull_distance(d0, [d1], 2)
    assert single.distance == pytest.approx(float(metric(d0, d1, 2)[0]))
    assert single.gap == 0.0


def test_hull_distance_monotone_in_candidates(rng_seed):
    rng = random.Random(rng_seed + 6)
    J = 6
    for _ in range(10):
        mu = random_measure(rng, BINARY, 2, total=1)
        candidates = [random_measure(rng, BINARY, 2, total=1) for _ in range(6)]
        prev = None
        for m in range(1, 7):
            value = hull_distance(mu, candidates[:m], J).distance
            if prev is not None:
                assert value <= prev + 1e-9
            prev = value


def test_hull_distance_upper_bounds_known_combination(rng_seed):
    rng = random.Random(rng_seed + 7)
    J = 6
    for _ in range(10):
        candidates = [random_measure(rng, BINARY, 2, total=1) for _ in range(4)]
        raw = [Fraction(rng.randint(0, 5)) for _ in range(4)]
        if sum(raw) == 0:
            continue
        weights = [w / sum(raw) for w in raw]
        mu = combine(weights, candidates)
        assert hull_distance(mu, candidates, J).distance <= 1e-7


def test_hull_distance_validation():
    d0 = dirac(BINARY, 0)
    with pytest.raises(ValueError):
        hull_distance(d0, [], 2)
    with pytest.raises(ValueError):
        hull_distance(d0, [d0.scaled(Fraction(1, 2))], 2)  # unequal masses


def test_json_round_trip():
    mu = CylinderMeasure(
        BINARY, 2, {(0, 1): 0.25, (1, 1): 0.75}
    )
    payload = measure_to_json(mu)
    assert payload["depth"] == 2
    assert payload["cylinders"] == {"01": 0.25, "11": 0.75}
    back = measure_from_json(payload)
    assert back == mu.as_float()
    signs = Alphabet((-1, 0, 1))
    nu = CylinderMeasure(signs, 1, {(-1,): 0.5, (1,): 0.5})
    again = measure_from_json(measure_to_json(nu))
    assert again.mass_of((-1,)) == 0.5
