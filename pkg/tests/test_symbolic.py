import concurrent.futures

import numpy as np
import pytest

from genlab.symbolic import (
    Alphabet,
    ArraySequence,
    ConstantSequence,
    example_sequence,
    parse_word,
    window,
    word_to_str,
)

from conftest import brute_symbols


def test_example1_first_symbols():
    x = example_sequence("example1")
    assert [x.symbol_at(n) for n in range(7)] == [0, 1, 1, 0, 0, 0, 0]


def test_example3_first_symbols():
    x = example_sequence("example3")
    assert [x.symbol_at(n) for n in range(8)] == [0, 0, 1, 1, 1, 1, 1, 1]


def test_example2_first_symbols_against_defining_inequality():
    x = example_sequence("example2")
    # direct evaluation of 2^(k^2-1) <= m < 2^(k^2) per index
    def direct(m):
        k = 1
        while 2 ** (k * k - 1) <= m:
            if m < 2 ** (k * k):
                return 1
            k += 1
        return 0

    got = [x.symbol_at(n) for n in range(64)]
    assert got == [direct(n + 1) for n in range(64)]
    assert got[:4] == [1, 0, 0, 0]


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_examples_match_power_table_oracle(name):
    x = example_sequence(name)
    count = 4096
    expected = brute_symbols(name, count)
    got = np.array([x.symbol_at(n) for n in range(count)])
    assert np.array_equal(got, expected)


def test_window_examples():
    x1 = example_sequence("example1")
    assert window(x1, 0, 3) == (0, 1, 1)
    assert window(x1, 5, 1) == (x1.symbol_at(5),)
    x3 = example_sequence("example3")
    assert window(x3, 2, 6) == (1, 1, 1, 1, 1, 1)


def test_window_rejects_bad_arguments():
    x = example_sequence("example1")
    with pytest.raises(ValueError):
        window(x, 0, 0)
    with pytest.raises(ValueError):
        window(x, -1, 2)


def test_unknown_example_rejected():
    with pytest.raises(ValueError):
        example_sequence("example9")


def test_example1_zero_blocks_constant():
    # every block [2^(2k), 2^(2k+1)) carries the symbol 0, k <= 12;
    # checked exhaustively against the vectorized power-table oracle
    limit = 2**25
    s = brute_symbols("example1", limit)
    for k in range(13):
        lo, hi = 4**k, 2 * 4**k
        assert not s[lo - 1 : min(hi, limit + 1) - 1].any()


def test_example3_changes_only_at_powers():
    x = example_sequence("example3")
    limit = 3**9
    s = [x.symbol_at(n) for n in range(limit)]
    powers = {3**m for m in range(1, 12)}
    for n in range(1, limit):
        if s[n] != s[n - 1]:
            assert n + 1 in powers


def test_runs_cover_positions_consistently():
    for name in ("example1", "example2", "example3"):
        x = example_sequence(name)
        limit = 2000
        covered = []
        for start, end, symbol in x.runs(limit):
            assert 0 <= start < end <= limit
            for p in range(start, end):
                covered.append(p)
                assert x.symbol_at(p) == symbol
        assert covered == list(range(limit))


def test_concurrent_evaluation_deterministic():
    x = example_sequence("example3")
    indices = list(range(0, 3**9, 7))
    expected = [x.symbol_at(n) for n in indices]
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        futures = [pool.submit(lambda: [x.symbol_at(n) for n in indices]) for _ in range(8)]
        for fut in futures:
            assert fut.result() == expected


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(())
    with pytest.raises(ValueError):
        Alphabet((0, 0))
    a = Alphabet((0, 1, 2))
    assert a.index(2) == 2 and len(a) == 3


def test_word_round_trip():
    a = Alphabet((0, 1, 2))
    assert word_to_str(a, (0, 2, 1)) == "021"
    assert parse_word(a, "021") == (0, 2, 1)
    signs = Alphabet((-1, 0, 1))
    assert word_to_str(signs, (-1, 1)) == "-1,1"
    assert parse_word(signs, "-1,1") == (-1, 1)
    with pytest.raises(ValueError):
        parse_word(a, "03")


def test_constant_and_array_sequences():
    c = ConstantSequence(0, Alphabet((0, 1)))
    assert window(c, 5, 3) == (0, 0, 0)
    arr = ArraySequence("arr", Alphabet((0, 1)), [0, 1, 1])
    assert arr.symbol_at(2) == 1
    with pytest.raises(IndexError):
        arr.symbol_at(3)
    with pytest.raises(ValueError):
        ArraySequence("bad", Alphabet((0, 1)), [0, 2])
