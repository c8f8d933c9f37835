"""Finite alphabets and lazily evaluated symbolic sequences.

A sequence is a pure, total function from the index n >= 0 to a symbol
of a fixed finite alphabet.  The built-in power-block sequences
(``example1``, ``example2``, ``example3``) are constant on index blocks
``base**i <= n+1 < base**(i+1)`` and expose that run structure, so
window statistics over the first N positions can be computed from
O(log N) block boundaries instead of N symbol evaluations.

Indexing convention: positions n are 0-based; the block inequalities
are stated for m = n + 1, so position 0 corresponds to m = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence, Tuple

Symbol = int
Word = Tuple[Symbol, ...]
Run = Tuple[int, int, Symbol]  # positions [start, end) carrying one symbol


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of distinct symbols."""

    symbols: Tuple[Symbol, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet symbols must be distinct")
        object.__setattr__(self, "symbols", symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols

    def index(self, symbol) -> int:
        return self.symbols.index(symbol)

    def labels(self) -> Tuple[str, ...]:
        return tuple(str(s) for s in self.symbols)


BINARY = Alphabet((0, 1))
TERNARY = Alphabet((0, 1, 2))
SIGNS = Alphabet((-1, 0, 1))


def word_to_str(alphabet: Alphabet, word: Word) -> str:
    """Serialize a word as a symbol string.

    Single-character symbol labels are concatenated; otherwise symbols
    are comma separated (needed e.g. for the {-1,0,1} alphabet).
    """
    labels = [str(s) for s in word]
    if all(len(l) == 1 for l in alphabet.labels()):
        return "".join(labels)
    return ",".join(labels)


def parse_word(alphabet: Alphabet, text: str) -> Word:
    """Inverse of :func:`word_to_str` for the given alphabet."""
    by_label = {str(s): s for s in alphabet.symbols}
    if "," in text or any(len(l) != 1 for l in alphabet.labels()):
        parts = [p for p in text.split(",") if p != ""]
    else:
        parts = list(text)
    try:
        return tuple(by_label[p] for p in parts)
    except KeyError as exc:
        raise ValueError(f"symbol {exc.args[0]!r} not in alphabet") from None


class SymbolicSequence:
    """Deterministic map from index n >= 0 to a symbol of ``alphabet``.

    Subclasses implement :meth:`symbol_at`; evaluation must be pure, so
    instances are safe to share across threads.
    """

    def __init__(self, name: str, alphabet: Alphabet):
        self.name = name
        self.alphabet = alphabet

    def symbol_at(self, n: int) -> Symbol:
        raise NotImplementedError

    def window(self, start: int, length: int) -> Word:
        return window(self, start, length)

    def runs(self, limit: int) -> Optional[Iterator[Run]]:
        """Constant runs partitioning positions [0, limit), if known.

        Returns None when the sequence has no usable run structure;
        callers then fall back to per-index evaluation.
        """
        return None

    def __repr__(self):
        return f"<{type(self).__name__} {self.name!r}>"


def window(x: SymbolicSequence, start: int, length: int) -> Word:
    """The word x_start ... x_{start+length-1}."""
    if length < 1:
        raise ValueError("window length must be >= 1")
    if start < 0:
        raise ValueError("window start must be >= 0")
    return tuple(x.symbol_at(start + i) for i in range(length))


class FunctionSequence(SymbolicSequence):
    """Sequence backed by an arbitrary index -> symbol rule."""

    def __init__(self, name: str, alphabet: Alphabet, rule: Callable[[int], Symbol]):
        super().__init__(name, alphabet)
        self._rule = rule

    def symbol_at(self, n: int) -> Symbol:
        if n < 0:
            raise ValueError("index must be >= 0")
        return self._rule(n)


class ConstantSequence(SymbolicSequence):
    def __init__(self, symbol: Symbol, alphabet: Optional[Alphabet] = None):
        if alphabet is None:
            alphabet = Alphabet((symbol,))
        if symbol not in alphabet:
            raise ValueError("symbol not in alphabet")
        super().__init__(f"constant{symbol}", alphabet)
        self.symbol = symbol

    def symbol_at(self, n: int) -> Symbol:
        if n < 0:
            raise ValueError("index must be >= 0")
        return self.symbol

    def runs(self, limit: int):
        def gen():
            if limit > 0:
                yield (0, limit, self.symbol)

        return gen()


class PeriodicSequence(SymbolicSequence):
    def __init__(self, word: Sequence[Symbol], alphabet: Optional[Alphabet] = None):
        word = tuple(word)
        if not word:
            raise ValueError("period must be nonempty")
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted(set(word))))
        super().__init__("periodic:" + "".join(map(str, word)), alphabet)
        self.period = word

    def symbol_at(self, n: int) -> Symbol:
        if n < 0:
            raise ValueError("index must be >= 0")
        return self.period[n % len(self.period)]


class ArraySequence(SymbolicSequence):
    """Sequence backed by a finite materialized array.

    Only defined on [0, len(values)); indexing past the end raises.
    """

    def __init__(self, name: str, alphabet: Alphabet, values: Sequence[Symbol]):
        super().__init__(name, alphabet)
        self.values = tuple(values)
        for v in self.values:
            if v not in alphabet:
                raise ValueError(f"value {v!r} not in alphabet")

    def symbol_at(self, n: int) -> Symbol:
        if n < 0:
            raise ValueError("index must be >= 0")
        if n >= len(self.values):
            raise IndexError(f"{self.name} holds only {len(self.values)} symbols")
        return self.values[n]


class PowerBlockSequence(SymbolicSequence):
    """Sequence constant on the blocks base**i <= n+1 < base**(i+1).

    ``block_symbol(i)`` gives the symbol of block i >= 0.  Evaluation is
    O(log n) and stateless, hence thread safe.
    """

    def __init__(
        self,
        name: str,
        alphabet: Alphabet,
        base: int,
        block_symbol: Callable[[int], Symbol],
    ):
        if base < 2:
            raise ValueError("base must be >= 2")
        super().__init__(name, alphabet)
        self.base = base
        self.block_symbol = block_symbol

    def _block_index(self, m: int) -> int:
        # largest i with base**i <= m
        if self.base == 2:
            return m.bit_length() - 1
        i, p = 0, 1
        while p * self.base <= m:
            p *= self.base
            i += 1
        return i

    def symbol_at(self, n: int) -> Symbol:
        if n < 0:
            raise ValueError("index must be >= 0")
        return self.block_symbol(self._block_index(n + 1))

    def runs(self, limit: int):
        def gen():
            i, p = 0, 1  # block i covers positions [p - 1, p*base - 1)
            while p - 1 < limit:
                start = p - 1
                end = min(p * self.base - 1, limit)
                yield (start, end, self.block_symbol(i))
                p *= self.base
                i += 1

        return gen()


def _example1_block(i: int) -> Symbol:
    # blocks [2^(2k), 2^(2k+1)) carry 0, blocks [2^(2k-1), 2^(2k)) carry 1
    return 0 if i % 2 == 0 else 1


def _example2_block(i: int) -> Symbol:
    # symbol 1 exactly on blocks [2^(k^2-1), 2^(k^2)), i.e. i + 1 a perfect square
    r = math.isqrt(i + 1)
    return 1 if r * r == i + 1 else 0


def _example3_block(i: int) -> Symbol:
    # blocks cycle 0,1,2 with lengths 2*3^i
    return i % 3


_EXAMPLES = {
    "example1": lambda: PowerBlockSequence("example1", BINARY, 2, _example1_block),
    "example2": lambda: PowerBlockSequence("example2", BINARY, 2, _example2_block),
    "example3": lambda: PowerBlockSequence("example3", TERNARY, 3, _example3_block),
}

EXAMPLE_NAMES = tuple(sorted(_EXAMPLES))


def example_sequence(name: str) -> PowerBlockSequence:
    """One of the three built-in power-block sequences.

    * ``example1``: over {0,1}, symbol 0 iff 2^(2k) <= n+1 < 2^(2k+1).
      Cesaro frequencies of "1" oscillate over [1/3, 2/3] while the
      harmonic frequency converges to 1/2.
    * ``example2``: over {0,1}, symbol 1 iff 2^(k^2-1) <= n+1 < 2^(k^2).
      Upper Cesaro density of "1" is 1/2 but its harmonic density is 0.
    * ``example3``: over {0,1,2}, blocks of 0s, 1s, 2s with lengths
      2*3^i cyclically.  Harmonic averages converge to the uniform mix
      of the three fixed points; Cesaro limit points stay away from it.
    """
    try:
        factory = _EXAMPLES[name]
    except KeyError:
        raise ValueError(
            f"unknown example {name!r}; expected one of {', '.join(EXAMPLE_NAMES)}"
        ) from None
    return factory()
