"""Moment and cumulant functionals on words over a two-faced alphabet.

Words are tuples of variable names; the side of each letter is fixed by the
alphabet, so the side pattern of a word (its chi) is implicit. Tables are
dense up to a degree cap: a missing entry is an error, never a silent zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceededError, MissingEntryError, ShapeMismatchError
from .partitions import (
    LEFT,
    RIGHT,
    BNCPartition,
    ChiShape,
    enumerate_nc,
    mobius_nc_one,
)

Word = tuple[str, ...]


@dataclass(frozen=True)
class Alphabet:
    """Ordered left and right variable names; names unique across sides."""

    left: tuple[str, ...]
    right: tuple[str, ...] = ()

    def __post_init__(self):
        names = self.left + self.right
        if len(set(names)) != len(names):
            raise ShapeMismatchError(f"duplicate variable names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return self.left + self.right

    def side_of(self, name: str) -> str:
        if name in self.left:
            return LEFT
        if name in self.right:
            return RIGHT
        raise MissingEntryError(f"unknown variable {name!r}")

    def sides_of(self, word: Word) -> tuple[str, ...]:
        return tuple(self.side_of(x) for x in word)

    def chi_of(self, word: Word) -> ChiShape:
        return ChiShape(self.sides_of(word))


def all_words(alphabet: Alphabet, max_len: int):
    """Every nonempty word of length <= max_len, by (length, position)."""
    for n in range(1, max_len + 1):
        yield from itertools.product(alphabet.names, repeat=n)


class _WordTable:
    def __init__(self, alphabet: Alphabet, degree_cap: int, values: dict[Word, float]):
        self.alphabet = alphabet
        self.degree_cap = degree_cap
        self.values = dict(values)
        for w in all_words(alphabet, degree_cap):
            if w not in self.values:
                raise MissingEntryError(
                    f"dense table missing entry for word {w!r}"
                )

    def __call__(self, word: Word) -> float:
        word = tuple(word)
        if not word:
            return 1.0
        if len(word) > self.degree_cap:
            raise CapExceededError(
                f"word length {len(word)} exceeds cap {self.degree_cap}"
            )
        try:
            return self.values[word]
        except KeyError:
            raise MissingEntryError(f"no entry for word {word!r}") from None

    @classmethod
    def from_function(cls, alphabet: Alphabet, degree_cap: int, fn):
        return cls(
            alphabet,
            degree_cap,
            {w: float(fn(w)) for w in all_words(alphabet, degree_cap)},
        )


class MomentFunctional(_WordTable):
    """phi: words -> reals, unit on the empty word."""


class CumulantTable(_WordTable):
    """kappa_chi: words -> reals (chi implicit in the word's side tags)."""

    def add(self, other: "CumulantTable") -> "CumulantTable":
        if other.alphabet != self.alphabet or other.degree_cap != self.degree_cap:
            raise ShapeMismatchError("cumulant tables on different alphabets/caps")
        return CumulantTable(
            self.alphabet,
            self.degree_cap,
            {w: v + other.values[w] for w, v in self.values.items()},
        )

    def scale(self, t: float) -> "CumulantTable":
        return CumulantTable(
            self.alphabet, self.degree_cap, {w: t * v for w, v in self.values.items()}
        )


@lru_cache(maxsize=None)
def _bnc_expansion(sides: tuple[str, ...]):
    """For chi given by `sides`: all sigma in BNC(n, chi) as 0-based position
    blocks, paired with mu_n(s_chi^{-1} o sigma, 1_n)."""
    shape = ChiShape(sides)
    out = []
    for pi in enumerate_nc(len(sides)):
        sigma = shape.apply(pi)
        blocks = tuple(tuple(x - 1 for x in b) for b in sigma.blocks)
        out.append((blocks, mobius_nc_one(pi)))
    return tuple(out)


def phi_pi(phi, word: Word, pi) -> float:
    """Product over blocks of phi applied to the block subword (positions
    ascending). `pi` may be a SetPartition or a BNCPartition."""
    word = tuple(word)
    blocks = pi.partition.blocks if isinstance(pi, BNCPartition) else pi.blocks
    if sum(len(b) for b in blocks) != len(word):
        raise ShapeMismatchError(
            f"partition of {sum(len(b) for b in blocks)} vs word length {len(word)}"
        )
    out = 1.0
    for b in blocks:
        out *= phi(tuple(word[i - 1] for i in b))
    return out


def kappa_chi_pi(kappa, word: Word, sigma) -> float:
    """Product over blocks of kappa applied to the block subwords."""
    return phi_pi(kappa, word, sigma)


def moment_of_word(kappa_fn, sides: tuple[str, ...], word: Word) -> float:
    """phi(word) = sum over BNC(n, chi) of the kappa block products, with
    kappa given as a callable on subwords."""
    total = 0.0
    for blocks, _ in _bnc_expansion(sides):
        term = 1.0
        for b in blocks:
            term *= kappa_fn(tuple(word[i] for i in b))
            if term == 0.0:
                break
        total += term
    return total


def cumulant_of_word(phi, sides: tuple[str, ...], word: Word) -> float:
    """kappa_chi(word) by Mobius inversion over BNC(n, chi)."""
    total = 0.0
    for blocks, mu in _bnc_expansion(sides):
        term = float(mu)
        for b in blocks:
            term *= phi(tuple(word[i] for i in b))
        total += term
    return total


def kappa_from_moments(phi: MomentFunctional) -> CumulantTable:
    """Mobius inversion: every word's bi-free cumulant from its moments."""
    alphabet = phi.alphabet
    values = {}
    for w in all_words(alphabet, phi.degree_cap):
        values[w] = cumulant_of_word(phi, alphabet.sides_of(w), w)
    return CumulantTable(alphabet, phi.degree_cap, values)


def moments_from_kappa(kappa: CumulantTable) -> MomentFunctional:
    """The inverse transform: moments as BNC sums of cumulant products."""
    alphabet = kappa.alphabet
    values = {}
    for w in all_words(alphabet, kappa.degree_cap):
        values[w] = moment_of_word(kappa, alphabet.sides_of(w), w)
    return MomentFunctional(alphabet, kappa.degree_cap, values)


def reorder_by_s_chi(phi: MomentFunctional, word: Word) -> float:
    """Single-face cumulant kappa_n of the s_chi-reordered word.

    Cross-check oracle: on families where left and right letters commute this
    equals the bi-free cumulant of the original word.
    """
    word = tuple(word)
    s = phi.alphabet.chi_of(word).s_chi
    reordered = tuple(word[k - 1] for k in s)
    return cumulant_of_word(phi, (LEFT,) * len(word), reordered)
