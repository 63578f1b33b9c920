"""Jumpy words over {0, ..., n-1}, their basins, and Type-II index bounds.

A basin of a word ``l_1 ... l_m`` is a subword ``l_i ... l_j`` with
``1 < i <= j < m`` whose flanking letters agree, ``l_{i-1} = l_{j+1} = k``,
and strictly exceed every letter in between. Positions are 1-based, as in
the usual statement of the lemma.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, LengthMismatch

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class Word:
    letters: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))
        if self.n < 2:
            raise ValueError("alphabet size must be at least 2")
        if not self.letters:
            raise ValueError("words are non-empty")
        bad = [a for a in self.letters if not 0 <= a < self.n]
        if bad:
            raise ValueError(f"letters {bad} are outside 0..{self.n - 1}")

    @classmethod
    def parse(cls, text: str, n: int) -> "Word":
        """Digits, optionally separated by spaces or commas ("0101", "0 1 0 1")."""
        s = text.replace(",", " ").strip()
        parts = s.split() if " " in s else list(s)
        return cls(tuple(int(p) for p in parts), n)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        sep = "" if self.n <= 10 else " "
        return sep.join(map(str, self.letters))


@dataclass(frozen=True)
class Basin:
    i: int
    j: int
    k: int


def is_jumpy(w: Word) -> bool:
    return all(a != b for a, b in zip(w.letters, w.letters[1:]))


def all_basins(w: Word) -> list[Basin]:
    """Every basin, ordered by right end.

    For a fixed right end the left flank is forced: it is the nearest letter to
    the left that is at least the right flank. So there is at most one basin
    per right end.
    """
    L = w.letters
    out = []
    for right in range(2, len(L)):  # 0-based index of the right flank
        k = L[right]
        left = right - 1
        while left >= 0 and L[left] < k:
            left -= 1
        if left >= 0 and left < right - 1 and L[left] == k:
            out.append(Basin(left + 2, right, k))
    return out


def find_basin(w: Word) -> Optional[Basin]:
    """The basin that closes first; it is also the innermost one there."""
    basins = all_basins(w)
    return basins[0] if basins else None


def count_disjoint_basins(w: Word) -> int:
    """Maximum number of basins with pairwise disjoint spans [i, j].

    Greedy by earliest right end, which is optimal for interval scheduling.
    Flanks may be shared between neighbouring basins.
    """
    count, last = 0, 0
    for b in all_basins(w):
        if b.i > last:
            count += 1
            last = b.j
    return count


# -- the lemma ------------------------------------------------------------------


@dataclass
class LemmaReport:
    n: int
    mode: str
    length: int
    words_checked: int
    counterexamples: list = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def jumpy_count(n: int, length: int) -> int:
    return n * (n - 1) ** (length - 1)


def random_jumpy_words(n: int, length: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform jumpy words as rows of an integer array."""
    first = rng.integers(0, n, size=(count, 1))
    steps = rng.integers(1, n, size=(count, length - 1))
    return np.concatenate([first, first + np.cumsum(steps, axis=1)], axis=1) % n


def has_basin_many(words: np.ndarray) -> np.ndarray:
    """Row-wise basin test, vectorized over the pairs of flank positions."""
    count, length = words.shape
    found = np.zeros(count, dtype=bool)
    for left in range(length - 2):
        inner_max = np.full(count, -1, dtype=words.dtype)
        for right in range(left + 2, length):
            inner_max = np.maximum(inner_max, words[:, right - 1])
            found |= (words[:, left] == words[:, right]) & (inner_max < words[:, right])
    return found


def verify_word_lemma(n: int, mode: str = "exhaustive", samples: int = 1_000_000,
                      seed: int = 0, cap: int = DEFAULT_CAP) -> LemmaReport:
    """Check that jumpy words of length 2**n contain a basin.

    ``exhaustive`` walks every jumpy word with the scalar basin search;
    ``randomized`` draws ``samples`` uniform jumpy words and tests them with
    the vectorized search.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    length = 2 ** n
    if mode == "exhaustive":
        total = jumpy_count(n, length)
        if total > cap:
            raise BudgetExceeded(f"{total} jumpy words of length {length} exceed the cap {cap}")
        bad = []
        for first in range(n):
            for steps in itertools.product(range(1, n), repeat=length - 1):
                letters = [first]
                for s in steps:
                    letters.append((letters[-1] + s) % n)
                w = Word(tuple(letters), n)
                if find_basin(w) is None:
                    bad.append(w)
        return LemmaReport(n, mode, length, total, bad)
    if mode == "randomized":
        rng = np.random.default_rng(seed)
        bad = []
        done = 0
        chunk = 200_000
        while done < samples:
            size = min(chunk, samples - done)
            words = random_jumpy_words(n, length, size, rng)
            for row in words[~has_basin_many(words)]:
                bad.append(Word(tuple(row), n))
            done += size
        return LemmaReport(n, mode, length, samples, bad, seed)
    raise ValueError(f"unknown mode {mode!r}")


# -- index bounds ---------------------------------------------------------------


def c_m(m: int, n: int) -> int:
    if m < 1 or n < 2:
        raise ValueError("need m >= 1 and n >= 2")
    return max(1, m // 2 ** n)


def type2_lower_bound(w: Word, n: int, N1: float, N2: float, T: float,
                      segment_actions: Sequence[float]) -> float:
    """Certified lower bound on the index of a Type-II orbit with word ``w``.

    ``N1 * sum(tau_j) + N2 * c_m(len(w), n) * T - 4 * len(w) * n``; each
    crossing between handles may cost up to 2n on either side.
    """
    if not is_jumpy(w):
        raise ValueError(f"word {w} is not jumpy")
    if len(segment_actions) != len(w) - 1:
        raise LengthMismatch(
            f"word of length {len(w)} needs {len(w) - 1} segment actions, got {len(segment_actions)}"
        )
    m = len(w)
    return N1 * float(sum(segment_actions)) + N2 * c_m(m, n) * T - 4 * m * n
