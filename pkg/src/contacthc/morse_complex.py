"""Morse chain complexes of subcritical Stein domains, with exact Betti numbers.

A boundary entry ``(p, q) -> a`` means that ``p`` appears with coefficient
``a`` in the boundary of ``q``, where ``index(q) = index(p) + 1``.
Homology is taken over the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidData


@dataclass(frozen=True)
class CriticalPoint:
    id: str
    index: int
    h_value: Optional[Fraction] = None

    def __post_init__(self):
        if self.h_value is not None and not isinstance(self.h_value, Fraction):
            object.__setattr__(self, "h_value", Fraction(self.h_value))


@dataclass(frozen=True)
class MorseData:
    n: int
    critical_points: tuple
    boundary: dict = field(default_factory=dict)
    # several minima are allowed only on request
    single_minimum: bool = True

    def __post_init__(self):
        object.__setattr__(self, "critical_points", tuple(self.critical_points))
        object.__setattr__(self, "boundary", {tuple(k): int(v) for k, v in dict(self.boundary).items()})

    def points_of_index(self, j: int) -> list[CriticalPoint]:
        return [p for p in self.critical_points if p.index == j]

    def count(self, j: int) -> int:
        return sum(1 for p in self.critical_points if p.index == j)

    @property
    def top_index(self) -> int:
        return max((p.index for p in self.critical_points), default=-1)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class GradedRanks:
    ranks: dict

    def __getitem__(self, degree: int) -> int:
        return self.ranks.get(degree, 0)

    def window(self, lo: int, hi: int) -> dict:
        return {d: self[d] for d in range(lo, hi + 1)}

    def nonzero(self) -> dict:
        return {d: r for d, r in sorted(self.ranks.items()) if r}


def boundary_matrix(d: MorseData, j: int) -> list[list[int]]:
    """Matrix of the boundary from index j to index j-1 (rows: index j-1, columns: index j)."""
    rows = d.points_of_index(j - 1)
    cols = d.points_of_index(j)
    return [[d.boundary.get((p.id, q.id), 0) for q in cols] for p in rows]


def _matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[r][t] * B[t][c] for t in range(inner)) for c in range(cols)] for r in range(len(A))]


def exact_rank(M: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return 0
    # clear denominators row by row; this does not change the rank
    ints = []
    for r in rows:
        den = lcm(*(Fraction(x).denominator for x in r))
        ints.append([int(Fraction(x) * den) for x in r])
    A = ints
    m, ncols = len(A), len(A[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, m) if A[r][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        p = A[rank][col]
        for r in range(rank + 1, m):
            a = A[r][col]
            A[r] = [(p * A[r][c] - a * A[rank][c]) // prev for c in range(ncols)]
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def validate(d: MorseData) -> list[Violation]:
    """Every broken invariant; an empty list means the data are usable."""
    out: list[Violation] = []
    if d.n < 2:
        out.append(Violation("Dimension", f"n = {d.n} < 2"))
    ids = [p.id for p in d.critical_points]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        out.append(Violation("DuplicateId", f"ids {dup} occur more than once"))
    by_id = {p.id: p for p in d.critical_points}
    for p in d.critical_points:
        if p.index < 0:
            out.append(Violation("IndexRange", f"{p.id} has negative index {p.index}"))
        elif p.index >= d.n:
            out.append(Violation("Subcriticality", f"{p.id} has index {p.index} >= n = {d.n}"))
    minima = d.count(0)
    if d.single_minimum and minima != 1:
        out.append(Violation("IndexZeroCount", f"expected exactly one index-0 point, found {minima}"))
    structural = False
    for (pid, qid), a in d.boundary.items():
        if pid not in by_id or qid not in by_id:
            out.append(Violation("UnknownPoint", f"boundary entry ({pid}, {qid}) names an unknown point"))
            structural = True
        elif by_id[qid].index != by_id[pid].index + 1:
            out.append(Violation(
                "IndexGap",
                f"boundary entry ({pid}, {qid}) joins indices {by_id[pid].index} and {by_id[qid].index}",
            ))
            structural = True
    if not structural:
        for j in range(2, d.top_index + 1):
            inner, outer = boundary_matrix(d, j - 1), boundary_matrix(d, j)
            if not inner or not outer or not outer[0]:
                continue
            sq = _matmul(inner, outer)
            bad = [(r, c) for r, row in enumerate(sq) for c, v in enumerate(row) if v]
            if bad:
                out.append(Violation("BoundarySquare", f"boundary squared is nonzero from index {j} to {j - 2}"))
    with_h = [p for p in d.critical_points if p.h_value is not None]
    for p in with_h:
        for q in with_h:
            if p.index < q.index and not p.h_value < q.h_value:
                out.append(Violation(
                    "HOrdering", f"{p.id} (index {p.index}) is not below {q.id} (index {q.index})"
                ))
    return out


def homology_ranks(d: MorseData) -> GradedRanks:
    violations = validate(d)
    if violations:
        raise InvalidData(violations)
    top = d.top_index
    rank = {j: exact_rank(boundary_matrix(d, j)) for j in range(1, top + 1)}
    betti = {j: d.count(j) - rank.get(j, 0) - rank.get(j + 1, 0) for j in range(0, top + 1)}
    return GradedRanks({j: b for j, b in betti.items() if b})


def euler_characteristic(d: MorseData) -> int:
    return sum((-1) ** p.index for p in d.critical_points)


# -- sample data ------------------------------------------------------------------


def ball(n: int) -> MorseData:
    """The ball B^{2n}: a single minimum."""
    return MorseData(n, (CriticalPoint("m", 0, Fraction(0)),))


def s1xs2_sum(s: int) -> MorseData:
    """The filling of the s-fold connected sum of S^1 x S^2: one 0-handle and s 1-handles."""
    pts = [CriticalPoint("m", 0, Fraction(0))]
    pts += [CriticalPoint(f"h{i}", 1, Fraction(1)) for i in range(1, s + 1)]
    return MorseData(2, tuple(pts))


def random_morse_data(rng: np.random.Generator, n: int, max_points: int = 12,
                      mixing: int = 6, max_coeff: int = 2) -> MorseData:
    """A random valid complex with a single minimum.

    Cancelling pairs in adjacent indices >= 1 and free generators are mixed by
    random unimodular changes of basis in each degree, which keeps the
    boundary square zero while making the matrices dense.
    """
    if max_points < 1:
        raise ValueError("need room for the minimum")
    counts = {j: 0 for j in range(n)}
    counts[0] = 1
    pairs = []
    budget = int(rng.integers(0, max_points))
    while budget > 0:
        if n >= 3 and budget >= 2 and rng.random() < 0.5:
            j = int(rng.integers(1, n - 1))
            pairs.append((j, counts[j], counts[j + 1]))
            counts[j] += 1
            counts[j + 1] += 1
            budget -= 2
        else:
            counts[int(rng.integers(1, n))] += 1
            budget -= 1
    # D[j] maps index j to index j-1: shape (counts[j-1], counts[j])
    D = {j: np.zeros((counts[j - 1], counts[j]), dtype=object) for j in range(1, n)}
    for j, row, col in pairs:
        D[j + 1][row, col] = int(rng.choice([-1, 1]))
    for _ in range(mixing):
        j = int(rng.integers(1, n))
        if counts[j] < 2:
            continue
        a, b = rng.choice(counts[j], size=2, replace=False)
        c = int(rng.integers(-max_coeff, max_coeff + 1))
        # new basis vector e_a + c e_b in degree j
        D[j][:, a] += c * D[j][:, b]
        if j + 1 in D:
            D[j + 1][b, :] -= c * D[j + 1][a, :]
    pts = [CriticalPoint(f"c{j}_{i}", j, Fraction(2 * j + 1, 2) + Fraction(i, 4 * max_points))
           for j in range(n) for i in range(counts[j])]
    pts[0] = CriticalPoint("c0_0", 0, Fraction(0))
    boundary = {}
    for j, M in D.items():
        for r in range(M.shape[0]):
            for c in range(M.shape[1]):
                if M[r, c]:
                    boundary[(f"c{j - 1}_{r}", f"c{j}_{c}")] = int(M[r, c])
    return MorseData(n, tuple(pts), boundary)
