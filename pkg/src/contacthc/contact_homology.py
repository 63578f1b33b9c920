"""Cylindrical contact homology of the boundary M of a subcritical Stein domain.

Generators are the orbits ``gamma_p^m`` over the critical points ``p`` of the
Morse function, one for each multiplicity ``m >= 1``. With ``dim M = 2n - 1``

    deg gamma_p^m = 2n - index(p) - 4 + 2m      on M,
    deg gamma_p^m = 2n - index(p) - 2 + 2m      on the stabilization M'.

The differential keeps ``m`` fixed and sends ``gamma_p^m`` to
``m * sum (a_q / m) gamma_q^m`` over ``index(q) = index(p) + 1``, i.e. each
multiplicity block carries the Morse coboundary.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import BoundarySquareNonzero, InvalidData
from .morse_complex import GradedRanks, MorseData, exact_rank, homology_ranks, validate


class Target(str, enum.Enum):
    M = "M"
    M_PRIME = "M_prime"


def generator_degree(n: int, index: int, m: int, target: Target = Target.M) -> int:
    return 2 * n - index - 4 + 2 * m + (2 if Target(target) is Target.M_PRIME else 0)


def default_m_o(window_hi: int) -> int:
    """Smallest cutoff that reaches every degree up to window_hi + 1."""
    return max(1, math.ceil((window_hi + 4) / 2))


@dataclass(frozen=True, order=True)
class HCGenerator:
    degree: int
    m: int
    critical_point_id: str

    def __str__(self) -> str:
        return f"gamma[{self.critical_point_id}]^{self.m}"


@dataclass
class HCComplex:
    """Chain groups and differential on a degree window.

    Generators are kept one degree beyond each end of ``window`` so that
    homology at the window edges is computed from the true neighbours.
    """

    generators: list
    boundary: dict
    m_o: int
    window: tuple
    n: int
    target: Target = Target.M

    def in_degree(self, deg: int) -> list[HCGenerator]:
        return sorted(g for g in self.generators if g.degree == deg)

    def matrix(self, deg: int) -> list[list[Fraction]]:
        """Differential from degree deg to deg - 1 (rows: degree deg - 1)."""
        src, dst = self.in_degree(deg), self.in_degree(deg - 1)
        return [[self.boundary.get(g, {}).get(h, Fraction(0)) for g in src] for h in dst]

    def square_defects(self) -> list[int]:
        """Degrees deg where the composite deg -> deg - 2 is nonzero."""
        lo, hi = self.window
        bad = []
        for deg in range(lo + 1, hi + 2):
            for g in self.in_degree(deg):
                total: dict = {}
                for h, a in self.boundary.get(g, {}).items():
                    for e, b in self.boundary.get(h, {}).items():
                        total[e] = total.get(e, 0) + a * b
                if any(total.values()):
                    bad.append(deg)
                    break
        return bad


def build_hc_complex(d: MorseData, m_o: Optional[int] = None, window: tuple = (0, 20),
                     target: Target = Target.M) -> HCComplex:
    violations = validate(d)
    if violations:
        raise InvalidData(violations)
    target = Target(target)
    lo, hi = window
    if m_o is None:
        m_o = default_m_o(hi)
    if m_o < 1:
        raise ValueError("m_o must be >= 1")
    by_id = {p.id: p for p in d.critical_points}
    gens = {}
    for p in d.critical_points:
        for m in range(1, m_o + 1):
            deg = generator_degree(d.n, p.index, m, target)
            if lo - 1 <= deg <= hi + 1:
                gens[(p.id, m)] = HCGenerator(deg, m, p.id)
    boundary: dict = {}
    for (pid, qid), a in d.boundary.items():
        if a == 0:
            continue
        for m in range(1, m_o + 1):
            src, dst = gens.get((pid, m)), gens.get((qid, m))
            if src is None or dst is None:
                continue
            # the multiplicity prefactor cancels the 1/m weight of the cylinder
            coeff = m * Fraction(a, m)
            boundary.setdefault(src, {})[dst] = coeff
    assert all(by_id[g.critical_point_id].index + 1 == by_id[h.critical_point_id].index
               for g, row in boundary.items() for h in row)
    return HCComplex(sorted(gens.values()), boundary, m_o, (lo, hi), d.n, target)


def hc_ranks_chain(cx: HCComplex) -> GradedRanks:
    """ker / im in every window degree, exact over Q."""
    bad = cx.square_defects()
    if bad:
        raise BoundarySquareNonzero(f"boundary squared is nonzero from degrees {bad}")
    lo, hi = cx.window
    rank = {deg: exact_rank(cx.matrix(deg)) for deg in range(lo, hi + 2)}
    out = {}
    for deg in range(lo, hi + 1):
        r = len(cx.in_degree(deg)) - rank[deg] - rank[deg + 1]
        if r:
            out[deg] = r
    return GradedRanks(out)


def _betti_sum(betti: GradedRanks, n: int, i: int, offset: int) -> int:
    total, m = 0, 0
    while 2 * (n + m) + offset - i <= n - 1:
        j = 2 * (n + m) + offset - i
        if j >= 0:
            total += betti[j]
        m += 1
    return total


def hc_ranks_closed_form(d: MorseData, i: int, target: Target = Target.M) -> int:
    """sum over m >= 0 of b_{2(n+m-1)-i}(V) on M, or of b_{2(n+m)-i}(V) on M'."""
    betti = homology_ranks(d)
    offset = -2 if Target(target) is Target.M else 0
    return _betti_sum(betti, d.n, i, offset)


def hc_ranks_closed_form_window(d: MorseData, window: tuple, target: Target = Target.M) -> GradedRanks:
    betti = homology_ranks(d)
    offset = -2 if Target(target) is Target.M else 0
    lo, hi = window
    ranks = {i: _betti_sum(betti, d.n, i, offset) for i in range(lo, hi + 1)}
    return GradedRanks({i: r for i, r in ranks.items() if r})


@dataclass
class DegreeShiftReport:
    window: tuple
    rows: list = field(default_factory=list)  # (i, rank on M in degree i, rank on M' in degree i + 2)

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if r[1] != r[2]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_degree_shift(d: MorseData, window: tuple) -> DegreeShiftReport:
    """Compare HC_i(M) with HC_{i+2}(M') on the window."""
    lo, hi = window
    report = DegreeShiftReport((lo, hi))
    if hi < lo:
        return report
    on_m = hc_ranks_closed_form_window(d, (lo, hi), Target.M)
    on_mp = hc_ranks_closed_form_window(d, (lo + 2, hi + 2), Target.M_PRIME)
    for i in range(lo, hi + 1):
        report.rows.append((i, on_m[i], on_mp[i + 2]))
    return report


def cylinder_energy(h_plus: float, h_minus: float, m: int) -> float:
    """Energy m (e^{-h(p+)} - e^{-h(p-)}) of the cylinder over a gradient trajectory."""
    if m < 1:
        raise ValueError("multiplicity must be >= 1")
    return m * (math.exp(-h_plus) - math.exp(-h_minus))


@dataclass
class GuardReport:
    ok: bool
    warnings: list = field(default_factory=list)


def d_squared_guard(cx: HCComplex, dim_M: int, d: Optional[MorseData] = None) -> GuardReport:
    """Check the conditions under which the differential squares to zero.

    In dimension above 3 the window must hold no generators of degree 0 or 1.
    In dimension 3 the generators must follow the n = 2 pattern (index-0
    points in degrees 2m, index-1 points in degrees 2m - 1 with no outgoing
    differential), which needs the Morse data ``d``. In every case the square
    of the differential is also checked directly.
    """
    warnings = []
    if dim_M > 3:
        low = [g for g in cx.generators if g.degree in (0, 1)]
        if low:
            warnings.append(f"generators in degree 0 or 1: {', '.join(map(str, low))}")
    elif dim_M == 3:
        if d is None:
            warnings.append("dimension 3 needs the Morse data to check the generator pattern")
        else:
            index = {p.id: p.index for p in d.critical_points}
            shift = 2 if cx.target is Target.M_PRIME else 0
            for g in cx.generators:
                k = index.get(g.critical_point_id)
                expected = {0: 2 * g.m, 1: 2 * g.m - 1}.get(k)
                if expected is None:
                    warnings.append(f"{g} comes from a point of index {k}")
                elif g.degree != expected + shift:
                    warnings.append(f"{g} has degree {g.degree}, expected {expected + shift}")
                if k == 1 and any(cx.boundary.get(g, {}).values()):
                    warnings.append(f"odd generator {g} has a nonzero differential")
    else:
        warnings.append(f"dim M = {dim_M} is below 3")
    bad = cx.square_defects()
    if bad:
        warnings.append(f"boundary squared is nonzero from degrees {bad}")
    return GuardReport(not warnings, warnings)
