import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from contacthc.contact_homology import (
    HCComplex,
    HCGenerator,
    Target,
    build_hc_complex,
    check_degree_shift,
    cylinder_energy,
    d_squared_guard,
    default_m_o,
    generator_degree,
    hc_ranks_chain,
    hc_ranks_closed_form,
    hc_ranks_closed_form_window,
)
from contacthc.errors import BoundarySquareNonzero, InvalidData
from contacthc.handle_dynamics import ModelHandle, orbit_index, tune_principal
from contacthc.morse_complex import (
    CriticalPoint,
    MorseData,
    ball,
    homology_ranks,
    random_morse_data,
    s1xs2_sum,
)


def test_ball_generators_n2():
    cx = build_hc_complex(ball(2), 4, (0, 8))
    assert [g.degree for g in cx.generators] == [2, 4, 6, 8]
    assert all(g.critical_point_id == "m" for g in cx.generators)
    assert hc_ranks_chain(cx).nonzero() == {2: 1, 4: 1, 6: 1, 8: 1}


def test_s1xs2_generators():
    cx = build_hc_complex(s1xs2_sum(2), 4, (0, 8))
    odd = [g for g in cx.generators if g.degree % 2]
    for m in range(1, 5):
        assert sorted(g.critical_point_id for g in odd if g.m == m and g.degree == 2 * m - 1) == ["h1", "h2"]
    assert cx.boundary == {}


def test_padding_beyond_window():
    cx = build_hc_complex(ball(2), 10, (3, 6))
    assert [g.degree for g in cx.generators] == [2, 4, 6]


def test_default_m_o_saturates():
    cx = build_hc_complex(ball(2), window=(0, 20))
    assert cx.m_o == default_m_o(20) == 12
    assert max(g.degree for g in cx.generators) == 20


def test_closed_form_examples():
    assert hc_ranks_closed_form(ball(2), 2) == 1
    assert hc_ranks_closed_form(ball(2), 3) == 0
    assert hc_ranks_closed_form(s1xs2_sum(3), 5) == 3


def test_acyclic_block():
    pts = [CriticalPoint("m", 0), CriticalPoint("a", 1), CriticalPoint("b", 2)]
    d = MorseData(3, pts, {("a", "b"): -1})
    cx = build_hc_complex(d, window=(0, 12))
    chain = hc_ranks_chain(cx)
    assert chain.nonzero() == {2 * 3 - 4 + 2 * m: 1 for m in range(1, 6)}
    assert chain.nonzero() == hc_ranks_closed_form_window(d, (0, 12)).nonzero()


def test_invalid_data_rejected():
    with pytest.raises(InvalidData):
        build_hc_complex(MorseData(2, [CriticalPoint("m", 0), CriticalPoint("x", 2)]))
    with pytest.raises(InvalidData):
        hc_ranks_closed_form(MorseData(2, [CriticalPoint("x", 1)]), 1)


def _random(seed):
    rng = np.random.default_rng(seed)
    return random_morse_data(rng, int(rng.integers(2, 5)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([Target.M, Target.M_PRIME]))
def test_route_agreement(seed, target):
    d = _random(seed)
    cx = build_hc_complex(d, window=(0, 20), target=target)
    assert hc_ranks_chain(cx).window(0, 20) == hc_ranks_closed_form_window(d, (0, 20), target).window(0, 20)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_blocks_are_shifted_morse_homology(seed):
    d = _random(seed)
    cx = build_hc_complex(d, m_o=3, window=(-10, 30))
    betti = homology_ranks(d)
    for m in range(1, 4):
        block = HCComplex([g for g in cx.generators if g.m == m],
                          {g: row for g, row in cx.boundary.items() if g.m == m},
                          3, (-10, 30), d.n)
        for j in range(d.n):
            deg = generator_degree(d.n, j, m)
            assert hc_ranks_chain(block)[deg] == betti[j]
        assert all(h.m == g.m for g, row in cx.boundary.items() for h in row)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_differential_lowers_degree(seed):
    cx = build_hc_complex(_random(seed), window=(0, 20))
    for g, row in cx.boundary.items():
        for h, a in row.items():
            assert h.degree == g.degree - 1 and h.m == g.m and a != 0
    assert cx.square_defects() == []


def test_grading_matches_principal_orbits():
    # V with a single k-handle on top of the minimum
    for n, k in [(3, 1), (4, 2), (3, 2), (4, 1)]:
        h = tune_principal(ModelHandle(n, k, 3, 2, [1] * (n - k), 1), 5)
        for m in range(1, 6):
            assert generator_degree(n, k, m) == orbit_index(h, n, m).reduced.value


def test_n2_grading_pattern():
    for s in (1, 2, 3):
        cx = build_hc_complex(s1xs2_sum(s), window=(0, 12))
        for g in cx.generators:
            assert g.degree == (2 * g.m if g.critical_point_id == "m" else 2 * g.m - 1)


@pytest.mark.parametrize("d, window", [(ball(2), (0, 10)), (s1xs2_sum(2), (0, 12))])
def test_degree_shift_examples(d, window):
    r = check_degree_shift(d, window)
    assert r.ok and len(r.rows) == window[1] - window[0] + 1


def test_degree_shift_s2_n3():
    pts = [CriticalPoint("m", 0)] + [CriticalPoint(f"h{i}", 1) for i in (1, 2)]
    assert check_degree_shift(MorseData(3, pts), (0, 12)).ok


def test_degree_shift_empty_window():
    r = check_degree_shift(ball(2), (5, 4))
    assert r.ok and r.rows == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_degree_shift_random(seed):
    assert check_degree_shift(_random(seed), (0, 20)).ok


def test_chain_route_also_shifts():
    d = s1xs2_sum(2)
    on_m = hc_ranks_chain(build_hc_complex(d, window=(0, 12)))
    on_mp = hc_ranks_chain(build_hc_complex(d, window=(2, 14), target=Target.M_PRIME))
    assert all(on_m[i] == on_mp[i + 2] for i in range(0, 13))


def test_cylinder_energy():
    assert cylinder_energy(1.5, 1.5, 3) == 0
    assert cylinder_energy(0, 1, 2) == pytest.approx(2 * (1 - math.exp(-1)))
    assert cylinder_energy(0, 1, 2) == pytest.approx(1.2642, abs=1e-4)
    assert cylinder_energy(0.2, 0.9, 6) == pytest.approx(3 * cylinder_energy(0.2, 0.9, 2))
    assert cylinder_energy(0.9, 0.2, 1) < 0


def test_energy_positive_along_boundary():
    rng = np.random.default_rng(9)
    d = random_morse_data(rng, 4)
    h = {p.id: float(p.h_value) for p in d.critical_points}
    for (p, q), a in d.boundary.items():
        # the differential runs from the lower-index end p to q
        assert cylinder_energy(h[p], h[q], 1) > 0


def test_guard_examples():
    cx3 = build_hc_complex(ball(3), window=(0, 12))
    assert d_squared_guard(cx3, 5).ok
    d = s1xs2_sum(2)
    assert d_squared_guard(build_hc_complex(d, window=(0, 12)), 3, d).ok


def test_guard_flags_bad_square():
    g3, g2, g1 = HCGenerator(3, 1, "c"), HCGenerator(2, 1, "b"), HCGenerator(1, 1, "a")
    cx = HCComplex([g1, g2, g3], {g3: {g2: Fraction(1)}, g2: {g1: Fraction(1)}}, 1, (0, 4), 3)
    report = d_squared_guard(cx, 5)
    assert not report.ok
    assert any("squared" in w for w in report.warnings)
    with pytest.raises(BoundarySquareNonzero):
        hc_ranks_chain(cx)


def test_guard_flags_low_degrees():
    # valid subcritical data never reach degree 1 when n >= 3
    pts = [CriticalPoint("m", 0), CriticalPoint("a", 2)]
    assert min(g.degree for g in build_hc_complex(MorseData(3, pts), window=(0, 6)).generators) == 2
    cx = HCComplex([HCGenerator(1, 1, "x")], {}, 1, (0, 4), 3)
    assert not d_squared_guard(cx, 5).ok
