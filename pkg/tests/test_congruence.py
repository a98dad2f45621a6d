import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from covering_lab.congruence import (
    Congruence,
    CoveringSystem,
    ScanBudgetError,
    SystemFormatError,
    covered_density,
    delta,
    is_covering,
    is_distinct,
    is_exact,
    is_smooth,
    lcm_moduli,
    min_modulus,
    reciprocal_sum,
    scan_counts,
    smooth_reciprocal_mass,
)

CLASSIC = CoveringSystem.from_pairs([(0, 2), (0, 3), (1, 4), (5, 6), (7, 12)])


@st.composite
def small_systems(draw, max_modulus=36, max_size=6):
    moduli = draw(st.lists(st.integers(1, max_modulus), min_size=1, max_size=max_size))
    return CoveringSystem(Congruence(draw(st.integers(-100, 100)), m) for m in moduli)


def brute_multiplicity(system, period):
    return [sum(n in c for c in system) for n in range(period)]


def test_classic_system():
    assert is_covering(CLASSIC)
    assert is_distinct(CLASSIC)
    assert not is_exact(CLASSIC)
    assert reciprocal_sum(CLASSIC) == Fraction(4, 3)
    assert lcm_moduli(CLASSIC) == 12
    assert min_modulus(CLASSIC) == 2


def test_exact_covering():
    halves = CoveringSystem.from_pairs([(0, 2), (1, 4), (3, 8), (7, 8)])
    assert is_exact(halves) and is_covering(halves)
    assert reciprocal_sum(halves) == 1


@given(small_systems())
@settings(max_examples=150)
def test_scan_matches_pointwise_count(system):
    period = lcm_moduli(system)
    assume(period <= 5000)
    mult = brute_multiplicity(system, period)
    covered = sum(1 for k in mult if k)
    assert covered_density(system) == Fraction(covered, period)
    assert is_covering(system) == (covered == period)
    assert is_exact(system) == all(k == 1 for k in mult)


@given(small_systems(), st.integers(-50, 50))
def test_shift_invariance(system, t):
    assume(lcm_moduli(system) <= 10**5)
    assert covered_density(system) == covered_density(system.shifted(t))
    assert is_covering(system) == is_covering(system.shifted(t))


@given(small_systems(max_modulus=60))
def test_scan_windows_add_up(system):
    period = lcm_moduli(system)
    assume(period <= 20000)
    whole = sum(c for c, _ in scan_counts(system.classes, period))
    pieces = sum(c for c, _ in scan_counts(system.classes, period, chunk=7))
    assert whole == pieces


@given(st.integers(-200, 200), st.integers(1, 40), st.integers(-200, 200), st.integers(1, 40))
def test_crt_intersection(a, m, b, n):
    c1, c2 = Congruence(a, m), Congruence(b, n)
    both = c1.intersect(c2)
    period = math.lcm(m, n)
    members = [x for x in range(period) if x in c1 and x in c2]
    if both is None:
        assert members == []
    else:
        assert both.modulus == period
        assert members == [both.residue]


def test_scan_budget():
    big = CoveringSystem.from_pairs([(0, 10**5), (0, 10**5 + 1)])
    with pytest.raises(ScanBudgetError) as info:
        is_covering(big, budget=10**6)
    assert info.value.lcm == 10**5 * (10**5 + 1)


def test_delta_counts_only_three_smooth_moduli():
    assert delta(CLASSIC) == 0
    partial = CoveringSystem.from_pairs([(0, 2), (0, 3), (1, 5)])
    assert delta(partial) == Fraction(1, 3)


def test_smooth_helpers():
    assert is_smooth(72, 3) and not is_smooth(10, 3) and is_smooth(1, 2)
    assert smooth_reciprocal_mass(3, 5) == Fraction(11, 12)
    assert smooth_reciprocal_mass(2, 1) == 2
    brute = sum(Fraction(1, m) for m in range(5, 10**4) if is_smooth(m, 3))
    assert 0 < smooth_reciprocal_mass(3, 5) - brute < Fraction(1, 100)
    with pytest.raises(ValueError):
        smooth_reciprocal_mass(4, 1)


def test_json_round_trip_and_errors():
    assert CoveringSystem.from_json(CLASSIC.to_json()) == CLASSIC
    with pytest.raises(SystemFormatError, match="line 2, column"):
        CoveringSystem.from_json('[{"a": 0,\n "m": 2},]')
    with pytest.raises(SystemFormatError, match="entry 1"):
        CoveringSystem.from_json('[{"a": 0, "m": 2}, {"a": 1}]')
    with pytest.raises(SystemFormatError, match="not positive"):
        CoveringSystem.from_json('[{"a": 0, "m": 0}]')
    with pytest.raises(SystemFormatError, match="integers"):
        CoveringSystem.from_json('[{"a": 0.5, "m": 2}]')
    with pytest.raises(SystemFormatError):
        CoveringSystem.from_json('{"a": 0, "m": 2}')


def test_invalid_congruence():
    with pytest.raises(ValueError):
        Congruence(0, 0)
    with pytest.raises(TypeError):
        Congruence(0, True)
    assert Congruence(-1, 4).residue == 3
    assert not is_covering(CoveringSystem())
