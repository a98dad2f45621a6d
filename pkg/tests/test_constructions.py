import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from covering_lab.congruence import (
    Congruence,
    ScanBudgetError,
    covered_density,
    is_covering,
    is_distinct,
    min_modulus,
    reciprocal_sum,
)
from covering_lab.constructions import (
    END_CAP,
    ConstructionError,
    alternating_integers,
    build_small_min_modulus_covering,
    division_minimal,
    greedy_power2_covering,
    inclusion_exclusion_sum,
    lewis_bound_check,
    m1_mass,
    rogers_check,
    shift_cover_witness,
)


def union_density_by_count(ds):
    period = math.lcm(*ds)
    return Fraction(sum(1 for n in range(period) if any(n % d == 0 for d in ds)), period)


@given(st.lists(st.integers(1, 40), min_size=1, max_size=6))
@settings(max_examples=120)
def test_inclusion_exclusion_matches_count(ds):
    assume(math.lcm(*ds) <= 10**5)
    assert inclusion_exclusion_sum(ds) == union_density_by_count(ds)


def test_inclusion_exclusion_limits():
    assert inclusion_exclusion_sum([]) == 0
    assert inclusion_exclusion_sum([1, 7]) == 1
    with pytest.raises(ValueError):
        inclusion_exclusion_sum(list(range(1, 30)))


@given(st.lists(st.integers(1, 30), min_size=1, max_size=6), st.randoms())
@settings(max_examples=80)
def test_residue_zero_minimises_union(moduli, rnd):
    assume(math.lcm(*moduli) <= 10**5)
    classes = [Congruence(rnd.randrange(m), m) for m in moduli]
    rep = rogers_check(classes)
    assert rep.verdict == "pass"
    assert covered_density(classes) >= covered_density([Congruence(0, m) for m in moduli])


def test_division_minimal():
    dm = division_minimal([20, 30, 45, 60, 90], 5)
    assert dm.minimal == (20, 30, 45)
    assert dm.reduced == (4, 6, 9)
    with pytest.raises(ValueError):
        division_minimal([10, 14], 5)
    with pytest.raises(ValueError):
        division_minimal([35], 5)


def test_m1_mass():
    assert m1_mass(5) == Fraction(3, 4)
    assert m1_mass(7) == Fraction(5, 8)
    assert m1_mass(2) == 1


@pytest.mark.parametrize("moduli,p,period", [
    ([10, 20, 30], 5, 600),
    ([15, 45, 30, 90], 5, 900),
    ([7, 14, 21, 42, 28], 7, 2 * 4 * 3 * 7),
])
def test_lewis_bound(moduli, p, period):
    assert lewis_bound_check(moduli, p, period).verdict == "pass"


@given(st.data())
@settings(max_examples=80)
def test_shift_witness(data):
    p = data.draw(st.sampled_from([2, 3, 5, 7]))
    e = data.draw(st.integers(1, 3))
    base = data.draw(st.sampled_from([1, 2, 3, 4, 6]))
    assume(base % p)
    mj = base * p ** (e - 1)
    m = data.draw(st.integers(1, 30).filter(lambda k: k % p))
    a_j = data.draw(st.integers(0, mj * p - 1))
    a = data.draw(st.integers(0, m - 1))
    both = Congruence(a_j, mj).intersect(Congruence(a, m))
    assume(both is not None)
    n = both.residue
    t = shift_cover_witness(n, a_j, mj, p, e, a, m)
    w = n + t * mj * m
    assert 1 <= t <= p
    assert (w - a_j) % (mj * p) == 0 and (w - a) % m == 0


def test_shift_witness_preconditions():
    with pytest.raises(ValueError):
        shift_cover_witness(0, 0, 4, 2, 1, 0, 3)
    with pytest.raises(ValueError):
        shift_cover_witness(0, 0, 1, 2, 1, 0, 4)
    with pytest.raises(ValueError):
        shift_cover_witness(1, 0, 1, 2, 1, 0, 3)


def test_end_cap_is_distinct_covering():
    assert is_covering(END_CAP) and is_distinct(END_CAP)
    assert all(m != 1 and m & (m - 1) for m in (m for _, m in END_CAP))


@pytest.mark.parametrize("m0,eps", [(2, Fraction(1, 4)), (2, Fraction(1, 100)), (3, Fraction(1, 4)),
                                    (3, Fraction(1, 20)), (4, Fraction(1, 10))])
def test_small_min_modulus(m0, eps):
    s = build_small_min_modulus_covering(m0, eps)
    assert is_covering(s) and is_distinct(s)
    assert min_modulus(s) == m0
    assert 1 < reciprocal_sum(s) < 1 + eps


def test_small_min_modulus_errors():
    with pytest.raises(ValueError):
        build_small_min_modulus_covering(5, Fraction(1, 4))
    with pytest.raises(ValueError):
        build_small_min_modulus_covering(2, 0)
    with pytest.raises(ScanBudgetError):
        build_small_min_modulus_covering(4, Fraction(1, 1000), budget=10**6)
    assert issubclass(ConstructionError, RuntimeError)


@pytest.mark.parametrize("t,steps", [(0, 5), (2, 10), (5, 20), (3, 1)])
def test_greedy(t, steps):
    g = greedy_power2_covering(t, steps)
    assert len(g) == steps
    assert [c.modulus for c in g] == [2 ** (t + j) for j in range(1, steps + 1)]
    assert reciprocal_sum(g) < Fraction(1, 2**t)
    order = alternating_integers()
    assert all(any(k in c for c in g) for k in (next(order) for _ in range(steps)))


def test_greedy_custom_ordering():
    g = greedy_power2_covering(1, 3, ordering=iter(range(100)))
    assert [(c.residue, c.modulus) for c in g] == [(0, 4), (1, 8), (2, 16)]
    with pytest.raises(ValueError):
        greedy_power2_covering(-1, 3)
