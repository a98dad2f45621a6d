import itertools
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from covering_lab.analytic import DELTA_TAIL
from covering_lab.congruence import Congruence
from covering_lab.distortion import (
    DeltaSchedule,
    PrimePowerProfile,
    alpha,
    bad_set,
    chi,
    euler_factor,
    euler_factor_series,
    factorize,
    fiber_counts,
    fourth_moment,
    initial_state,
    lcm_weight_sum,
    lcm_weight_sum_bruteforce,
    measure,
    moment_bound_chain_check,
    quartic_bound_check,
    run,
    step,
)

DELTAS = st.sampled_from([Fraction(0), Fraction(1, 8), Fraction(1, 5), Fraction(1, 4), Fraction(1, 3),
                          Fraction(1, 2)])


@st.composite
def cases(draw, max_ell=10**4):
    primes = draw(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13]), min_size=1, max_size=4, unique=True))
    pairs = tuple((p, draw(st.integers(1, 4))) for p in sorted(primes))
    profile = PrimePowerProfile(pairs)
    assume(profile.full_modulus <= max_ell)
    ell = profile.full_modulus
    divisors = [d for d in range(2, ell + 1) if ell % d == 0]
    moduli = draw(st.lists(st.sampled_from(divisors), min_size=1, max_size=10, unique=True))
    classes = [Congruence(draw(st.integers(0, m - 1)), m) for m in moduli]
    schedule = DeltaSchedule(tuple(draw(DELTAS) for _ in range(profile.r)))
    return classes, profile, schedule


@given(st.integers(1, 10**6))
def test_factorize_matches_sympy(n):
    assert factorize(n) == sympy.factorint(n)


@pytest.mark.parametrize("m", [1, 2, 4, 6, 12, 30, 36])
def test_chi_counts_four_tuples(m):
    divs = [d for d in range(1, m + 1) if m % d == 0]
    brute = sum(1 for t in itertools.product(divs, repeat=4) if math.lcm(*t) == m)
    assert chi(m) == brute


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 101])
@pytest.mark.parametrize("d", [Fraction(0), Fraction(1, 4), DELTA_TAIL, Fraction(1, 2)])
def test_euler_factor_closed_form_matches_series(p, d):
    partial, tail = euler_factor_series(p, d, terms=80)
    closed = euler_factor(p, d)
    assert partial <= closed <= partial + tail


def test_euler_factor_small_primes():
    assert euler_factor(2) == 150
    assert euler_factor(3) == 30


@given(st.fractions(min_value=0, max_value=1), st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1, 2)))
def test_quartic_majorant(t, d):
    assert quartic_bound_check(t, d)


def test_quartic_domain():
    with pytest.raises(ValueError):
        quartic_bound_check(Fraction(1, 2), 0)


@given(cases())
@settings(max_examples=60)
def test_mass_stays_one_and_measure_agrees(case):
    classes, profile, schedule = case
    for state, bad in run(classes, profile, schedule):
        assert state.mass == 1
        assert all(w >= 0 for w in state.weights)
        if bad is not None:
            measure(state, bad)  # raises if the two formulas disagree


@given(cases())
@settings(max_examples=40)
def test_zero_delta_prefix_keeps_uniform(case):
    classes, profile, schedule = case
    zeros = DeltaSchedule.zeros(profile.r)
    ell = profile.full_modulus
    for state, _ in run(classes, profile, zeros):
        assert set(state.weights) == {Fraction(1, ell)}


@given(cases(max_ell=3000))
@settings(max_examples=60)
def test_moment_bound_chain(case):
    classes, profile, schedule = case
    rep = moment_bound_chain_check(classes, profile, schedule)
    assert rep.verdict == "pass", [f.name for f in rep.failures()]


@given(cases(max_ell=720))
@settings(max_examples=25)
def test_grouped_lcm_sum_matches_enumeration(case):
    _, profile, schedule = case
    for i in range(1, profile.r + 1):
        if len([d for d in range(1, profile.level_modulus(i - 1) + 1)
                if profile.level_modulus(i - 1) % d == 0]) <= 12:
            assert lcm_weight_sum(profile, schedule, i) == lcm_weight_sum_bruteforce(profile, schedule, i)


def test_small_example_by_hand():
    profile = PrimePowerProfile.parse("2,3")
    classes = [Congruence(0, 2), Congruence(0, 3), Congruence(1, 6)]
    p0 = initial_state(profile, DeltaSchedule.parse("1/4,1/4"))
    b1 = bad_set(classes, profile, 1)
    assert b1.residues() == [0]
    p1 = step(p0, b1)
    # the fiber over Q_0 is half bad; bad points drop to (1/2 - 1/4)/(1/2 * 3/4) = 2/3
    assert p1.weights == (Fraction(1, 9), Fraction(2, 9), Fraction(1, 9),
                          Fraction(2, 9), Fraction(1, 9), Fraction(2, 9))
    assert measure(p1, b1) == Fraction(1, 3)
    b2 = bad_set(classes, profile, 2)
    assert b2.residues() == [0, 1, 3]
    # fibers {0, 2, 4} and {1, 3, 5} hold one and two bad points
    assert fiber_counts(profile, b2).tolist() == [1, 2]
    assert alpha(p1, 5, b2) == Fraction(2, 3)
    assert fourth_moment(p1, b2) == Fraction(1, 3) * Fraction(1, 81) + Fraction(2, 3) * Fraction(16, 81)
    assert sum(step(p1, b2).weights) == 1


def test_profile_and_schedule_validation():
    with pytest.raises(ValueError):
        PrimePowerProfile(((3, 1), (2, 1)))
    with pytest.raises(ValueError):
        PrimePowerProfile(((4, 1),))
    with pytest.raises(ValueError):
        DeltaSchedule.parse("1/4,3/4")
    profile = PrimePowerProfile.for_modulus(360)
    assert str(profile) == "2^3,3^2,5^1"
    assert profile.level_modulus(2) == 72 and profile.fiber_size(4) == 1
    with pytest.raises(ValueError):
        initial_state(profile, budget=100)
    with pytest.raises(ValueError):
        bad_set([Congruence(0, 7)], profile, 1)


def test_chain_rejects_repeated_moduli():
    profile = PrimePowerProfile.parse("2,3")
    with pytest.raises(ValueError):
        moment_bound_chain_check([Congruence(0, 2), Congruence(1, 2)], profile, DeltaSchedule.parse("1/4,1/4"))
