"""Reweighted probability measures over residues, and the moment bounds that
control how much mass each bad set can carry.

Residues modulo ``l_i = p_1^g_1 ... p_i^g_i`` stand for the product
``Z/p_1^g_1 x ... x Z/p_i^g_i`` through the CRT.  The fiber above ``x`` (mod
``l_{i-1}``) is ``{x + l_{i-1} k : 0 <= k < p_i^g_i}``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .congruence import Congruence, _classes, is_distinct
from .report import LemmaReport

DEFAULT_STATE_BUDGET = 10**7
ZERO, ONE = Fraction(0), Fraction(1)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class PrimePowerProfile:
    """Prime powers ``(p_i, g_i)``, primes strictly increasing, exponents >= 0."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(p), int(g)) for p, g in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ValueError("profile needs at least one prime")
        for (p, g), nxt in zip(pairs, pairs[1:] + ((None, None),)):
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            if g < 0:
                raise ValueError(f"negative exponent for {p}")
            if nxt[0] is not None and nxt[0] <= p:
                raise ValueError("profile primes must be strictly increasing")

    @classmethod
    def parse(cls, text: str) -> "PrimePowerProfile":
        """Read ``"2^2,3,5^0"``; a bare prime means exponent 1."""
        pairs = []
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            base, _, exp = item.partition("^")
            pairs.append((int(base), int(exp) if exp else 1))
        return cls(tuple(pairs))

    @classmethod
    def for_modulus(cls, n: int) -> "PrimePowerProfile":
        return cls(tuple(sorted(factorize(n).items())))

    @property
    def r(self) -> int:
        return len(self.pairs)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def prime(self, i: int) -> int:
        return self.pairs[i - 1][0]

    def fiber_size(self, i: int) -> int:
        """``p_i^g_i``; levels past ``r`` have trivial fibers."""
        if i > self.r:
            return 1
        p, g = self.pairs[i - 1]
        return p**g

    def level_modulus(self, i: int) -> int:
        """``l_i``; ``l_0 = 1`` and ``l_i = l_r`` for ``i > r``."""
        out = 1
        for p, g in self.pairs[: min(i, self.r)]:
            out *= p**g
        return out

    @property
    def full_modulus(self) -> int:
        return self.level_modulus(self.r)

    def index_of(self, p: int) -> int:
        for k, (q, _) in enumerate(self.pairs, start=1):
            if q == p:
                return k
        raise ValueError(f"prime {p} is not in the profile")

    def __str__(self) -> str:
        return ",".join(f"{p}^{g}" for p, g in self.pairs)


@dataclass(frozen=True)
class DeltaSchedule:
    """Damping parameters ``delta_i`` in ``[0, 1/2]``, one per level."""

    deltas: tuple[Fraction, ...]

    def __post_init__(self):
        ds = tuple(Fraction(d) for d in self.deltas)
        object.__setattr__(self, "deltas", ds)
        for d in ds:
            if not 0 <= d <= Fraction(1, 2):
                raise ValueError(f"delta {d} is outside [0, 1/2]")

    @classmethod
    def parse(cls, text: str) -> "DeltaSchedule":
        return cls(tuple(Fraction(t.strip()) for t in text.split(",") if t.strip()))

    @classmethod
    def zeros(cls, r: int) -> "DeltaSchedule":
        return cls((ZERO,) * r)

    def __getitem__(self, i: int) -> Fraction:
        """1-based; levels past the end use 0."""
        return self.deltas[i - 1] if i <= len(self.deltas) else ZERO

    def __len__(self) -> int:
        return len(self.deltas)


@dataclass(frozen=True)
class BadSet:
    """Residues of ``Q_i`` (as integers mod ``l_i``) hit by the level-i classes."""

    level: int
    modulus: int
    members: np.ndarray = field(compare=False)

    def __contains__(self, n: int) -> bool:
        return bool(self.members[n % self.modulus])

    def __len__(self) -> int:
        return int(self.members.sum())

    def residues(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()


@dataclass(frozen=True)
class DistortionState:
    """Level-i measure, extended uniformly to all residues mod ``l_r``."""

    level: int
    weights: tuple[Fraction, ...]
    profile: PrimePowerProfile
    schedule: DeltaSchedule
    previous: "DistortionState | None" = field(default=None, compare=False, repr=False)

    @property
    def mass(self) -> Fraction:
        return sum(self.weights, ZERO)

    def marginal(self, i: int) -> list[Fraction]:
        """Weights pushed down to ``Q_i`` by summing each fiber of ``Q_r -> Q_i``."""
        ell = self.profile.level_modulus(i)
        out = [ZERO] * ell
        for n, w in enumerate(self.weights):
            out[n % ell] += w
        return out


def initial_state(profile: PrimePowerProfile, schedule: DeltaSchedule | None = None,
                  budget: int = DEFAULT_STATE_BUDGET) -> DistortionState:
    ell = profile.full_modulus
    if ell > budget:
        raise ValueError(f"l_r = {ell} exceeds the state budget {budget}")
    schedule = schedule or DeltaSchedule.zeros(profile.r)
    return DistortionState(0, (Fraction(1, ell),) * ell, profile, schedule)


def _moduli_fit(classes: Sequence[Congruence], profile: PrimePowerProfile) -> None:
    ell = profile.full_modulus
    for c in classes:
        if ell % c.modulus:
            raise ValueError(f"modulus {c.modulus} does not divide l_r = {ell}")


def _level_classes(classes: Sequence[Congruence], profile: PrimePowerProfile, i: int) -> list[Congruence]:
    if i > profile.r:
        return []
    p = profile.prime(i)
    return [c for c in classes if c.modulus % p == 0
            and all(q <= p for q in factorize(c.modulus))]


def bad_set(system, profile: PrimePowerProfile, i: int) -> BadSet:
    """Residues mod ``l_i`` covered by a class whose modulus is divisible by
    ``p_i`` and has no prime factor above ``p_i``."""
    classes = _classes(system)
    _moduli_fit(classes, profile)
    ell = profile.level_modulus(i)
    members = np.zeros(ell, dtype=bool)
    for c in _level_classes(classes, profile, i):
        members[c.residue % c.modulus :: c.modulus] = True
    return BadSet(i, ell, members)


def fiber_counts(profile: PrimePowerProfile, bad: BadSet) -> np.ndarray:
    """Number of bad points in each fiber above ``Q_{i-1}``."""
    i = bad.level
    q, prev = profile.fiber_size(i), profile.level_modulus(i - 1)
    if i > profile.r:
        return np.zeros(prev, dtype=np.int64)
    return bad.members.reshape(q, prev).sum(axis=0)


def alpha(state: DistortionState, x: int, bad: BadSet) -> Fraction:
    """Share of the fiber above ``x`` lying in the bad set."""
    profile = state.profile
    q = profile.fiber_size(bad.level)
    return Fraction(int(fiber_counts(profile, bad)[x % profile.level_modulus(bad.level - 1)]), q)


def _alphas(profile: PrimePowerProfile, bad: BadSet) -> list[Fraction]:
    q = profile.fiber_size(bad.level)
    return [Fraction(int(c), q) for c in fiber_counts(profile, bad)]


def _factors(a: Fraction, d: Fraction) -> tuple[Fraction, Fraction]:
    """Multipliers for points on and off the bad set in a fiber with share ``a``."""
    on = (a - d) / (a * (1 - d)) if a > d else ZERO
    if a == 1:
        off = ZERO  # the fiber has no point off the bad set
    else:
        off = min(1 / (1 - a), 1 / (1 - d))
    return on, off


def step(state: DistortionState, bad: BadSet, delta: Fraction | None = None) -> DistortionState:
    """Advance from level ``i-1`` to level ``i``."""
    i = state.level + 1
    if bad.level != i:
        raise ValueError(f"bad set is for level {bad.level}, state is at level {state.level}")
    d = state.schedule[i] if delta is None else Fraction(delta)
    if not 0 <= d <= Fraction(1, 2):
        raise ValueError(f"delta {d} is outside [0, 1/2]")
    profile = state.profile
    prev = profile.level_modulus(i - 1)
    if len(bad) == 0:
        return DistortionState(i, state.weights, profile, state.schedule, state)
    factors = [_factors(a, d) for a in _alphas(profile, bad)]
    members, ell = bad.members, bad.modulus
    new = tuple(
        w * factors[n % prev][0 if members[n % ell] else 1] for n, w in enumerate(state.weights)
    )
    return DistortionState(i, new, profile, state.schedule, state)


def run(system, profile: PrimePowerProfile, schedule: DeltaSchedule,
        budget: int = DEFAULT_STATE_BUDGET) -> list[tuple[DistortionState, BadSet | None]]:
    """All states ``P_0, ..., P_r`` paired with the bad set used to reach each."""
    state = initial_state(profile, schedule, budget)
    out: list[tuple[DistortionState, BadSet | None]] = [(state, None)]
    for i in range(1, profile.r + 1):
        bad = bad_set(system, profile, i)
        state = step(state, bad)
        out.append((state, bad))
    return out


def measure(state: DistortionState, bad: BadSet) -> Fraction:
    """Mass that the level-i state puts on ``B_i``, checked against the fiber formula."""
    if state.level != bad.level:
        raise ValueError("state and bad set are at different levels")
    direct = sum((w for n, w in enumerate(state.weights) if bad.members[n % bad.modulus]), ZERO)
    if state.previous is not None:
        closed = measure_from_previous(state.previous, bad, state.schedule[bad.level])
        if closed != direct:
            raise ArithmeticError(f"measure mismatch: {direct} != {closed}")
    return direct


def measure_from_previous(previous: DistortionState, bad: BadSet, delta: Fraction) -> Fraction:
    """``(1/(1-d)) * sum_x max(0, a(x) - d) P_{i-1}(x)``."""
    d = Fraction(delta)
    weights = previous.marginal(bad.level - 1)
    total = sum((max(ZERO, a - d) * w for a, w in zip(_alphas(previous.profile, bad), weights)), ZERO)
    return total / (1 - d)


def fourth_moment(previous: DistortionState, bad: BadSet) -> Fraction:
    """Expected ``a(x)^4`` under the level ``i-1`` measure."""
    weights = previous.marginal(bad.level - 1)
    return sum((a**4 * w for a, w in zip(_alphas(previous.profile, bad), weights)), ZERO)


def quartic_bound_check(t, delta) -> bool:
    """``max(0, t - d) <= 27 t^4 / (256 d^3)``, plus the factorisation behind it at ``u = t/d``."""
    t, d = Fraction(t), Fraction(delta)
    if d <= 0:
        raise ValueError("delta must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    u = t / d
    identity = 27 * u**4 - 256 * u + 256 == (3 * u**2 + 8 * u + 16) * (3 * u - 4) ** 2
    return identity and max(ZERO, t - d) <= 27 * t**4 / (256 * d**3)


def chi(m: int) -> int:
    """Number of ordered 4-tuples of positive integers with lcm ``m``."""
    if m < 1:
        raise ValueError("m must be positive")
    out = 1
    for _, t in factorize(m).items():
        out *= (t + 1) ** 4 - t**4
    return out


def chi_prime_power_series_term(p: int, t: int) -> Fraction:
    return Fraction((t + 1) ** 4 - t**4, p**t)


def euler_factor(p: int, delta=0) -> Fraction:
    """``1 + (15p^3 + 5p^2 + 5p - 1) / ((1 - d)(p - 1)^4)``."""
    d = Fraction(delta)
    return 1 + Fraction(15 * p**3 + 5 * p**2 + 5 * p - 1, (p - 1) ** 4) / (1 - d)


def series_tail_bound(p: int, terms: int) -> Fraction:
    """Upper bound on ``sum_{t > terms} chi(p^t)/p^t`` by a geometric majorant."""
    t0 = terms + 1
    ratio = Fraction((t0 + 2) ** 4 - (t0 + 1) ** 4, ((t0 + 1) ** 4 - t0**4) * p)
    if ratio >= 1:
        raise ValueError(f"need more than {terms} terms before the series decays geometrically")
    return chi_prime_power_series_term(p, t0) / (1 - ratio)


def euler_factor_series(p: int, delta=0, terms: int = 60) -> tuple[Fraction, Fraction]:
    """Truncated series for the Euler factor and a rigorous bound on what was dropped."""
    d = Fraction(delta)
    partial = sum((chi_prime_power_series_term(p, t) for t in range(1, terms + 1)), ZERO)
    return 1 + partial / (1 - d), series_tail_bound(p, terms) / (1 - d)


def nu(m: int, profile: PrimePowerProfile, schedule: DeltaSchedule) -> Fraction:
    """``prod over p_j | m of 1/(1 - d_j)``."""
    out = ONE
    for p in factorize(m):
        out /= 1 - schedule[profile.index_of(p)]
    return out


def divisors_of_level(profile: PrimePowerProfile, i: int) -> list[int]:
    pairs = profile.pairs[: min(i, profile.r)]
    out = [1]
    for p, g in pairs:
        out = [d * p**e for d in out for e in range(g + 1)]
    return sorted(out)


def lcm_weight_sum(profile: PrimePowerProfile, schedule: DeltaSchedule, i: int) -> Fraction:
    """``sum over 4-tuples of divisors of l_{i-1}`` of ``nu(lcm)/lcm``, grouped by lcm."""
    return sum((Fraction(chi(m), m) * nu(m, profile, schedule) for m in divisors_of_level(profile, i - 1)),
               ZERO)


def lcm_weight_sum_bruteforce(profile: PrimePowerProfile, schedule: DeltaSchedule, i: int) -> Fraction:
    """Same sum by enumerating every 4-tuple; only for small ``l_{i-1}``."""
    divs = divisors_of_level(profile, i - 1)
    total = ZERO
    for tup in itertools.product(divs, repeat=4):
        m = math.lcm(*tup)
        total += nu(m, profile, schedule) / m
    return total


def smooth_sum_enclosure(profile: PrimePowerProfile, schedule: DeltaSchedule, i: int,
                         terms: int) -> tuple[Fraction, Fraction]:
    """Lower and upper bounds for ``sum over smooth m of chi(m) nu(m)/m`` over the
    profile primes below ``p_i``: exponents up to ``terms`` kept, the rest bounded."""
    lo = hi = ONE
    for j in range(1, min(i, profile.r + 1)):
        p, d = profile.prime(j), schedule[j]
        partial = sum((chi_prime_power_series_term(p, t) for t in range(1, terms + 1)), ZERO)
        lo *= 1 + partial / (1 - d)
        hi *= 1 + (partial + series_tail_bound(p, terms)) / (1 - d)
    return lo, hi


def euler_product(profile: PrimePowerProfile, schedule: DeltaSchedule, i: int) -> Fraction:
    out = ONE
    for j in range(1, min(i, profile.r + 1)):
        out *= euler_factor(profile.prime(j), schedule[j])
    return out


def moment_bound_chain_check(system, profile: PrimePowerProfile, schedule: DeltaSchedule,
                             terms: int | None = None, budget: int = DEFAULT_STATE_BUDGET) -> LemmaReport:
    """Exact check, level by level, of the chain bounding the mass of each bad set.

    For every level with ``d_i > 0``:
    measure <= quartic-moment bound <= divisor-lcm bound <= truncated smooth sum
    <= Euler product, and the Euler product lies inside the truncated-sum enclosure.
    """
    classes = _classes(system)
    if not is_distinct(classes):
        raise ValueError("the moment bound assumes pairwise distinct moduli")
    if len(schedule) != profile.r:
        raise ValueError(f"schedule has {len(schedule)} entries for {profile.r} levels")
    max_exp = max(g for _, g in profile.pairs)
    terms = max(max_exp + 8, 40) if terms is None else terms
    if terms < max_exp:
        raise ValueError("truncation must keep every exponent present in l_r")
    report = LemmaReport(
        name="moment-bound-chain",
        claim="bad-set mass <= quartic moment bound <= lcm divisor sum <= smooth sum <= Euler product",
        inputs={"profile": str(profile), "deltas": list(schedule.deltas), "classes": len(classes),
                "truncation_terms": terms},
    )
    levels = []
    for state, bad in run(classes, profile, schedule, budget):
        if bad is None:
            continue
        i = state.level
        d = schedule[i]
        mass = state.mass
        row = {"level": i, "mass": mass, "delta": d}
        report.fact(f"mass@{i}", mass == 1, "total mass is exactly 1", mass=mass)
        got = measure(state, bad)
        row["measure"] = got
        if d > 0:
            p = profile.prime(i)
            const = Fraction(27, 256) / ((1 - d) * d**3)
            moment = const * fourth_moment(state.previous, bad)
            first = const * lcm_weight_sum(profile, schedule, i) / (p - 1) ** 4
            s_lo, s_hi = smooth_sum_enclosure(profile, schedule, i, terms)
            euler = euler_product(profile, schedule, i)
            prep_lo = const * s_lo / (p - 1) ** 4
            final = const * euler / (p - 1) ** 4
            row.update(moment_bound=moment, firstbound=first, prep_lower=prep_lo,
                       prep_upper=const * s_hi / (p - 1) ** 4, secondbound=final)
            chain = [("measure", got), ("moment_bound", moment), ("firstbound", first),
                     ("prep_lower", prep_lo), ("secondbound", final)]
            for (na, a), (nb, b) in zip(chain, chain[1:]):
                report.fact(f"{na}<={nb}@{i}", a <= b, f"{na} <= {nb} at level {i}")
            report.fact(f"euler-in-enclosure@{i}", s_lo <= euler <= s_hi,
                        f"Euler product inside truncated smooth-sum enclosure at level {i}")
        levels.append(row)
    report.enclosures["levels"] = levels
    return report
