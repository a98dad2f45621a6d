"""Explicit covering systems and the divisibility / inclusion-exclusion tools
used to bound the density of integers hit by a family of congruences."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Iterable, Iterator, Sequence

from .congruence import (
    Congruence,
    CoveringSystem,
    DEFAULT_SCAN_BUDGET,
    ScanBudgetError,
    covered_density,
    is_covering,
    is_distinct,
    lcm_moduli,
    min_modulus,
    reciprocal_sum,
)
from .distortion import factorize
from .report import LemmaReport

SUBSET_CAP = 20

CLASSIC = ((0, 2), (0, 3), (1, 4), (5, 6), (7, 12))

# A distinct covering (lcm 720) whose moduli avoid 1, every power of two and
# every 3*2^j with j >= 4.  It closes the 3-adic chain below without reusing
# any modulus of the towers above it.
END_CAP = (
    (1, 3), (2, 5), (3, 6), (5, 9), (8, 10), (6, 12), (11, 15), (17, 18), (12, 24), (14, 30),
    (11, 36), (0, 40), (20, 45), (36, 60), (80, 90), (24, 120), (101, 144), (29, 180),
    (353, 360), (173, 720),
)


class ConstructionError(RuntimeError):
    """A construction could not produce a verified system."""


# ---------------------------------------------------------------------------
# division-minimal moduli and inclusion-exclusion

@dataclass(frozen=True)
class DivisionMinimalSet:
    source: tuple[int, ...]
    prime: int
    minimal: tuple[int, ...]
    reduced: tuple[int, ...]


def _largest_prime_factor(n: int) -> int:
    return max(factorize(n), default=1)


def division_minimal(moduli: Iterable[int], p: int) -> DivisionMinimalSet:
    """Moduli not properly divisible by another member, and their quotients by ``p``."""
    source = tuple(sorted(set(int(m) for m in moduli)))
    for m in source:
        if m % p:
            raise ValueError(f"modulus {m} is not divisible by {p}")
        if _largest_prime_factor(m) > p:
            raise ValueError(f"modulus {m} has a prime factor above {p}")
    minimal = tuple(m for m in source if not any(k != m and m % k == 0 for k in source))
    return DivisionMinimalSet(source, p, minimal, tuple(m // p for m in minimal))


def inclusion_exclusion_sum(reduced: Sequence[int], cap: int = SUBSET_CAP) -> Fraction:
    """``sum over nonempty J of (-1)^(|J|+1) / lcm(J)``, i.e. the density of the
    union of the classes ``0 mod d``."""
    ds = [int(d) for d in reduced]
    if len(ds) > cap:
        raise ValueError(f"{len(ds)} moduli exceed the subset-enumeration cap {cap}")
    if any(d < 1 for d in ds):
        raise ValueError("moduli must be positive")
    if not ds:
        return Fraction(0)
    big = math.lcm(*ds)
    total = 0
    # depth-first over subsets, carrying the running lcm and sign
    stack = [(0, 1, -1)]
    while stack:
        start, cur, sign = stack.pop()
        for k in range(start, len(ds)):
            nxt = math.lcm(cur, ds[k])
            total += -sign * (big // nxt)
            stack.append((k + 1, nxt, -sign))
    return Fraction(total, big)


def rogers_check(classes: Sequence, budget: int | None = None) -> LemmaReport:
    """Density of the given classes is at least that of the same moduli at residue 0."""
    system = CoveringSystem(classes)
    actual = covered_density(system, budget)
    zeros = covered_density([Congruence(0, c.modulus) for c in system], budget)
    report = LemmaReport(
        name="rogers",
        claim="union density with the given residues >= union density with all residues 0",
        inputs={"classes": [(c.residue, c.modulus) for c in system]},
    )
    report.fact("density", actual >= zeros, f"{actual} >= {zeros}", given=actual, zero_residues=zeros)
    return report


def m1_mass(p: int) -> Fraction:
    """Sum of 1/n over ``p``-smooth n divisible by ``p``."""
    out = Fraction(1, p - 1)
    for q in range(2, p):
        if all(q % d for d in range(2, math.isqrt(q) + 1)):
            out *= Fraction(q, q - 1)
    return out


def lewis_bound_check(moduli: Iterable[int], p: int, period: int) -> LemmaReport:
    """``sum 1/m`` over the family is at most the divisor-restricted mass of the
    smooth multiples of its minimal elements, which is at most
    ``inclusion_exclusion_sum(D) * M_1(p)``."""
    dm = division_minimal(moduli, p)
    if any(period % m for m in dm.source):
        raise ValueError("every modulus must divide the period")
    lhs = sum((Fraction(1, m) for m in dm.source), Fraction(0))
    divisors = [1]
    for q, e in factorize(period).items():
        divisors = [d * q**k for d in divisors for k in range(e + 1)]
    restricted = sum(
        (Fraction(1, n) for n in divisors
         if _largest_prime_factor(n) <= p and any(n % m == 0 for m in dm.minimal)),
        Fraction(0),
    )
    ie = inclusion_exclusion_sum(dm.reduced)
    rhs = ie * m1_mass(p)
    report = LemmaReport(name="lewis-bound", claim="sum 1/m <= restricted multiple mass <= IE * M_1(p)",
                         inputs={"moduli": list(dm.source), "p": p, "period": period})
    report.fact("family<=restricted", lhs <= restricted, f"{lhs} <= {restricted}")
    report.fact("restricted<=product", restricted <= rhs, f"{restricted} <= {rhs}")
    return report


def shift_cover_witness(n: int, a_j: int, m_j_reduced: int, p: int, e: int, a: int, m: int) -> int:
    """Smallest ``t`` in ``1..p`` with ``n + t*m_j'*m = a_j (mod p^e)``.

    The resulting integer lies in both ``a_j (mod m_j' p)`` and ``a (mod m)``.
    """
    if e < 1:
        raise ValueError("e must be at least 1")
    if m_j_reduced % p ** (e - 1) or m_j_reduced % p**e == 0:
        raise ValueError(f"{p}^{e - 1} must exactly divide {m_j_reduced}")
    if math.gcd(m, p) != 1:
        raise ValueError(f"{m} must be coprime to {p}")
    if (n - a_j) % m_j_reduced or (n - a) % m:
        raise ValueError("n must lie in both starting classes")
    step_size = m_j_reduced * m
    for t in range(1, p + 1):
        w = n + t * step_size
        if (w - a_j) % p**e == 0:
            if (w - a_j) % (m_j_reduced * p) or (w - a) % m:
                raise AssertionError("witness left one of the classes")
            return t
    raise AssertionError("no lift found; hypotheses should make this impossible")


# ---------------------------------------------------------------------------
# coverings with small minimum modulus

def _tower(base: int, residue: int, depth: int) -> list[Congruence]:
    """Cover ``residue (mod base)``: halve it ``depth`` times, then finish the
    last piece with a scaled copy of the classic five-class system."""
    out = [Congruence(residue + base * 2 ** (j - 1), base * 2**j) for j in range(1, depth + 1)]
    scale = base * 2**depth
    out += [Congruence(residue + scale * a, scale * m) for a, m in CLASSIC]
    return out


def _chain_depths(levels: int) -> list[int]:
    # consecutive towers share a 3-adic layer; keep their 3*2^j moduli apart
    return [4 + 3 * (levels - 1 - k) for k in range(levels)]


def _min3(levels: int) -> list[Congruence]:
    out: list[Congruence] = []
    c = 0
    for k, depth in enumerate(_chain_depths(levels)):
        step_k = 3**k
        out.append(Congruence(c, 3 * step_k))
        out += _tower(3 * step_k, c + step_k, depth)
        c += 2 * step_k
    scale = 3**levels
    out += [Congruence(c + scale * a, scale * m) for a, m in END_CAP]
    return out


def _min4(levels: int, depth: int) -> list[Congruence]:
    evens = _tower(2, 0, depth)
    odds = [Congruence(1 + 2 * c.residue, 2 * c.modulus) for c in _min3(levels)]
    return evens + odds


def _verified(classes: list[Congruence], m0: int, epsilon: Fraction, budget: int) -> CoveringSystem | None:
    system = CoveringSystem(classes)
    if reciprocal_sum(system) >= 1 + epsilon:
        return None
    period = lcm_moduli(system)
    if period > budget:
        raise ScanBudgetError(period, budget)
    if not is_distinct(system):
        raise ConstructionError("construction produced a repeated modulus")
    if min_modulus(system) != m0:
        raise ConstructionError(f"minimum modulus is {min_modulus(system)}, wanted {m0}")
    if not is_covering(system, budget):
        raise ConstructionError("construction failed to cover")
    return system


def build_small_min_modulus_covering(m0: int, epsilon, budget: int = DEFAULT_SCAN_BUDGET) -> CoveringSystem:
    """A distinct covering with minimum modulus ``m0`` and reciprocal sum below ``1 + epsilon``.

    Every returned system has been checked by exhaustive scan.  Raises
    :class:`ScanBudgetError` when ``epsilon`` is too small for the scan budget.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if m0 not in (2, 3, 4):
        raise ValueError("minimum modulus must be 2, 3 or 4")
    for levels in count(0 if m0 == 2 else 1):
        if m0 == 2:
            classes = _tower(1, 0, levels)
        elif m0 == 3:
            classes = _min3(levels)
        else:
            top = _chain_depths(levels)[0]
            classes = _min4(levels, top + 3)
        found = _verified(classes, m0, eps, budget)
        if found is not None:
            return found
    raise ConstructionError("unreachable")  # pragma: no cover


# ---------------------------------------------------------------------------
# greedy covering by powers of two

def alternating_integers() -> Iterator[int]:
    """0, 1, -1, 2, -2, ..."""
    yield 0
    for k in count(1):
        yield k
        yield -k


def greedy_power2_covering(t: int, steps: int, ordering: Iterable[int] | None = None) -> CoveringSystem:
    """Classes ``k mod 2^(t+j)`` for ``j = 1..steps``, each ``k`` the first integer
    of the ordering not yet covered."""
    if t < 0 or steps < 1:
        raise ValueError("need t >= 0 and at least one step")
    seq = iter(ordering if ordering is not None else alternating_integers())
    seen: list[int] = []
    classes: list[Congruence] = []
    pos = 0
    for j in range(1, steps + 1):
        while True:
            while pos >= len(seen):
                seen.append(next(seq))
            k = seen[pos]
            if not any(k in c for c in classes):
                break
            pos += 1
        classes.append(Congruence(k, 2 ** (t + j)))
    return CoveringSystem(classes)
