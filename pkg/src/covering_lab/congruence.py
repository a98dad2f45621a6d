"""Residue classes, covering systems and their exact densities."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_SCAN_BUDGET = 10**8
_CHUNK = 1 << 22


class ScanBudgetError(ValueError):
    """The lcm of the moduli is too large for an exhaustive residue scan."""

    def __init__(self, lcm: int, budget: int):
        super().__init__(f"lcm of moduli is {lcm}, above the scan budget {budget}")
        self.lcm = lcm
        self.budget = budget


class SystemFormatError(ValueError):
    """Malformed covering-system input."""


@dataclass(frozen=True, order=True)
class Congruence:
    """The class ``residue (mod modulus)``; the residue is reduced into ``[0, modulus)``."""

    residue: int
    modulus: int

    def __post_init__(self):
        if isinstance(self.modulus, bool) or not isinstance(self.modulus, int):
            raise TypeError("modulus must be an integer")
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "residue", int(self.residue) % self.modulus)

    def __contains__(self, n: int) -> bool:
        return (n - self.residue) % self.modulus == 0

    @property
    def density(self) -> Fraction:
        return Fraction(1, self.modulus)

    def shifted(self, t: int) -> "Congruence":
        return Congruence(self.residue + t, self.modulus)

    def intersect(self, other: "Congruence") -> "Congruence | None":
        """Intersection via the CRT, or ``None`` when the classes are disjoint."""
        g = math.gcd(self.modulus, other.modulus)
        diff = other.residue - self.residue
        if diff % g:
            return None
        m1, m2 = self.modulus // g, other.modulus // g
        k = (diff // g) * pow(m1, -1, m2) % m2 if m2 > 1 else 0
        return Congruence(self.residue + self.modulus * k, self.modulus * m2)

    def __str__(self) -> str:
        return f"{self.residue} (mod {self.modulus})"


@dataclass(frozen=True)
class CoveringSystem:
    """An ordered, possibly non-covering, list of residue classes."""

    classes: tuple[Congruence, ...]

    def __init__(self, classes: Iterable = ()):
        object.__setattr__(self, "classes", tuple(_as_congruence(c) for c in classes))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "CoveringSystem":
        return cls(Congruence(a, m) for a, m in pairs)

    @classmethod
    def from_json(cls, text: str) -> "CoveringSystem":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SystemFormatError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
        if not isinstance(data, list):
            raise SystemFormatError("expected a JSON array of {\"a\": int, \"m\": int} objects")
        out = []
        for k, item in enumerate(data):
            if not isinstance(item, dict) or set(item) != {"a", "m"}:
                raise SystemFormatError(f"entry {k}: expected an object with keys 'a' and 'm'")
            a, m = item["a"], item["m"]
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in (a, m)):
                raise SystemFormatError(f"entry {k}: 'a' and 'm' must be integers")
            if m < 1:
                raise SystemFormatError(f"entry {k}: modulus {m} is not positive")
            out.append(Congruence(a, m))
        return cls(out)

    def to_json(self) -> str:
        return json.dumps([{"a": c.residue, "m": c.modulus} for c in self.classes])

    @property
    def moduli(self) -> list[int]:
        return [c.modulus for c in self.classes]

    def shifted(self, t: int) -> "CoveringSystem":
        return CoveringSystem(c.shifted(t) for c in self.classes)

    def __iter__(self) -> Iterator[Congruence]:
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)


def _as_congruence(c) -> Congruence:
    if isinstance(c, Congruence):
        return c
    a, m = c
    return Congruence(a, m)


def _classes(system) -> tuple[Congruence, ...]:
    if isinstance(system, CoveringSystem):
        return system.classes
    return tuple(_as_congruence(c) for c in system)


def lcm_moduli(system) -> int:
    classes = _classes(system)
    if not classes:
        raise ValueError("lcm of an empty system is undefined")
    return reduce(math.lcm, (c.modulus for c in classes), 1)


def _check_budget(lcm: int, budget: int | None) -> None:
    limit = DEFAULT_SCAN_BUDGET if budget is None else budget
    if lcm > limit:
        raise ScanBudgetError(lcm, limit)


def scan_counts(classes: Sequence[Congruence], period: int, chunk: int = _CHUNK):
    """Yield ``(covered, covered_twice)`` counts for consecutive windows of ``[0, period)``.

    Every modulus must divide ``period``.  Memory stays at one window.
    """
    for start in range(0, period, chunk):
        width = min(chunk, period - start)
        seen = np.zeros(width, dtype=bool)
        twice = np.zeros(width, dtype=bool)
        for c in classes:
            first = (c.residue - start) % c.modulus
            view = seen[first::c.modulus]
            twice[first::c.modulus] |= view
            seen[first::c.modulus] = True
        yield int(seen.sum()), int(twice.sum())


def _covered_count(classes, period: int) -> int:
    return sum(covered for covered, _ in scan_counts(classes, period))


def is_covering(system, budget: int | None = None) -> bool:
    """True iff every residue modulo the lcm lies in some class."""
    classes = _classes(system)
    if not classes:
        return False
    period = lcm_moduli(classes)
    _check_budget(period, budget)
    return _covered_count(classes, period) == period


def is_exact(system, budget: int | None = None) -> bool:
    """True iff every residue is covered exactly once."""
    classes = _classes(system)
    if not classes:
        return False
    period = lcm_moduli(classes)
    _check_budget(period, budget)
    covered = twice = 0
    for c, t in scan_counts(classes, period):
        covered += c
        twice += t
    return covered == period and twice == 0


def is_distinct(system) -> bool:
    moduli = [c.modulus for c in _classes(system)]
    return len(set(moduli)) == len(moduli)


def min_modulus(system) -> int:
    classes = _classes(system)
    if not classes:
        raise ValueError("empty system has no minimum modulus")
    return min(c.modulus for c in classes)


def reciprocal_sum(system) -> Fraction:
    return sum((Fraction(1, c.modulus) for c in _classes(system)), Fraction(0))


def covered_density(classes, budget: int | None = None) -> Fraction:
    """Exact density of the union of the given classes."""
    classes = _classes(classes)
    if not classes:
        return Fraction(0)
    period = lcm_moduli(classes)
    _check_budget(period, budget)
    return Fraction(_covered_count(classes, period), period)


def is_smooth(n: int, bound: int) -> bool:
    """True iff ``n`` has no prime factor above ``bound``."""
    for p in range(2, bound + 1):
        if n == 1:
            break
        while n % p == 0:
            n //= p
    return n == 1


def delta(system, budget: int | None = None) -> Fraction:
    """Density left uncovered by the classes whose moduli are 3-smooth."""
    smooth = [c for c in _classes(system) if is_smooth(c.modulus, 3)]
    return 1 - covered_density(smooth, budget)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def smooth_reciprocal_mass(prime_bound: int, min_mod: int) -> Fraction:
    """Sum of 1/m over ``prime_bound``-smooth m with ``m >= min_mod``.

    Computed as the full Euler product minus the finitely many terms below ``min_mod``.
    """
    if not _is_prime(prime_bound):
        raise ValueError(f"{prime_bound} is not prime")
    if min_mod < 1:
        raise ValueError("minimum modulus must be at least 1")
    primes = [p for p in range(2, prime_bound + 1) if _is_prime(p)]
    total = Fraction(1)
    for p in primes:
        total *= Fraction(p, p - 1)
    head = sum((Fraction(1, m) for m in range(1, min_mod) if is_smooth(m, prime_bound)), Fraction(0))
    return total - head
