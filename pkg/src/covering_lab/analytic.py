"""Rigorous evaluation of the explicit constants in the tail, M_1, difference and
smooth-number estimates.

Quantities that need the first 10^9 primes are taken from their published
values (tagged ``certified-input`` in reports) unless a full run supplies them;
see :mod:`covering_lab.fullscale`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import gmpy2
import mpmath

from .primes import (
    LOGP_OVER_P_E,
    MERTENS_B_UPPER,
    THETA_COEFF,
    PrimeTable,
    loglog_lemma_check,
    nth_prime_bounds,
    sieve_for_count,
)
from .report import LemmaReport
from .rigorous import RigorousReal, _down, _resolve, _up, euler_gamma, rr

BILLION = 10**9
P_BILLION = 22801763489  # p_{10^9}
DESK_PRIME_BUDGET = 10**7

DELTA_TAIL = Fraction(95007347, 1520117553)
ETA_STATED = Fraction(22801763295, 1425110206)
ETA_PRIME_STATED = Fraction(519920413784751336255, 32495025861546958528)

# values over the first 10^9 - 1 primes
M0_STATED = "36109748165730021774.850093"
RECIP_STATED = "3.4332861"
LOGP_OVER_P_STATED = "22.5175296"
M1_PRODUCT_STATED = "1.319884728e-18"
CERTIFIED = "certified-input"

N_TWELFTH = 15320302 * 10**14
N_SCALE = 28 * 10**19
N_MIN = 336 * 10**19
C_TWELFTH = "0.02250022"
C_GENERAL = "0.022143"

F_EXPONENT = "1.2173619"
M1_EXPONENT = "1.7826381"
LOG_DAMPING = "0.8913191"


# ---------------------------------------------------------------------------
# helpers

def _table_for(count: int, table: PrimeTable | None) -> PrimeTable:
    if table is not None:
        if not table.covers_index(count):
            raise IndexError(f"prime table stops before p_{count}")
        return table
    if count > DESK_PRIME_BUDGET:
        raise ValueError(f"{count} primes exceed the desk budget {DESK_PRIME_BUDGET}; use the full-scale run")
    return sieve_for_count(max(count, 1))


def _ratio(num: int, den: int, prec: int):
    q = gmpy2.mpq(num, den)
    return gmpy2.mpfr(q, prec, _down(prec)), gmpy2.mpfr(q, prec, _up(prec))


def prime_enclosure(N: int, table: PrimeTable | None = None, prec: int | None = None) -> tuple[RigorousReal, str]:
    """An enclosure of p_N and where it came from."""
    if table is not None and table.covers_index(N):
        return rr(table.nth(N), prec), "sieve"
    if N == BILLION:
        return rr(P_BILLION, prec), CERTIFIED
    t1, t2 = nth_prime_bounds(N, prec)
    return RigorousReal._raw(t1.lo, t2.hi, t1.prec), "nth-prime-bracket"


def geometric_grid(lo, hi, points: int) -> list[Fraction]:
    """``points`` exact rationals from ``lo`` to ``hi``, evenly spaced in log scale."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not 0 < lo < hi or points < 2:
        raise ValueError("need 0 < lo < hi and at least two points")
    ratio = math.log(hi / lo)
    out = [lo]
    for k in range(1, points - 1):
        x = Fraction(float(lo) * math.exp(ratio * k / (points - 1)))
        if lo < x < hi and x > out[-1]:
            out.append(x)
    out.append(hi)
    return out


def grid_monotone(fn: Callable[[RigorousReal], RigorousReal], lo, hi, increasing: bool,
                  points: int = 400, prec: int | None = None) -> tuple[bool, Fraction | None]:
    """Strict monotonicity of ``fn`` between consecutive grid points.

    Returns ``(holds, first_offending_point)``.
    """
    grid = geometric_grid(lo, hi, points)
    prev = fn(rr(grid[0], prec))
    for x in grid[1:]:
        cur = fn(rr(x, prec))
        ok = prev.definitely_lt(cur) if increasing else cur.definitely_lt(prev)
        if not ok:
            return False, x
        prev = cur
    return True, None


# ---------------------------------------------------------------------------
# products and prefix sums over the first primes

def m0_factor(p: int) -> Fraction:
    return 1 + Fraction(15 * p**3 + 5 * p**2 + 5 * p - 1, (p - 1) ** 4)


def m0_products(counts: Iterable[int], table: PrimeTable | None = None,
                prec: int | None = None) -> dict[int, RigorousReal]:
    """``prod_{1 <= j < n} m0_factor(p_j)`` for each requested ``n``, in one pass."""
    prec = _resolve(prec)
    wanted = sorted(set(int(n) for n in counts))
    if not wanted or wanted[0] < 1:
        raise ValueError("prime counts must be positive")
    table = _table_for(max(wanted[-1] - 1, 1), table)
    d, u = _down(prec), _up(prec)
    lo, hi = gmpy2.mpfr(1, prec), gmpy2.mpfr(1, prec)
    done = 0
    out = {}
    for n in wanted:
        while done < n - 1:
            p = int(table.primes[done])
            den = (p - 1) ** 4
            flo, fhi = _ratio(den + 15 * p**3 + 5 * p**2 + 5 * p - 1, den, prec)
            lo, hi = d.mul(lo, flo), u.mul(hi, fhi)
            done += 1
        out[n] = RigorousReal._raw(lo, hi, prec)
    return out


def m0_product(n: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    return m0_products([n], table, prec)[n]


def reciprocal_prime_prefix(n: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``sum_{1 <= j < n} 1/p_j``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return rr(0, prec)
    return _table_for(n - 1, table).prefix_sum("reciprocal", n - 1, prec)


def logp_over_p_prefix(n: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``sum_{1 <= j < n} log(p_j)/p_j``."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return rr(0, prec)
    return _table_for(n - 1, table).prefix_sum("logp_over_p", n - 1, prec)


def m1_exact(i: int, table: PrimeTable | None = None) -> Fraction:
    """``M_1(p_i) = (1/(p_i - 1)) prod_{j<i} p_j/(p_j - 1)`` as an exact rational."""
    if i < 1:
        raise ValueError("i must be positive")
    table = _table_for(i, table)
    out = Fraction(1, table.nth(i) - 1)
    for j in range(1, i):
        p = table.nth(j)
        out *= Fraction(p, p - 1)
    return out


def m1(i: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``M_1(p_i)``, built with one multiplication per prime."""
    prec = _resolve(prec)
    if i < 1:
        raise ValueError("i must be positive")
    table = _table_for(i, table)
    d, u = _down(prec), _up(prec)
    lo, hi = gmpy2.mpfr(1, prec), gmpy2.mpfr(1, prec)
    for j in range(1, i):
        p = table.nth(j)
        lo, hi = d.mul(lo, d.div(p, p - 1)), u.mul(hi, u.div(p, p - 1))
    q = table.nth(i) - 1
    return RigorousReal._raw(d.div(lo, q), u.div(hi, q), prec)


def m1_products(i_maxes: Iterable[int], table: PrimeTable | None = None,
                prec: int | None = None) -> dict[int, RigorousReal]:
    """``prod_{i=3}^{i_max} (1 - M_1(p_i))`` for each requested ``i_max``, in one pass."""
    prec = _resolve(prec)
    wanted = sorted(set(int(i) for i in i_maxes))
    if not wanted or wanted[0] < 3:
        raise ValueError("the product starts at i = 3; i_max must be at least 3")
    table = _table_for(wanted[-1], table)
    d, u = _down(prec), _up(prec)
    r_lo, r_hi = gmpy2.mpfr(1, prec), gmpy2.mpfr(1, prec)
    lo, hi = gmpy2.mpfr(1, prec), gmpy2.mpfr(1, prec)
    i = 1
    out = {}
    for target in wanted:
        while i <= target:
            p = int(table.primes[i - 1])
            if i >= 3:
                f_lo = d.div(d.sub(p - 1, r_hi), p - 1)
                f_hi = u.div(u.sub(p - 1, r_lo), p - 1)
                if not (f_lo > 0 and f_hi < 1):
                    raise ArithmeticError(f"1 - M_1(p_{i}) is not inside (0, 1)")
                lo, hi = d.mul(lo, f_lo), u.mul(hi, f_hi)
            r_lo, r_hi = d.mul(r_lo, d.div(p, p - 1)), u.mul(r_hi, u.div(p, p - 1))
            i += 1
        out[target] = RigorousReal._raw(lo, hi, prec)
    return out


def m1_product(i_max: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    return m1_products([i_max], table, prec)[i_max]


# ---------------------------------------------------------------------------
# the tail estimate

def delta_prime_constants() -> dict[str, Fraction]:
    """``delta'``, ``eta = 15/(1 - delta')`` and ``eta' = eta p'/(p' - 1)``."""
    eta = 15 / (1 - DELTA_TAIL)
    eta_prime = eta * Fraction(P_BILLION, P_BILLION - 1)
    return {"delta_prime": DELTA_TAIL, "eta": eta, "eta_prime": eta_prime}


def telescoping_identity(n: int, k: int) -> bool:
    """``1/(n...(n+k)) = (1/k)(1/(n...(n+k-1)) - 1/((n+1)...(n+k)))``, checked exactly."""
    lhs = Fraction(1, math.prod(range(n, n + k + 1)))
    rhs = Fraction(1, k) * (Fraction(1, math.prod(range(n, n + k))) - Fraction(1, math.prod(range(n + 1, n + k + 1))))
    return lhs == rhs


def power_tail_closed_form(x: int, k: int) -> Fraction:
    """Upper bound for ``sum 1/(p - 1)^k`` over primes ``p >= x``, summed by telescoping."""
    if k < 2 or x <= k:
        raise ValueError("need k >= 2 and x > k")
    return Fraction(1, (k - 1) * math.prod(range(x - k, x - 1)))


_TAIL_STATED = {2: "4.39e-11", 3: "9.62e-22", 4: "2.82e-32"}
_SIGMA_WEIGHT = {2: Fraction(10, 3), 3: Fraction(4), 4: Fraction(8, 5)}
_SIGMA_STATED = {2: "1.464e-10", 3: "3.85e-21", 4: "4.52e-32"}


def sigma_bounds(start: int | None = 10**4, table: PrimeTable | None = None,
                 prec: int | None = None) -> LemmaReport:
    """Telescoping bounds on the power sums of ``1/(p_j - 1)`` beyond a start index.

    The closed forms are checked at ``p_{10^9}``; with ``start`` given they are
    also compared with sieved partial sums from that index on.
    """
    prec = _resolve(prec)
    report = LemmaReport(name="sigma-bounds", claim="power sums of 1/(p-1) beyond p_{10^9} are tiny",
                         inputs={"p_billion": P_BILLION, "start": start, "precision_bits": prec})
    samples = [(7, 3), (2, 2), (10, 2), (P_BILLION - 4, 3), (P_BILLION - 3, 2)]
    report.fact("telescoping", all(telescoping_identity(n, k) for n, k in samples),
                "partial-fraction identity holds exactly", samples=samples)
    for k in (2, 3, 4):
        closed = power_tail_closed_form(P_BILLION, k)
        stated = Fraction(_TAIL_STATED[k])
        report.fact(f"tail-{k}", closed < stated, f"closed form for k={k} < {_TAIL_STATED[k]}", value=closed)
        weighted = _SIGMA_WEIGHT[k] * stated
        report.fact(f"sigma-{k}", weighted < Fraction(_SIGMA_STATED[k]),
                    f"{_SIGMA_WEIGHT[k]} * {_TAIL_STATED[k]} < {_SIGMA_STATED[k]}", value=weighted)
    rest = sum(Fraction(_SIGMA_STATED[k]) for k in (2, 3, 4))
    report.fact("sigma-2..4", rest < Fraction("1.465e-10"), "sigma_2 + sigma_3 + sigma_4 < 1.465e-10", value=rest)

    p = rr(P_BILLION, prec)
    lp = p.log()
    step = rr(MERTENS_B_UPPER, prec) + 1 / (2 * lp * lp) - rr(RECIP_STATED, prec)
    report.bound("sigma-1", step, "<=", "-3.17090988",
                 claim="B + 1/(2 log^2 p') - 3.4332861 <= -3.17090988", certified=RECIP_STATED)

    if start is not None:
        table = table if table is not None else sieve_for_count(max(10 * start, start + 1000))
        if not table.covers_index(start):
            raise IndexError(f"prime table stops before p_{start}")
        ps = [int(q) for q in table.primes[start - 1:]]
        d, u = _down(prec), _up(prec)
        for k in (2, 3, 4):
            lo, hi = d.add(0, 0), u.add(0, 0)
            for q in ps:
                lo, hi = d.add(lo, d.div(1, (q - 1) ** k)), u.add(hi, u.div(1, (q - 1) ** k))
            partial = RigorousReal._raw(lo, hi, prec)
            beyond = rr(power_tail_closed_form(table.limit + 1, k), prec)
            report.bound(f"desk-{k}", partial + beyond, "<=", power_tail_closed_form(ps[0], k),
                         claim=f"sum over j >= {start} of 1/(p_j-1)^{k} <= telescoped bound at p_{start}={ps[0]}",
                         partial=partial)
    return report


@dataclass(frozen=True)
class TailPolynomial:
    """``F`` with ``int_x^inf log^k t / t^4 dt = F(log x) / x^3``.

    ``coefficients[j]`` multiplies ``u^j``.
    """

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def g_coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients of ``G(x) = x^deg F(1/x)``."""
        return tuple(reversed(self.coefficients))

    @staticmethod
    def _horner(coeffs: Sequence[Fraction], x: RigorousReal) -> RigorousReal:
        acc = rr(coeffs[-1], x.prec)
        for c in reversed(coeffs[:-1]):
            acc = acc * x + c
        return acc

    def F(self, u) -> RigorousReal:
        return self._horner(self.coefficients, u if isinstance(u, RigorousReal) else rr(u))

    def G(self, x) -> RigorousReal:
        return self._horner(self.g_coefficients, x if isinstance(x, RigorousReal) else rr(x))

    def derivative(self) -> tuple[Fraction, ...]:
        return tuple(j * c for j, c in enumerate(self.coefficients))[1:] + (Fraction(0),)


def tail_polynomials(degree: int = 16) -> list[TailPolynomial]:
    """``F_0, ..., F_degree`` from ``F_k = u^k/3 + (k/3) F_{k-1}``."""
    out = [TailPolynomial((Fraction(1, 3),))]
    for k in range(1, degree + 1):
        prev = out[-1].coefficients
        coeffs = [Fraction(k, 3) * c for c in prev] + [Fraction(1, 3)]
        out.append(TailPolynomial(tuple(coeffs)))
    return out


def tail_polynomial(degree: int = 16) -> TailPolynomial:
    return tail_polynomials(degree)[-1]


def recurrence_residuals(degree: int = 16) -> list[Fraction]:
    """Largest coefficient of ``F_k - u^k/3 - (k/3)F_{k-1}`` and of ``3F_k - F_k' - u^k``, per k."""
    polys = tail_polynomials(degree)
    out = []
    for k in range(1, degree + 1):
        fk = list(polys[k].coefficients)
        prev = list(polys[k - 1].coefficients) + [Fraction(0)]
        rec = [fk[j] - Fraction(k, 3) * prev[j] - (Fraction(1, 3) if j == k else 0) for j in range(k + 1)]
        der = polys[k].derivative()
        ode = [3 * fk[j] - der[j] - (1 if j == k else 0) for j in range(k + 1)]
        out.append(max(abs(v) for v in rec + ode))
    return out


def log_power_tail_integral(x, k: int = 16, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``int_x^inf log^k t / t^4 dt`` for ``x > 1``."""
    xx = x if isinstance(x, RigorousReal) else rr(x, prec)
    return tail_polynomial(k).F(xx.log()) / xx**3


def tail_integral_quadrature(x, k: int = 16, dps: int = 40) -> tuple[mpmath.mpf, mpmath.mpf]:
    """The closed form next to an adaptive-quadrature value of the same integral."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        poly = tail_polynomial(k)
        u = mpmath.log(x)
        closed = sum(mpmath.mpf(c.numerator) / c.denominator * u**j for j, c in enumerate(poly.coefficients)) / x**3
        # substitute t = x e^s so the integrand decays like e^{-3s}
        quad = mpmath.quad(lambda s: (u + s) ** k * mpmath.exp(-3 * s), [0, 10, 40, mpmath.inf]) / x**3
        return +closed, +quad


def tail_integral_bound(N: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``int_{p_N - 1}^inf log^16 t / t^4 dt`` for ``N >= 10^9``."""
    if N < BILLION:
        raise ValueError(f"N = {N} is below 10^9, outside the tail estimate's range")
    p, _ = prime_enclosure(N, table, prec)
    # decreasing in the lower limit
    hi = log_power_tail_integral(rr(p.lo, p.prec) - 1)
    lo = log_power_tail_integral(rr(p.hi, p.prec) - 1)
    return RigorousReal._raw(lo.lo, hi.hi, p.prec)


def _log16_over_cube(x: RigorousReal) -> RigorousReal:
    return x.log() ** 16 / x**3


def tail_estimate(N: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``0.657743 log^16 p_N / p_N^3`` for ``N >= 10^9``."""
    if N < BILLION:
        raise ValueError(f"N = {N} is below 10^9, outside the tail estimate's range")
    p, _ = prime_enclosure(N, table, prec)
    c = rr("0.657743", p.prec)
    lo = c * _log16_over_cube(rr(p.hi, p.prec))
    hi = c * _log16_over_cube(rr(p.lo, p.prec))
    return RigorousReal._raw(lo.lo, hi.hi, p.prec)


def tail_constant_checks(prec: int | None = None) -> LemmaReport:
    """The three numeric links that close the tail estimate."""
    prec = _resolve(prec)
    report = LemmaReport(name="tail-constants", claim="constant chain of the tail estimate",
                         inputs={"precision_bits": prec})
    dp = rr(DELTA_TAIL, prec)
    report.bound("second-moment", 27 * rr("0.0033411", prec) / (256 * (1 - dp) * dp**3), "<", "1.539578883",
                 claim="27 * 0.0033411 / (256 (1 - delta') delta'^3) < 1.539578883")
    alpha, beta = rr("23.8501037", prec), rr("1.000000000132", prec)
    report.bound("beta-G", beta * tail_polynomial().G(1 / alpha), "<", "0.42722258614",
                 claim="beta * G(1/alpha) < 0.42722258614")
    report.bound("final-product", rr("1.5395788833", prec) * rr("0.42722258614", prec), "<", "0.657743",
                 claim="1.5395788833 * 0.42722258614 < 0.657743")
    return report


def tail_estimate_report(N: int = BILLION, table: PrimeTable | None = None, desk_count: int = 10**4,
                         prec: int | None = None, m0_value: RigorousReal | None = None) -> LemmaReport:
    """Every link of the tail estimate at ``N``.

    ``m0_value`` replaces the published product over the first 10^9 - 1 primes
    when a full run has computed it.
    """
    if N < BILLION:
        raise ValueError(f"N = {N} is below 10^9, outside the tail estimate's range")
    prec = _resolve(prec)
    report = LemmaReport(name="tailestimate", claim="sum_{i>=N} P_i(B_i) <= 0.657743 log^16 p_N / p_N^3",
                         inputs={"N": N, "precision_bits": prec, "desk_count": desk_count})
    consts = delta_prime_constants()
    report.fact("eta", consts["eta"] == ETA_STATED, "15/(1 - delta') equals the stated eta", value=consts["eta"])
    report.fact("eta-prime", consts["eta_prime"] == ETA_PRIME_STATED,
                "eta p'/(p'-1) equals the stated eta'", value=consts["eta_prime"])
    report.fact("eta-prime<16", consts["eta_prime"] < 16, "eta' < 16")
    report.fact("delta-range", 0 < DELTA_TAIL < Fraction(1, 2), "0 < delta' < 1/2")
    report.add(sigma_bounds(None, prec=prec))

    eta, eta_p = rr(consts["eta"], prec), rr(consts["eta_prime"], prec)
    if m0_value is None:
        m0 = rr(M0_STATED, prec)
        source = CERTIFIED
    else:
        m0, source = m0_value, "full-run"
    report.bound("product-constant", m0 * (-rr("3.17090988", prec) * eta_p + eta * rr("1.465e-10", prec)).exp(),
                 "<", "0.0033411", claim="M_0 exp(-3.17090988 eta' + 1.465e-10 eta) < 0.0033411", m0_source=source)
    desk = m0_product(desk_count, prec=prec)
    report.bound("desk-m0", desk, "<", M0_STATED,
                 claim=f"partial product over the first {desk_count - 1} primes stays below the full value")

    report.add(tail_constant_checks(prec))
    p = rr(P_BILLION, prec)
    ratio = p / (p - 1)
    report.bound("fourth-power-ratio", ratio**4, "<", "1.00000000018", claim="(p'/(p'-1))^4 < 1.00000000018")
    report.bound("combined-constant", rr("1.539578883", prec) * rr("1.00000000018", prec), "<=", "1.5395788833",
                 claim="1.539578883 * 1.00000000018 <= 1.5395788833")
    report.bound("alpha", p.log(), ">", "23.8501037", claim="log p' > 23.8501037")
    report.bound("beta", ratio**3, "<", "1.000000000132", claim="(p'/(p'-1))^3 < 1.000000000132")
    poly = tail_polynomial()
    report.fact("G-positive", all(c > 0 for c in poly.coefficients), "F has positive rational coefficients")
    report.fact("recurrence", all(r == 0 for r in recurrence_residuals()), "F satisfies its recurrence exactly")

    pN, pN_source = prime_enclosure(N, table, prec)
    for tag, end in (("lower", pN.lo), ("upper", pN.hi)):
        x = rr(end, prec)
        report.bound(f"integral@{tag}", log_power_tail_integral(x - 1) / _log16_over_cube(x), "<",
                     "0.42722258614", claim=f"integral / (log^16 p/p^3) < 0.42722258614 at the {tag} end of p_N")
        if pN.lo == pN.hi:
            break
    ok, bad = grid_monotone(_log16_over_cube, 209, 10**30, increasing=False, prec=128)
    report.fact("log16-decreasing", ok, "log^16 x / x^3 decreasing on [209, 1e30]", first_failure=bad)
    report.enclosures["p_N"] = pN
    report.enclosures["p_N_source"] = pN_source
    report.enclosures["bound"] = tail_estimate(N, table, prec)
    return report


# ---------------------------------------------------------------------------
# the lower bound on prod (1 - M_1(p_i))

def mertens_majorant(p, prec: int | None = None) -> RigorousReal:
    """``e^gamma log p (1 + 1/(2 log^2 p))``."""
    x = p if isinstance(p, RigorousReal) else rr(p, prec)
    lp = x.log()
    return euler_gamma(x.prec).exp() * lp * (1 + 1 / (2 * lp * lp))


def m1_lower_bound(N: int, table: PrimeTable | None = None, prec: int | None = None) -> RigorousReal:
    """Enclosure of ``3.84636486599 p_N^{-1.7826381} exp(-0.8913191/log p_N)`` for ``N >= 10^9``."""
    if N < BILLION:
        raise ValueError(f"N = {N} is below 10^9, outside the lemma's range")
    p, _ = prime_enclosure(N, table, prec)

    def at(x):
        return rr("3.84636486599", x.prec) / x ** rr(M1_EXPONENT, x.prec) * (-rr(LOG_DAMPING, x.prec) / x.log()).exp()

    # decreasing in p
    lo, hi = at(rr(p.hi, p.prec)), at(rr(p.lo, p.prec))
    return RigorousReal._raw(lo.lo, hi.hi, p.prec)


def m1_bound_report(N: int = BILLION, table: PrimeTable | None = None, grid_max: int = 10**4,
                    prec: int | None = None, product_value: RigorousReal | None = None,
                    logp_value: RigorousReal | None = None) -> LemmaReport:
    """Sub-checks behind the lower bound on ``prod_{i=3}^{N-1}(1 - M_1(p_i))``."""
    if N < BILLION:
        raise ValueError(f"N = {N} is below 10^9, outside the lemma's range")
    prec = _resolve(prec)
    table = table if table is not None and table.covers_index(grid_max + 1) else sieve_for_count(grid_max + 1)
    report = LemmaReport(name="m1bound", claim="prod_{i=3}^{N-1} (1 - M_1(p_i)) > 3.84636486599 p_N^-1.7826381 "
                         "exp(-0.8913191/log p_N)", inputs={"N": N, "grid_max": grid_max, "precision_bits": prec})

    # the Mertens-type majorant on the sieved range
    d, u = _down(prec), _up(prec)
    r_lo, r_hi = gmpy2.mpfr(1, prec), gmpy2.mpfr(1, prec)
    mertens_bad = []
    for i in range(2, grid_max + 2):
        p = table.nth(i - 1)
        r_lo, r_hi = d.mul(r_lo, d.div(p, p - 1)), u.mul(r_hi, u.div(p, p - 1))
        if i >= 63 and not RigorousReal._raw(r_lo, r_hi, prec).definitely_lt(mertens_majorant(p, prec)):
            mertens_bad.append(i)
    report.fact("mertens-majorant", not mertens_bad,
                f"prod_{{j<i}} p_j/(p_j-1) < e^gamma log p_(i-1) (1 + 1/(2 log^2 p_(i-1))) for 63 <= i <= {grid_max + 1}",
                failures=mertens_bad[:20])

    ratios = [mertens_majorant(table.nth(i), prec) / (table.nth(i) - 1) for i in range(2, grid_max + 1)]
    falling = [i + 2 for i, (a, b) in enumerate(zip(ratios, ratios[1:])) if not b.definitely_lt(a)]
    report.fact("ratio-decreasing", not falling, f"B_i/(p_i-1) decreasing for 2 <= i <= {grid_max}",
                failures=falling[:20])
    b3 = ratios[1]
    report.bound("B3-stated", b3, "<=", "0.731", claim="B_3/(p_3-1) <= 0.731 as stated")
    report.bound("B3-below-one", b3, "<", 1, claim="B_3/(p_3-1) < 1, which is what the argument uses")
    ok, bad = grid_monotone(lambda x: (x.log() + 1 / (2 * x.log())) / (x - 1), 3, 10**30, increasing=False, prec=128)
    report.fact("majorant-shape", ok, "(log x + 1/(2 log x))/(x-1) decreasing on [3, 1e30]", first_failure=bad)

    p = rr(P_BILLION, prec)
    x0 = mertens_majorant(p, prec) / (p - 1)
    report.bound("log-linearisation", (1 - x0).log() + rr("1.000000001", prec) * x0, ">", 0,
                 claim="log(1 - B/(p'-1)) > -1.000000001 B/(p'-1)")
    ok, bad = grid_monotone(lambda x: (1 - x).log() / x, Fraction(1, 1000), Fraction(999, 1000), increasing=False,
                            prec=128)
    report.fact("log-ratio-shape", ok, "log(1-x)/x decreasing on [0.001, 0.999]", first_failure=bad)
    fiber = euler_gamma(prec).exp() * p / (p - 1) * (1 + 1 / (2 * p.log() ** 2))
    report.bound("fiber", fiber, "<=", "1.782638", claim="e^gamma p'/(p'-1) (1 + 1/(2 log^2 p')) <= 1.782638")
    report.fact("fiber-rounding", Fraction("1.000000001") * Fraction("1.782638") <= Fraction("1.782638002"),
                "1.000000001 * 1.782638 <= 1.782638002")
    report.fact("exponent-rounding", Fraction("1.782638002") <= Fraction(M1_EXPONENT)
                and Fraction("1.782638002") / 2 <= Fraction(LOG_DAMPING),
                "1.782638002 <= 1.7826381 and 1.782638002/2 <= 0.8913191")

    lpp, lpp_source = (logp_value, "full-run") if logp_value is not None else (rr(LOGP_OVER_P_STATED, prec), CERTIFIED)
    report.bound("exponent", rr("1.782638002", prec) * (lpp - rr(LOGP_OVER_P_E, prec)), ">=", "42.51611578",
                 claim="1.782638002 (22.5175296 - E) >= 42.51611578", logp_source=lpp_source)
    product, product_source = ((product_value, "full-run") if product_value is not None
                               else (rr(M1_PRODUCT_STATED, prec), CERTIFIED))
    report.bound("assembly", product * rr("42.51611578", prec).exp(), ">", "3.84636486599",
                 claim="1.319884728e-18 * exp(42.51611578) > 3.84636486599", product_source=product_source)
    desk = m1_product(grid_max, table, prec)
    report.bound("desk-product", desk, ">", M1_PRODUCT_STATED,
                 claim=f"partial product up to i = {grid_max} stays above the full value")

    damping = (-rr(LOG_DAMPING, prec) / p.log()).exp()
    report.fact("damping-at-billion", damping.definitely_ge("0.963317996") and damping.definitely_lt("0.963317997"),
                "exp(-0.8913191/log p') = 0.963317996...", value=damping)
    report.enclosures["bound"] = m1_lower_bound(N, prec=prec)
    return report


# ---------------------------------------------------------------------------
# the difference lemma

def lemma_N(delta) -> int:
    """The prime index attached to ``Delta``."""
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 12):
        raise ValueError(f"Delta = {delta} is outside (0, 1/12]")
    if delta == Fraction(1, 12):
        return N_TWELFTH
    q = N_SCALE / delta
    return -(-q.numerator // q.denominator)


def tau_bounds(N: int, prec: int | None = None) -> tuple[RigorousReal, RigorousReal]:
    return nth_prime_bounds(N, prec)


def difference_f(x: RigorousReal, delta) -> RigorousReal:
    """``5.8478233 Delta x^1.2173619 / log^16 x * exp(-0.8913191/log x)``."""
    lx = x.log()
    return (rr("5.8478233", x.prec) * rr(Fraction(delta), x.prec) * x ** rr(F_EXPONENT, x.prec) / lx**16
            * (-rr(LOG_DAMPING, x.prec) / lx).exp())


def min_power_log_ratio(prec: int | None = None, points: int = 2001) -> dict:
    """Minimum over x > 1 of ``x^0.2173619 / log^14.7826381(2.8e20 x)``.

    The derivative has the sign of ``a log(Kx) - b``, which increases with x,
    so a grid cell where that sign flips brackets the minimiser; the minimum
    is at least ``x_k^a / log^b(K x_{k+1})`` on that cell.
    """
    prec = _resolve(prec)
    a, b, K = rr("0.2173619", prec), rr("14.7826381", prec), rr(N_SCALE, prec)
    grid = geometric_grid(12 * 10**8, 126 * 10**7, points)

    def sign(x):
        s = a * (K * rr(x, prec)).log() - b
        return 1 if s.definitely_gt(0) else -1 if s.definitely_lt(0) else 0

    signs = [sign(x) for x in grid]
    cell = next((k for k in range(len(grid) - 1) if signs[k] == -1 and signs[k + 1] == 1), None)
    if cell is None or 0 in signs:
        raise ArithmeticError("could not bracket the minimiser")
    lo_x, hi_x = rr(grid[cell], prec), rr(grid[cell + 1], prec)
    lower = lo_x**a / (K * hi_x).log() ** b
    closed = (b - a * K.log() - b * (b / a).log()).exp()
    argmin = ((b / a) - K.log()).exp()
    return {"bracket": (grid[cell], grid[cell + 1]), "lower_bound": lower, "closed_form": closed, "argmin": argmin}


def difference_bound(delta, N: int | None = None, prec: int | None = None) -> LemmaReport:
    """``(0.657743 log^16 tau_2 / tau_2^3)(f(tau_1) - 1)`` with its proof-chain sub-checks."""
    delta = Fraction(delta)
    default_N = lemma_N(delta)
    N = default_N if N is None else int(N)
    prec = _resolve(prec)
    twelfth = delta == Fraction(1, 12)
    if twelfth:
        claim_value, claim = Fraction("4.7596769e-50"), "> 4.7596769e-50"
    else:
        claim_value, claim = Fraction("5.9329e-42") * delta**3, "> 5.9329e-42 Delta^3"
    report = LemmaReport(name="differencelem", claim=f"Delta prod(1-M_1) - sum P_i(B_i) {claim} at Delta = {delta}",
                         inputs={"Delta": delta, "N": N, "precision_bits": prec})
    t1, t2 = tau_bounds(N, prec)
    value = rr("0.657743", prec) * _log16_over_cube(t2) * (difference_f(t1, delta) - 1)
    report.enclosures["tau1"], report.enclosures["tau2"] = t1, t2
    report.enclosures["f_tau1"] = difference_f(t1, delta)
    report.enclosures["bound"] = value
    report.bound("positive", value, ">", 0, claim="the lower bound is positive")
    if N == default_N:
        report.bound("stated", value, ">", claim_value, claim=f"bound {claim}")
    else:
        report.notes.append("N differs from the lemma's choice; only positivity is claimed")

    report.fact("f-constant", Fraction("3.84636486599") / Fraction("0.657743") >= Fraction("5.8478233"),
                "3.84636486599 / 0.657743 >= 5.8478233")
    report.fact("f-exponent", 3 - Fraction(M1_EXPONENT) == Fraction(F_EXPONENT), "3 - 1.7826381 = 1.2173619")
    ok, bad = grid_monotone(lambda x: difference_f(x, 1), Fraction(49, 10) * 10**5, 10**30, increasing=True, prec=128)
    report.fact("f-increasing", ok, "f increasing on [4.9e5, 1e30]", first_failure=bad)

    if not twelfth:
        nm = rr(N_MIN, prec)
        lnm = nm.log()
        report.bound("loglog-estimate", 1 + lnm.log() / lnm, "<", "1.07875",
                     claim="1 + log log N_min / log N_min < 1.07875")
        t1min, _ = tau_bounds(N_MIN, prec)
        report.bound("damping", (-rr(LOG_DAMPING, prec) / t1min.log()).exp(), ">", "0.98348",
                     claim="exp(-0.8913191 / log tau_1(N_min)) > 0.98348")
        report.fact("5.7512", Fraction("5.8478233") * Fraction("0.98348") > Fraction("5.7512"),
                    "5.8478233 * 0.98348 > 5.7512")
        report.bound("1.71", rr("5.7512", prec) / rr("1.07875", prec) ** 16, ">", "1.71",
                     claim="5.7512 / 1.07875^16 > 1.71")
        report.bound("1.33225e25", rr("1.71", prec) * rr(N_SCALE, prec) ** rr(F_EXPONENT, prec), ">", "1.33225e25",
                     claim="1.71 (2.8e20)^1.2173619 > 1.33225e25")
        mn = min_power_log_ratio(prec)
        sub = report.bound("min-ratio", mn["lower_bound"], ">", "7.68e-26",
                           claim="min of x^0.2173619 / log^14.7826381(2.8e20 x) > 7.68e-26")
        sub.enclosures.update(bracket=mn["bracket"], closed_form=mn["closed_form"], argmin=mn["argmin"])
        report.fact("1.023", Fraction("1.33225e25") * Fraction("7.68e-26") > Fraction("1.023"),
                    "1.33225e25 * 7.68e-26 > 1.023")
        report.bound("f-tau1", difference_f(t1, delta), ">", "1.023", claim="f(tau_1) > 1.023")
        report.fact("0.015", Fraction("0.657743") * Fraction("0.023") > Fraction("0.015"), "0.657743 * 0.023 > 0.015")
        report.bound("0.0119489", rr("0.015", prec) / rr("1.07875", prec) ** 3, ">", "0.0119489",
                     claim="0.015 / 1.07875^3 > 0.0119489")
        ratio = rr(N_MIN, prec) / rr(N_MIN + 1, prec)
        report.bound("5.9329e-42", rr("0.0119489", prec) * lnm**13 / rr(N_SCALE, prec) ** 3 * ratio**3, ">",
                     "5.9329e-42", claim="0.0119489 log^13 N_min / (2.8e20)^3 * (N_min/(N_min+1))^3 > 5.9329e-42")
        report.bound("tau2-ratio", t2 / (rr(N, prec) * rr(N, prec).log()), "<", "1.07875",
                     claim="tau_2 < 1.07875 N log N")
        for label, fn, lo, inc in (
            ("x^1.2173619/log^16 x", lambda x: x ** rr(F_EXPONENT, x.prec) / x.log() ** 16, 510515, True),
            ("x^1.2173619/log^14.7826381 x",
             lambda x: x ** rr(F_EXPONENT, x.prec) / x.log() ** rr("14.7826381", x.prec), 187808, True),
            ("loglog x / log x", lambda x: x.log().log() / x.log(), 16, False),
        ):
            ok, bad = grid_monotone(fn, lo + 1, 10**30, increasing=inc, prec=128)
            report.fact(f"shape:{label}", ok, f"{label} {'increasing' if inc else 'decreasing'} beyond {lo}",
                        first_failure=bad)
    return report


# ---------------------------------------------------------------------------
# smooth numbers

def smooth_count_exact(limit: int, P: int, budget: int = 10**12) -> int:
    """Number of ``P``-smooth integers in ``[1, limit]``, 1 included."""
    if limit > budget:
        raise ValueError(f"limit {limit} exceeds the enumeration budget {budget}")
    if limit < 1:
        return 0
    ps = [p for p in range(2, P + 1) if all(p % q for q in range(2, math.isqrt(p) + 1))]

    def count(bound: int, k: int) -> int:
        # smooth numbers <= bound using primes ps[k:]
        if k == len(ps):
            return 1
        total, q = 0, 1
        while q <= bound:
            total += count(bound // q, k + 1)
            q *= ps[k]
        return total

    return count(limit, 0)


def granville_smooth_count_bound(X, N: int, prec: int | None = None) -> RigorousReal:
    """``(1/N!) prod_{p <= p_N} log X / log p``, evaluated through its logarithm.

    ``X`` must already include the factor ``prod_{p <= p_N} p``; see
    :func:`granville_bound_for_limit`.
    """
    prec = _resolve(prec)
    if N < 1:
        raise ValueError("N must be positive")
    xx = X if isinstance(X, RigorousReal) else rr(X, prec)
    table = _table_for(N, None)
    llx = xx.log().log()
    d, u = _down(prec), _up(prec)
    lo, hi = d.add(0, 0), u.add(0, 0)
    for k in range(N):
        p = int(table.primes[k])
        lo, hi = d.add(lo, d.log(d.log(p))), u.add(hi, u.log(u.log(p)))
    lfact = RigorousReal._raw(d.lgamma(N + 1)[0], u.lgamma(N + 1)[0], prec)
    total = N * llx - RigorousReal._raw(lo, hi, prec) - lfact
    return total.exp()


def granville_bound_for_limit(limit: int, P: int, prec: int | None = None) -> RigorousReal:
    """Granville's bound on the number of ``P``-smooth integers up to ``limit``."""
    ps = [p for p in range(2, P + 1) if all(p % q for q in range(2, math.isqrt(p) + 1))]
    return granville_smooth_count_bound(rr(limit * math.prod(ps), prec), len(ps), prec)


def smooth_tail_bound(delta, prec: int | None = None) -> LemmaReport:
    """Log-space bound on the reciprocal sum of ``p_N``-smooth integers above ``K``."""
    delta = Fraction(delta)
    N = lemma_N(delta)
    prec = _resolve(prec)
    twelfth = delta == Fraction(1, 12)
    c = rr(C_TWELFTH if twelfth else C_GENERAL, prec)
    report = LemmaReport(name="smoothbd",
                         claim=f"reciprocal sum of p_N-smooth m > K is astronomically small at Delta = {delta}",
                         inputs={"Delta": delta, "N": N, "c": C_TWELFTH if twelfth else C_GENERAL,
                                 "precision_bits": prec})
    n = rr(N, prec)
    ln = n.log()
    nlogn = n * ln
    _, t2 = tau_bounds(N, prec)
    lt2 = t2.log()

    # log X < (c + 1.08) N log N
    e1, e2, e3 = lt2 / nlogn, rr(THETA_COEFF, prec) * t2 / (lt2 * nlogn), ln.log() / ln
    log_x = lt2 + c * nlogn + t2 * (1 + rr(THETA_COEFF, prec) / lt2)
    small = rr(15, prec) * rr(10**20, prec)
    ls = small.log()
    _, t2s = tau_bounds(15 * 10**20, prec)
    report.bound("tau2<1.08NlogN", 1 + ls.log() / ls, "<", "1.08", claim="1 + log log N / log N < 1.08 at 1.5e21")
    report.bound("E1", (rr("1.08", prec).log() + ls.log()) / (small * ls) + 1 / small, "<", "1e-21",
                 claim="log tau_2 / (N log N) < 1e-21")
    report.bound("E2", rr(THETA_COEFF, prec) * rr("1.08", prec) / t2s.log(), "<", "0.00016",
                 claim="0.0077629 * 1.08 / log tau_2 < 0.00016")
    report.bound("E3", ls.log() / ls, "<", "0.07972", claim="log log N / log N < 0.07972")
    report.fact("E", Fraction("1e-21") + Fraction("0.00016") + Fraction("0.07972") < Fraction("0.08"), "E < 0.08")
    report.bound("E-at-N", e1 + e2 + e3, "<", "0.08", claim="E < 0.08 at this N")
    report.bound("log-X", log_x / nlogn - c, "<", "1.08", claim="log X < (c + 1.08) N log N")
    report.enclosures["log_X"] = log_x

    # count bound: N! > (N/e)^N and prod log p >= (log N)^N
    for m in (10, 100, 10**4):
        d, u = _down(prec), _up(prec)
        lg = RigorousReal._raw(d.lgamma(m + 1)[0], u.lgamma(m + 1)[0], prec)
        report.bound(f"stirling@{m}", lg - m * (rr(m, prec).log() - 1), ">", 0, claim=f"{m}! > ({m}/e)^{m}")
    loglog = loglog_lemma_check(2000)
    loglog.name = "loglog-sample"
    report.add(loglog)
    count_log = n * (1 + (c + rr("1.08", prec)).log())
    report.enclosures["log_smooth_count"] = count_log

    e_gamma = euler_gamma(prec).exp()
    if twelfth:
        mertens = e_gamma * lt2 * (1 + 1 / (2 * lt2 * lt2))
        report.bound("mertens", mertens, "<", 94, claim="e^gamma log tau_2 (1 + 1/(2 log^2 tau_2)) < 94")
        ln_tail = rr(94, prec).log() + count_log - c * nlogn
        log10_tail = ln_tail / rr(10, prec).log()
        report.enclosures["log10_tail"] = log10_tail
        report.bound("tail", log10_tail, "<", -(10**13), claim="log10(94 (e(c+1.08))^N / N^(cN)) < -1e13")
        log_k = c * nlogn
        report.bound("K", log_k, "<=", "1.681527e21", claim="N^(cN) <= exp(1.681527e21)")
        report.fact("epsilon", 2 * Fraction("1.681527e21") == Fraction("3.363054e21"),
                    "2 * 1.681527e21 = 3.363054e21")
        report.enclosures["log_K"] = log_k
        return report

    nm = rr(N_MIN, prec)
    lnm = nm.log()
    report.bound("1.00142", 1 + rr("1.07875", prec).log() / (nm * lnm).log(), "<", "1.00142",
                 claim="1 + log 1.07875 / log(N_min log N_min) < 1.00142")
    report.fact("1.0803", Fraction("1.07875") * Fraction("1.00142") < Fraction("1.0803"), "1.07875 * 1.00142 < 1.0803")
    report.bound("log-pN", lt2 / ln, "<", "1.0803", claim="log tau_2 < 1.0803 log N")
    report.bound("1.92443", e_gamma * (rr("1.0803", prec) + 1 / (rr("2.1606", prec) * lnm * lnm)), "<", "1.92443",
                 claim="e^gamma (1.0803 + 1/(2.1606 log^2 N_min)) < 1.92443")
    report.bound("0.02018", 1 / lnm, "<", "0.02018", claim="1/log N_min < 0.02018")
    ln_g = rr("1.92443", prec).log()
    coeff_min = (-c + (1 + (c + rr("1.08", prec)).log()) / lnm + (lnm.log() + ln_g) / (nm * lnm))
    coeff_stated = -c + rr("0.02018", prec) * (c + rr("1.08", prec)).log() + rr("0.02018", prec)
    report.bound("c-step", coeff_min - coeff_stated, "<", 0, claim="the exponent per N log N is at most the rounded form")
    report.bound("c-value", coeff_stated, "<", "-3.645e-7",
                 claim="-c + 0.02018 log(c + 1.08) + 0.02018 < -3.645e-7 at c = 0.022143")
    ld = rr(delta, prec).log()
    dd = rr(delta, prec)
    report.bound("NlogN-lower", nlogn - (rr("1.31e22", prec) - rr("2.8e20", prec) * ld) / dd, ">", 0,
                 claim="N log N > (1.31e22 - 2.8e20 log Delta)/Delta")
    report.bound("NlogN-upper", nlogn - (rr("1.32e22", prec) - rr("2.800001e20", prec) * ld) / dd, "<", 0,
                 claim="N log N < (1.32e22 - 2.800001e20 log Delta)/Delta")
    report.bound("logN-range", ln + ld, "<", "47.1", claim="log N < 47.1 - log Delta")
    report.bound("logN-floor", ln + ld, ">=", 47, claim="log N >= 47 - log Delta")
    report.fact("tail-form", Fraction("3.645e-7") * Fraction("1.31e22") >= Fraction("4.77e15")
                and Fraction("3.645e-7") * Fraction("2.8e20") >= Fraction("1.02e14"),
                "3.645e-7 (1.31e22, 2.8e20) dominates (4.77e15, 1.02e14)")
    report.fact("K-form", Fraction(C_GENERAL) * Fraction("1.32e22") <= Fraction("2.923e20")
                and Fraction(C_GENERAL) * Fraction("2.800001e20") <= Fraction("6.21e18"),
                "0.022143 (1.32e22, 2.800001e20) is dominated by (2.923e20, 6.21e18)")
    report.fact("epsilon", 2 * Fraction("2.923e20") == Fraction("5.846e20") and 2 * Fraction("6.21e18") == Fraction("1.242e19"),
                "epsilon = K^-2 doubles both K coefficients")

    ln_tail = ln_g + ln.log() + count_log - c * nlogn
    stated = (rr("-4.77e15", prec) + rr("1.02e14", prec) * ld) / dd
    report.bound("tail-direct", ln_tail - stated, "<", 0,
                 claim="ln of the tail bound < (-4.77e15 + 1.02e14 log Delta)/Delta")
    report.bound("tail<1", ln_tail, "<", 0, claim="tail bound below 1")
    report.enclosures["ln_tail"] = ln_tail
    report.enclosures["log10_tail"] = ln_tail / rr(10, prec).log()
    report.enclosures["log_K"] = c * nlogn
    report.enclosures["log_K_stated"] = (rr("2.923e20", prec) - rr("6.21e18", prec) * ld) / dd
    return report


def auxiliary_monotonicity_report(points: int = 400, prec: int = 128) -> LemmaReport:
    """Grid checks of the shape facts the estimates lean on."""
    report = LemmaReport(name="monotone-shapes", claim="auxiliary functions are monotone on their stated ranges",
                         inputs={"points": points, "precision_bits": prec})
    cases = (
        ("log^16 x / x^3 decreasing for x > 208", _log16_over_cube, 209, 10**30, False),
        ("f increasing for x > 4.9e5", lambda x: difference_f(x, 1), 490000, 10**30, True),
        ("x + 1/(2x) increasing for x > 1", lambda x: x + 1 / (2 * x), Fraction(10001, 10000), 10**6, True),
        ("log log x / log x decreasing for x > 16", lambda x: x.log().log() / x.log(), 16, 10**30, False),
        ("x^1.2173619/log^16 x increasing for x > 510515",
         lambda x: x ** rr(F_EXPONENT, x.prec) / x.log() ** 16, 510515, 10**30, True),
        ("x^1.2173619/log^14.7826381 x increasing for x > 187808",
         lambda x: x ** rr(F_EXPONENT, x.prec) / x.log() ** rr("14.7826381", x.prec), 187808, 10**30, True),
        ("x(1 + 0.0077629/log x) increasing for x > 3",
         lambda x: x * (1 + rr(THETA_COEFF, x.prec) / x.log()), 3, 10**30, True),
        ("log x + 1/(2 log x) increasing for x > 3", lambda x: x.log() + 1 / (2 * x.log()), 3, 10**30, True),
        ("log log x / (x log x) decreasing for x > 5", lambda x: x.log().log() / (x * x.log()), 5, 10**30, False),
        ("log(1+x)/x decreasing for x > 0", lambda x: x.log1p() / x, Fraction(1, 10**6), 10**6, False),
    )
    for label, fn, lo, hi, inc in cases:
        ok, bad = grid_monotone(fn, lo, hi, increasing=inc, points=points, prec=prec)
        report.fact(label, ok, f"{label} (grid [{lo}, {hi}])", first_failure=bad)
    return report
