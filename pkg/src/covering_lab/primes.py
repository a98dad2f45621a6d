"""Segmented sieve, indexed prime tables with rigorous prefix sums, and checks of
classical explicit prime inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .report import LemmaReport
from .rigorous import RigorousReal, _down, _resolve, _up, decimal_string, rr

SEGMENT = 1 << 21

MERTENS_B_UPPER = "0.26149721284765"
LOGP_OVER_P_E = "-1.3325822757"
DUSART_COEFF = "2.53816"
THETA_COEFF = "0.0077629"
# the log p / p upper bound is only claimed from x = 319 on; it fails at every prime below
LOGP_OVER_P_FROM = 319
RECIPROCAL_FROM = 286


def simple_sieve(limit: int) -> np.ndarray:
    """Plain Eratosthenes over ``[0, limit]``; used for base primes and as a cross-check."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def iter_prime_segments(lo: int, hi: int, segment: int = SEGMENT) -> Iterator[np.ndarray]:
    """Yield arrays of the primes in ``[lo, hi]`` one window at a time."""
    lo = max(lo, 2)
    if hi < lo:
        return
    base = simple_sieve(math.isqrt(hi))
    for start in range(lo, hi + 1, segment):
        stop = min(start + segment, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        yield np.flatnonzero(flags).astype(np.int64) + start


def stream_primes(start: int = 2, stop: int | None = None, segment: int = SEGMENT) -> Iterator[int]:
    """Primes ``>= start`` in increasing order; unbounded when ``stop`` is None."""
    lo = start
    window = max(segment, 1 << 16)
    while stop is None or lo <= stop:
        hi = lo + 64 * window - 1 if stop is None else min(stop, lo + 64 * window - 1)
        for arr in iter_prime_segments(lo, hi, window):
            for p in arr.tolist():
                yield p
        lo = hi + 1


_SUMMANDS = ("reciprocal", "logp_over_p", "logp", "loglogp")


def _term(kind: str, p: int, d, u):
    if kind == "reciprocal":
        return d.div(1, p), u.div(1, p)
    if kind == "logp":
        return d.log(p), u.log(p)
    if kind == "logp_over_p":
        return d.div(d.log(p), p), u.div(u.log(p), p)
    if kind == "loglogp":
        return d.log(d.log(p)), u.log(u.log(p))
    raise ValueError(f"unknown prefix sum {kind!r}; expected one of {_SUMMANDS}")


@dataclass
class PrimeTable:
    """All primes up to ``limit`` with outward-rounded prefix sums.

    Prefix sums are indexed by prime count: ``prefix_sum(kind, n)`` folds the
    summand over ``p_1, ..., p_n``.
    """

    limit: int
    primes: np.ndarray
    _cursor: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def nth(self, n: int) -> int:
        """The n-th prime, 1-based."""
        if not 1 <= n <= len(self.primes):
            raise IndexError(f"p_{n} is beyond the sieve limit {self.limit}")
        return int(self.primes[n - 1])

    def pi(self, x: int) -> int:
        return int(np.searchsorted(self.primes, x, side="right"))

    def covers_index(self, n: int) -> bool:
        return n <= len(self.primes)

    def prefix_sums(self, kind: str, counts: Iterable[int], prec: int | None = None) -> dict[int, RigorousReal]:
        """Enclosures of the prefix sums at every requested count, in one pass."""
        prec = _resolve(prec)
        wanted = sorted(set(int(c) for c in counts))
        if wanted and wanted[-1] > len(self.primes):
            raise IndexError(f"prefix of length {wanted[-1]} exceeds the {len(self.primes)} sieved primes")
        d, u = _down(prec), _up(prec)
        n, lo, hi = self._cursor.get((kind, prec), (0, d.add(0, 0), u.add(0, 0)))
        if wanted and wanted[0] < n:
            n, lo, hi = 0, d.add(0, 0), u.add(0, 0)
        out = {}
        primes = self.primes
        for target in wanted:
            while n < target:
                tl, th = _term(kind, int(primes[n]), d, u)
                lo, hi = d.add(lo, tl), u.add(hi, th)
                n += 1
            out[target] = RigorousReal._raw(lo, hi, prec)
        self._cursor[(kind, prec)] = (n, lo, hi)
        return out

    def prefix_sum(self, kind: str, n: int, prec: int | None = None) -> RigorousReal:
        return self.prefix_sums(kind, [n], prec)[n]


def sieve(limit: int, segment: int = SEGMENT) -> PrimeTable:
    """Every prime up to ``limit``, found window by window."""
    if limit < 2:
        raise ValueError(f"sieve limit must be at least 2, got {limit}")
    parts = list(iter_prime_segments(2, limit, segment))
    primes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return PrimeTable(limit=limit, primes=primes)


def nth_prime_upper_estimate(n: int) -> int:
    """An integer at least p_n, for sizing a sieve."""
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 10


def sieve_for_count(n: int) -> PrimeTable:
    return sieve(nth_prime_upper_estimate(n))


# ---------------------------------------------------------------------------
# nth prime enclosure

def _as_integer(n) -> int:
    q = Fraction(n)
    if q.denominator != 1:
        raise ValueError(f"{n} is not an integer")
    return int(q)


def nth_prime_bounds(n, prec: int | None = None) -> tuple[RigorousReal, RigorousReal]:
    """Enclosures of ``n(log n + log log n - 3/2)`` and ``n(log n + log log n - 1/2)``.

    For ``n >= 20`` these bracket the n-th prime from below and above.
    """
    n = _as_integer(n)
    if n < 20:
        raise ValueError(f"the bracketing inequality is only valid for n >= 20, got {n}")
    nn = rr(n, prec)
    ln = nn.log()
    base = ln + ln.log()
    return nn * (base - Fraction(3, 2)), nn * (base - Fraction(1, 2))


# ---------------------------------------------------------------------------
# inequality validators

def validate_prime_inequalities(table: PrimeTable, sample: Iterable[int], prec: int | None = None) -> LemmaReport:
    """Check four explicit prime inequalities at each sampled index ``i`` with ``x = p_i``.

    * sum of 1/p over p <= x is below log log x + B + 1/(2 log^2 x), with B the
      upper value 0.26149721284765, for x >= 286;
    * sum of log p / p over p <= x is below log x + E + 1/(2 log x), for x >= 319;
    * pi(x) <= (x/log x)(1 + 1/log x + 2.53816/log^2 x), only for x > 10^2.5;
    * theta(x) <= x (1 + 0.0077629/log x).
    """
    prec = _resolve(prec)
    idx = sorted(set(int(i) for i in sample))
    report = LemmaReport(
        name="prime-inequalities",
        claim="explicit Mertens-type, Chebyshev and prime-counting bounds hold at every sampled index",
        inputs={"sample": idx, "sieve_limit": table.limit, "precision_bits": prec},
    )
    if not idx:
        report.notes.append("empty sample: vacuously true")
        return report
    if idx[0] < 1 or idx[-1] > len(table):
        raise IndexError("sampled indices must lie within the sieved range")
    recip = table.prefix_sums("reciprocal", idx, prec)
    lpp = table.prefix_sums("logp_over_p", idx, prec)
    theta = table.prefix_sums("logp", idx, prec)
    B, E = rr(MERTENS_B_UPPER, prec), rr(LOGP_OVER_P_E, prec)
    c_dusart, c_theta = rr(DUSART_COEFF, prec), rr(THETA_COEFF, prec)
    for i in idx:
        p = table.nth(i)
        x = rr(p, prec)
        lx = x.log()
        if p >= RECIPROCAL_FROM:
            report.bound(f"reciprocal-sum@{i}", recip[i] - (lx.log() + B + 1 / (2 * lx * lx)), "<", 0,
                         claim=f"sum 1/p up to p_{i}={p} < log log p + B + 1/(2 log^2 p)")
        else:
            report.skip(f"reciprocal-sum@{i}", f"p_{i}={p} is below {RECIPROCAL_FROM}, outside the bound's range")
        if p >= LOGP_OVER_P_FROM:
            report.bound(f"logp-over-p@{i}", lpp[i] - (lx + E + 1 / (2 * lx)), "<", 0,
                         claim=f"sum log p/p up to p_{i}={p} < log p + E + 1/(2 log p)")
        else:
            report.skip(f"logp-over-p@{i}", f"p_{i}={p} is below {LOGP_OVER_P_FROM}, outside the bound's range")
        if p * p > 10**5:  # p > 10^2.5
            dusart = x / lx * (1 + 1 / lx + c_dusart / (lx * lx))
            report.bound(f"prime-count@{i}", rr(i, prec) - dusart, "<=", 0,
                         claim=f"pi({p}) = {i} <= Dusart bound")
        else:
            report.skip(f"prime-count@{i}", f"p_{i}={p} is not above 10^2.5")
        report.bound(f"theta@{i}", theta[i] - x * (1 + c_theta / lx), "<=", 0,
                     claim=f"theta(p_{i}) <= p (1 + 0.0077629/log p)")
    return report


LOGLOG_THRESHOLD = 44


def loglog_lemma_check(n_max: int, table: PrimeTable | None = None, prec: int = 128) -> LemmaReport:
    """Verify ``sum_{k<=n} log log p_k >= n log log n`` for ``44 <= n <= n_max``.

    Also records every ``2 <= n < 44`` at which the inequality fails.
    """
    if n_max < LOGLOG_THRESHOLD:
        raise ValueError(f"n_max must be at least {LOGLOG_THRESHOLD}")
    if table is None:
        table = sieve_for_count(n_max)
    if not table.covers_index(n_max):
        raise ValueError(f"sieve limit {table.limit} does not reach p_{n_max}")
    d, u = _down(prec), _up(prec)
    lo = d.add(0, 0)
    hi = u.add(0, 0)
    small_failures, violations, undecided = [], [], []
    worst = None
    for n in range(1, n_max + 1):
        p = table.nth(n)
        lo = d.add(lo, d.log(d.log(p)))
        hi = u.add(hi, u.log(u.log(p)))
        if n < 2:
            continue
        rhs_lo = d.mul(n, d.log(d.log(n)))
        rhs_hi = u.mul(n, u.log(u.log(n)))
        if n < LOGLOG_THRESHOLD:
            if hi < rhs_lo:
                small_failures.append(n)
            elif lo < rhs_hi:
                undecided.append(n)
            continue
        if lo >= rhs_hi:
            margin = d.sub(lo, rhs_hi)
            if worst is None or margin < worst[1]:
                worst = (n, margin)
        elif hi < rhs_lo:
            violations.append(n)
        else:
            undecided.append(n)
    report = LemmaReport(
        name="logloglemma",
        claim=f"sum of log log p over the first n primes >= n log log n for {LOGLOG_THRESHOLD} <= n <= {n_max}",
        inputs={"n_max": n_max, "precision_bits": prec, "sieve_limit": table.limit},
    )
    report.fact("range", not violations,
                f"no violation in [{LOGLOG_THRESHOLD}, {n_max}]", violations=violations[:20])
    if undecided:
        report.add(LemmaReport(name="undecided", claim="enclosure straddles the bound",
                               verdict="enclosure-too-wide", enclosures={"n": undecided[:20]}))
    report.enclosures["failures_below_threshold"] = small_failures
    report.enclosures["largest_failure_below_threshold"] = max(small_failures) if small_failures else None
    if worst is not None:
        report.enclosures["tightest_n"] = worst[0]
        report.enclosures["tightest_margin"] = decimal_string(worst[1], 8, up=False)
    return report


# ---------------------------------------------------------------------------
# checkpoints

def format_checkpoint(index: int, prime: int, sums: dict[str, RigorousReal], digits: int = 60) -> str:
    parts = [str(index), str(prime)]
    for name, value in sums.items():
        lo, hi = value.endpoints(digits)
        parts.append(f"{name}={lo},{hi}")
    return " ".join(parts)


def parse_checkpoint(line: str, prec: int | None = None) -> tuple[int, int, dict[str, RigorousReal]]:
    """Inverse of :func:`format_checkpoint`; endpoints are re-widened outward on read."""
    fields = line.split()
    if len(fields) < 2:
        raise ValueError(f"malformed checkpoint line: {line!r}")
    index, prime = int(fields[0]), int(fields[1])
    sums = {}
    for item in fields[2:]:
        name, _, pair = item.partition("=")
        lo_s, _, hi_s = pair.partition(",")
        lo, hi = rr(lo_s, prec), rr(hi_s, prec)
        sums[name] = RigorousReal._raw(lo.lo, hi.hi, lo.prec)
    return index, prime, sums


def append_checkpoint(path: Path | str, index: int, prime: int, sums: dict[str, RigorousReal]) -> None:
    with open(path, "a", encoding="ascii") as fh:
        fh.write(format_checkpoint(index, prime, sums) + "\n")
        fh.flush()


def read_last_checkpoint(path: Path | str, prec: int | None = None):
    """Last complete checkpoint line, or ``None`` if the file is absent or empty."""
    path = Path(path)
    if not path.exists():
        return None
    last = None
    with open(path, encoding="ascii") as fh:
        for line in fh:
            if line.endswith("\n") and line.strip():
                last = line
    return parse_checkpoint(last, prec) if last else None
