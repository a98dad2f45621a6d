"""Streaming run over the first 10^9 primes with resumable checkpoints.

One pass accumulates, for ``j < target``: the product of ``m0_factor(p_j)``,
``sum 1/p_j``, ``sum log p_j / p_j`` and ``prod_{j>=3} (1 - M_1(p_j))``.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Callable

import gmpy2

from .analytic import (
    BILLION,
    LOGP_OVER_P_STATED,
    M0_STATED,
    M1_PRODUCT_STATED,
    P_BILLION,
    RECIP_STATED,
)
from .primes import append_checkpoint, read_last_checkpoint, stream_primes
from .report import LemmaReport
from .rigorous import RigorousReal, _down, _resolve, _up

DEFAULT_STRIDE = 10**7
FIELDS = ("m0", "recip", "logp_over_p", "mertens", "m1prod")


def _fresh(prec: int) -> dict[str, RigorousReal]:
    one, zero = RigorousReal.exact(1, prec), RigorousReal.exact(0, prec)
    return {"m0": one, "recip": zero, "logp_over_p": zero, "mertens": one, "m1prod": one}


def accumulate(target: int = BILLION, checkpoint: Path | str | None = None, stride: int = DEFAULT_STRIDE,
               prec: int | None = None, max_primes: int | None = None,
               progress: Callable[[int, int], None] | None = None) -> tuple[int, int, dict[str, RigorousReal]]:
    """Fold the first ``target - 1`` primes, resuming from ``checkpoint`` if it has lines.

    Returns ``(primes_folded, last_prime, values)``.  ``max_primes`` stops early
    (after writing a checkpoint), which is how an interrupted run is simulated.
    """
    prec = _resolve(prec)
    d, u = _down(prec), _up(prec)
    state = read_last_checkpoint(checkpoint, prec) if checkpoint is not None else None
    if state is None:
        index, last, values = 0, 1, _fresh(prec)
    else:
        index, last, values = state
        if set(values) != set(FIELDS):
            raise ValueError(f"checkpoint fields {sorted(values)} do not match {sorted(FIELDS)}")
    lo = {k: v.lo for k, v in values.items()}
    hi = {k: v.hi for k, v in values.items()}
    stop_at = target - 1 if max_primes is None else min(target - 1, index + max_primes)

    def snapshot():
        return {k: RigorousReal._raw(lo[k], hi[k], prec) for k in FIELDS}

    if index < stop_at:
        for p in stream_primes(last + 1):
            index += 1
            den = (p - 1) ** 4
            q = gmpy2.mpq(den + 15 * p**3 + 5 * p**2 + 5 * p - 1, den)
            lo["m0"] = d.mul(lo["m0"], gmpy2.mpfr(q, prec, d))
            hi["m0"] = u.mul(hi["m0"], gmpy2.mpfr(q, prec, u))
            lo["recip"] = d.add(lo["recip"], d.div(1, p))
            hi["recip"] = u.add(hi["recip"], u.div(1, p))
            lo["logp_over_p"] = d.add(lo["logp_over_p"], d.div(d.log(p), p))
            hi["logp_over_p"] = u.add(hi["logp_over_p"], u.div(u.log(p), p))
            if index >= 3:
                f_lo = d.div(d.sub(p - 1, hi["mertens"]), p - 1)
                f_hi = u.div(u.sub(p - 1, lo["mertens"]), p - 1)
                if not (f_lo > 0 and f_hi < 1):
                    raise ArithmeticError(f"1 - M_1(p_{index}) is not inside (0, 1)")
                lo["m1prod"], hi["m1prod"] = d.mul(lo["m1prod"], f_lo), u.mul(hi["m1prod"], f_hi)
            lo["mertens"] = d.mul(lo["mertens"], d.div(p, p - 1))
            hi["mertens"] = u.mul(hi["mertens"], u.div(p, p - 1))
            last = p
            done = index >= stop_at
            if checkpoint is not None and (index % stride == 0 or done):
                append_checkpoint(checkpoint, index, last, snapshot())
            if progress is not None and index % stride == 0:
                progress(index, last)
            if done:
                break
    return index, last, snapshot()


def next_prime_after(p: int) -> int:
    return next(iter(stream_primes(p + 1)))


def full_scale_report(target: int = BILLION, checkpoint: Path | str | None = None, stride: int = DEFAULT_STRIDE,
                      prec: int | None = None, max_primes: int | None = None,
                      progress: Callable[[int, int], None] | None = None) -> LemmaReport:
    """Run (or resume) the accumulation and compare with the published values when ``target = 10^9``."""
    prec = _resolve(prec)
    started = time.monotonic()
    index, last, values = accumulate(target, checkpoint, stride, prec, max_primes, progress)
    report = LemmaReport(name="full-scale", claim=f"products and sums over the first {target - 1} primes",
                         inputs={"target": target, "precision_bits": prec, "stride": stride,
                                 "checkpoint": str(checkpoint) if checkpoint else None})
    report.enclosures.update(values)
    report.enclosures["primes_folded"] = index
    report.enclosures["last_prime"] = last
    report.enclosures["seconds"] = round(time.monotonic() - started, 3)
    if index < target - 1:
        report.skip("complete", f"stopped after {index} of {target - 1} primes; rerun to resume")
        return report
    p_target = next_prime_after(last)
    report.enclosures["p_target"] = p_target
    if target == BILLION:
        report.fact("p_billion", p_target == P_BILLION, f"p_(10^9) = {P_BILLION}", found=p_target)
        report.bound("m0", values["m0"], "<=", M0_STATED, claim=f"M_0 <= {M0_STATED}")
        report.bound("recip", values["recip"], ">", RECIP_STATED, claim=f"sum 1/p > {RECIP_STATED}")
        report.bound("logp_over_p", values["logp_over_p"], ">", LOGP_OVER_P_STATED,
                     claim=f"sum log p / p > {LOGP_OVER_P_STATED}")
        report.bound("m1prod", values["m1prod"], ">", M1_PRODUCT_STATED,
                     claim=f"prod (1 - M_1) > {M1_PRODUCT_STATED}")
    return report
