import pytest
import sympy

from covering_lab.analytic import logp_over_p_prefix, m0_product, m1_product, reciprocal_prime_prefix
from covering_lab.fullscale import FIELDS, accumulate, full_scale_report, next_prime_after
from covering_lab.primes import sieve_for_count

TARGET = 20_001


@pytest.fixture(scope="module")
def straight():
    return accumulate(TARGET, prec=192)


def test_matches_prefix_functions(straight):
    index, last, values = straight
    table = sieve_for_count(TARGET)
    assert index == TARGET - 1 and last == table.nth(TARGET - 1)
    for key, ref in (("m0", m0_product(TARGET, table, 192)),
                     ("recip", reciprocal_prime_prefix(TARGET, table, 192)),
                     ("logp_over_p", logp_over_p_prefix(TARGET, table, 192)),
                     ("m1prod", m1_product(TARGET - 1, table, 192))):
        v = values[key]
        assert v.lo <= ref.hi and ref.lo <= v.hi, key


def test_resume_after_interruption(tmp_path, straight):
    ck = tmp_path / "run.ck"
    first = accumulate(TARGET, ck, stride=3000, prec=192, max_primes=7777)
    assert first[0] == 7777
    lines = ck.read_text().splitlines()
    assert lines[-1].split()[:2] == ["7777", str(sympy.prime(7777))]
    with open(ck, "a") as fh:
        fh.write("8000 81817 m0=1")  # torn final line from a crash
    index, last, values = accumulate(TARGET, ck, stride=3000, prec=192)
    assert (index, last) == straight[:2]
    for key in FIELDS:
        a, b = values[key], straight[2][key]
        # the resumed run re-reads rounded decimal endpoints, so it can only be wider
        assert a.lo <= b.lo and b.hi <= a.hi, key
        assert a.width <= b.width + abs(b.hi) * 1e-50 + 1e-50
    again = accumulate(TARGET, ck, stride=3000, prec=192)
    assert again[0] == index  # nothing left to do


def test_checkpoint_field_mismatch(tmp_path):
    ck = tmp_path / "other.ck"
    ck.write_text("10 29 s=1,2\n")
    with pytest.raises(ValueError):
        accumulate(100, ck)


def test_report_skips_until_complete(tmp_path):
    ck = tmp_path / "r.ck"
    rep = full_scale_report(5000, ck, stride=1000, max_primes=1000)
    assert rep.verdict == "pass"
    assert rep.checks[0].verdict == "skipped"
    rep = full_scale_report(5000, ck, stride=1000)
    assert rep.enclosures["p_target"] == sympy.prime(5000)
    assert rep.enclosures["primes_folded"] == 4999


def test_next_prime_after():
    assert next_prime_after(22801763477) == sympy.nextprime(22801763477)
