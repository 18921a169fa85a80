"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""
from __future__ import annotations

import time
from math import gcd, log

import numpy as np
import pytest

import oracles
from polyprime import (CombinationSpec, CountTable, ParityCase, ReprConfig, Regime, ap_report,
                       build_sieve, classify_combination, closed_form_D, content,
                       content_closed_form, count_checkpoints, discriminant,
                       enumerate_combination_values, enumerate_form_values, fit_exponent,
                       invariant_D, load_cache, parity_polynomial, prime_count,
                       representable_primes, save_cache, sum_of_two_squares,
                       sum_of_two_triangulars)

CHECKPOINTS = [10**4, 10**5, 10**6, 10**7]


def coprime_grid(rs, munu):
    for r in rs:
        for s in rs:
            for mu in munu:
                for nu in munu:
                    if gcd(mu, nu) == 1:
                        yield CombinationSpec(r, s, mu, nu)


@pytest.fixture(scope="module")
def sieve_1e7():
    return build_sieve(10**7)


@pytest.mark.criterion(1, "classification: Dense iff r=s=4, never Negligible")
def test_classification_grid():
    start = time.perf_counter()
    wrong = []
    for spec in coprime_grid(range(3, 13), range(1, 10)):
        expected = Regime.Dense if spec.r == spec.s == 4 else Regime.Sparse
        if classify_combination(spec).overall is not expected:
            wrong.append(spec)
    elapsed = time.perf_counter() - start
    assert wrong == []
    assert elapsed < 1.0, elapsed


@pytest.mark.criterion(2, "closed forms for content, D and discriminant")
def test_closed_form_identities():
    cases = tuple(ParityCase)
    start = time.perf_counter()
    wrong = []
    for spec in coprime_grid(range(3, 31), range(1, 31)):
        r, s, mu, nu = spec.r, spec.s, spec.mu, spec.nu
        d = closed_form_D(spec)
        delta = -16 * mu * nu * (r - 2) * (s - 2)
        if (d == 0) != (r == s == 4) or delta >= 0:
            wrong.append(spec)
        for case in cases:
            q = parity_polynomial(spec, case)
            if (content(q) != content_closed_form(spec, case) or invariant_D(q) != d
                    or discriminant(q) != delta):
                wrong.append((spec, case))
    elapsed = time.perf_counter() - start
    assert wrong == []
    assert elapsed < 5.0, elapsed


@pytest.mark.criterion(3, "parity cover equals direct enumeration at N=5000")
def test_parity_cover():
    start = time.perf_counter()
    wrong = []
    for spec in coprime_grid(range(3, 13), range(1, 10)):
        direct = enumerate_combination_values(ReprConfig(spec, 5000))
        forms = [enumerate_form_values(parity_polynomial(spec, c), 5000) for c in ParityCase]
        union = forms[0] | forms[1] | forms[2] | forms[3]
        if union != direct:
            wrong.append(spec)
    elapsed = time.perf_counter() - start
    assert wrong == []
    assert elapsed < 30.0, elapsed


@pytest.mark.criterion(4, "two triangulars iff 4n+1 is two squares, n <= 1e5")
def test_two_triangulars_identity():
    start = time.perf_counter()
    mismatches = [n for n in range(10**5 + 1)
                  if sum_of_two_triangulars(n, allow_zero=True) != sum_of_two_squares(4 * n + 1)]
    elapsed = time.perf_counter() - start
    assert mismatches == []
    assert elapsed < 10.0, elapsed


@pytest.mark.criterion(5, "exponent dichotomy on checkpoints 1e4..1e7")
def test_exponent_dichotomy(sieve_1e7):
    windows = {
        (3, 3, 1, 1): (1.3, 1.7),
        (3, 4, 1, 1): (1.3, 1.7),
        (5, 3, 2, 1): (1.3, 1.7),
        (4, 4, 1, 1): (0.85, 1.15),
        (4, 4, 1, 2): (0.85, 1.15),
    }
    start = time.perf_counter()
    fitted = {}
    for spec, (lo, hi) in windows.items():
        table = count_checkpoints(ReprConfig(CombinationSpec(*spec), 10**7), sieve_1e7, CHECKPOINTS)
        fitted[spec] = fit_exponent(table).exponent
    elapsed = time.perf_counter() - start
    print({k: round(v, 4) for k, v in fitted.items()})
    for spec, (lo, hi) in windows.items():
        assert lo <= fitted[spec] <= hi, (spec, fitted[spec])
    assert elapsed < 120.0, elapsed


@pytest.mark.criterion(6, "scarcity: ratios fall while counts grow, residues 1 and 3 mod 4")
def test_scarcity_mod_4(sieve_1e7):
    cfg = ReprConfig(CombinationSpec(3, 3, 1, 1), 10**7)
    reports = ap_report(cfg, sieve_1e7, 4, CHECKPOINTS)
    for residue in (1, 3):
        rows = [next(r for r in rep.rows if r.residue == residue) for rep in reports]
        ratios = [r.ratio for r in rows]
        counts = [r.representable_primes for r in rows]
        print(residue, counts, [round(x, 4) for x in ratios])
        assert all(a > b for a, b in zip(ratios, ratios[1:])), ratios
        assert counts[0] > 0
        assert all(a < b for a, b in zip(counts, counts[1:])), counts


@pytest.mark.criterion(7, "oracle agreement on small counts")
def test_oracle_agreement():
    small = build_sieve(10**6)
    tri = oracles.representable_primes(3, 3, 1, 1, 100)
    sq = oracles.representable_primes(4, 4, 1, 1, 50)
    assert len(tri) == 14 and len(sq) == 7
    assert representable_primes(ReprConfig(CombinationSpec(3, 3, 1, 1), 100), small, True) == (14, tri)
    assert representable_primes(ReprConfig(CombinationSpec(4, 4, 1, 1), 50), small, True) == (7, sq)
    assert len(oracles.primes_td(100)) == 25 == prime_count(small, 100)
    assert prime_count(small, 10**5) == len(oracles.primes_td(10**5))
    assert prime_count(small, 10**6) == sum(oracles.simple_sieve(10**6)) == 78498


@pytest.mark.slow
@pytest.mark.criterion(8, "performance: sieve 1e8 < 3 s, enumerate 1e8 < 10 s, cache bit-exact")
def test_performance_budget(tmp_path):
    start = time.perf_counter()
    sieve = build_sieve(10**8)
    sieve_time = time.perf_counter() - start
    assert sieve.count() == 5761455
    assert sieve_time < 3.0, sieve_time

    start = time.perf_counter()
    values = enumerate_combination_values(ReprConfig(CombinationSpec(3, 3, 1, 1), 10**8), workers=4)
    enum_time = time.perf_counter() - start
    assert values.limit == 10**8
    assert enum_time < 10.0, enum_time

    path = tmp_path / "primes.pgprime"
    save_cache(sieve, path)
    loaded = load_cache(path)
    assert loaded.limit == sieve.limit
    assert np.array_equal(loaded.data, sieve.data)


@pytest.mark.criterion(9, "synthetic fit recovers planted exponents within 0.05")
@pytest.mark.parametrize("e", [1.0, 1.5])
def test_synthetic_fit(e):
    table = CountTable(tuple((n, 2.0 * n / log(n) ** e) for n in CHECKPOINTS))
    assert abs(fit_exponent(table).exponent - e) <= 0.05
