import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from majlab.probability import (BERRY_ESSEEN_C, BinDiffDist, bindiff_cdf,
                                bindiff_geq_exact, bindiff_pmf,
                                bindiff_pmf_exact, binom_cdf, binom_pmf,
                                binom_pmf_exact, normal_cdf,
                                normal_cdf_centered, normal_pdf)

from conftest import brute_bindiff_geq, brute_bindiff_pmf


def test_binom_pmf_basics():
    assert binom_pmf(2, 0.5, 1) == pytest.approx(0.5, abs=1e-15)
    for n, p in [(5, 0.2), (17, 0.9), (40, 0.01)]:
        assert binom_pmf(n, p, 0) == pytest.approx((1 - p) ** n, rel=1e-12)
    # exact decimal: C(10,3) (3/10)^3 (7/10)^7 = 0.266827932
    assert binom_pmf(10, 0.3, 3) == pytest.approx(0.266827932, rel=1e-10)


def test_binom_pmf_range_errors():
    with pytest.raises(ValueError):
        binom_pmf(5, 0.3, 6)
    with pytest.raises(ValueError):
        binom_pmf(5, 0.3, -1)


def test_binom_pmf_matches_exact_rational(rng):
    for _ in range(40):
        n = int(rng.integers(1, 2000))
        k = int(rng.integers(0, n + 1))
        p = Fraction(int(rng.integers(1, 99)), 100)
        exact = float(binom_pmf_exact(n, p, k))
        if exact < 1e-280:  # beyond float territory
            continue
        got = binom_pmf(n, float(p), k)
        assert abs(got / exact - 1) < 1e-10


def test_binom_pmf_large_n_relative_error():
    # saddle-point accuracy at n = 10^6 against 40-digit arithmetic
    import mpmath as mp
    mp.mp.dps = 40
    n, p = 10**6, 0.3
    for k in (300_000, 299_000, 305_000, 298_200):
        hi = mp.exp(mp.loggamma(n + 1) - mp.loggamma(k + 1)
                    - mp.loggamma(n - k + 1)
                    + k * mp.log(mp.mpf(p)) + (n - k) * mp.log(1 - mp.mpf(p)))
        assert abs(binom_pmf(n, p, k) / float(hi) - 1) < 1e-10


def test_bindiff_simple_values():
    assert bindiff_pmf(1, 1, 0.5, 0) == pytest.approx(0.5, abs=1e-14)
    # brute force over all 2^10 outcomes: 0.216369321 exactly
    assert bindiff_pmf(5, 5, 0.3, 1) == pytest.approx(0.216369321, rel=1e-12)
    assert bindiff_pmf(5, 5, 0.3, 6) == 0.0
    assert bindiff_pmf(5, 5, 0.3, -6) == 0.0


def test_bindiff_symmetry():
    for n1, n2, p, d in [(5, 3, 0.3, 2), (10, 10, 0.7, -4), (2, 9, 0.45, 1)]:
        assert bindiff_pmf(n1, n2, p, d) == pytest.approx(
            bindiff_pmf(n2, n1, p, -d), rel=1e-12)
        dist = BinDiffDist(n1, n2, p)
        mirror = BinDiffDist(n2, n1, p)
        for t in dist.support:
            assert dist.pmf(t) == pytest.approx(mirror.pmf(-t), rel=1e-11,
                                                 abs=1e-300)


def test_bindiff_table_mass_and_cdf():
    for n1, n2, p in [(50, 30, 0.2), (7, 7, 0.5), (200, 100, 0.04)]:
        dist = BinDiffDist(n1, n2, p)
        assert abs(dist.total_mass() - 1.0) < 1e-12
        assert (dist.table >= 0).all()
        assert dist.cdf(n1) == pytest.approx(1.0, abs=1e-12)
        assert dist.cdf(-n2 - 1) == 0.0
        # windowed point values agree with the table
        for d in (-3, 0, 1, 5):
            assert bindiff_pmf(n1, n2, p, d) == pytest.approx(
                dist.pmf(d), rel=1e-11, abs=1e-300)
            assert bindiff_cdf(n1, n2, p, d) == pytest.approx(
                dist.cdf(d), rel=1e-11)


def test_bindiff_unimodal_when_equal_counts():
    for n, p in [(20, 0.3), (55, 0.77), (128, 0.5)]:
        dist = BinDiffDist(n, n, p)
        assert dist.mode() == 0
        for d in range(0, n):
            assert dist.pmf(d) >= dist.pmf(d + 1) - 1e-18
            assert dist.pmf(-d) >= dist.pmf(-d - 1) - 1e-18


def test_bindiff_large_n_windowed_sanity():
    n = 120_000
    p = 0.4
    got = bindiff_pmf(n, n, p, 0)
    approx = 1.0 / math.sqrt(4 * math.pi * n * p * (1 - p))
    assert got == pytest.approx(approx, rel=1e-2)
    assert bindiff_cdf(n, n, p, 0) == pytest.approx(0.5 + got / 2, rel=1e-9)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(-6, 6),
       st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20),
                    max_denominator=20))
@settings(deadline=None, max_examples=60)
def test_bindiff_matches_brute_force(n1, n2, d, p):
    exact = brute_bindiff_pmf(n1, n2, p, d)
    assert bindiff_pmf_exact(n1, n2, p, d) == exact
    assert bindiff_pmf(n1, n2, float(p), d) == pytest.approx(
        float(exact), rel=1e-10, abs=1e-15)
    geq = brute_bindiff_geq(n1, n2, p, d)
    assert bindiff_geq_exact(n1, n2, p, d) == geq
    assert 1.0 - bindiff_cdf(n1, n2, float(p), d - 1) == pytest.approx(
        float(geq), rel=1e-9, abs=1e-12)


def test_table_limit_enforced():
    with pytest.raises(ValueError):
        BinDiffDist(15_000, 15_000, 0.5)


def test_normal_cdf_values():
    assert normal_cdf(0.0) == 0.5
    assert abs(normal_cdf(8.0) - 1.0) < 1e-12
    assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-14)
    assert normal_cdf(-1.0) == pytest.approx(1 - 0.8413447460685429, abs=1e-14)
    for a in np.linspace(-6, 6, 41):
        assert abs(normal_cdf(-a) - (1.0 - normal_cdf(a))) < 1e-14


def test_normal_cdf_centered_no_cancellation():
    assert normal_cdf_centered(0.0) == 0.0
    assert normal_cdf_centered(1e-8) == pytest.approx(3.9894228040143267e-9,
                                                      rel=1e-12)
    assert normal_cdf_centered(-1e-8) == -normal_cdf_centered(1e-8)


def test_normal_pdf():
    assert normal_pdf(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert normal_pdf(2.0) == pytest.approx(math.exp(-2) / math.sqrt(2 * math.pi),
                                            rel=1e-15)


def test_berry_esseen_constant():
    assert BERRY_ESSEEN_C == 0.56


def test_binom_cdf_consistency():
    n, p = 30, 0.35
    acc = 0.0
    for k in range(n + 1):
        acc += binom_pmf(n, p, k)
        assert binom_cdf(n, p, k) == pytest.approx(acc, rel=1e-11)
