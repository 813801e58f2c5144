import math

import mpmath
import numpy as np
import pytest

from gqtlab.bounds import (
    BoundParams,
    bernstein_check,
    corollary_bound,
    g1_constant,
    g_lemma,
    hilbert_theorem_bound,
    norm2_torus,
    norm2_torus_derivative,
    verify_beta_bound,
)
from gqtlab.polynomials import PolyCoeffs


class TestG1:
    def test_two_digits(self):
        assert g1_constant() == pytest.approx(1.06, abs=0.005)

    def test_matches_g_at_one(self):
        assert g_lemma(1.0) == pytest.approx(g1_constant(), abs=1e-15)

    def test_limit_at_zero(self):
        assert g_lemma(1e-8) == pytest.approx(1.0, abs=1e-6)

    def test_monotone_increasing(self):
        xs = np.linspace(1e-6, 1.0, 10 ** 4)
        vals = g_lemma(xs)
        assert np.all(np.diff(vals) > 0)

    def test_domain(self):
        with pytest.raises(ValueError):
            g_lemma(0.0)
        with pytest.raises(ValueError):
            g_lemma(1.5)


class TestTheoremBound:
    def test_zero_norms(self):
        assert hilbert_theorem_bound(0.5, 0.0, 0.0) == 0.0

    def test_delta_one_sup_only(self):
        expected = g1_constant() * (4 / math.pi) * math.log(2)
        assert hilbert_theorem_bound(1.0, 1.0, 0.0) == pytest.approx(
            expected, abs=1e-15)

    def test_high_precision_oracle(self):
        rng = np.random.default_rng(51)
        mpmath.mp.dps = 50
        g1 = mpmath.log(mpmath.sin(mpmath.mpf(1) / 2)) / mpmath.log(
            mpmath.mpf(1) / 2)
        for _ in range(25):
            d = float(rng.uniform(1e-6, 1.0))
            fi = float(rng.uniform(0, 10))
            fp = float(rng.uniform(0, 10))
            L = mpmath.log(mpmath.mpf(d) / 2)
            ref = (g1 * 4 / mpmath.pi * abs(L) * fi
                   + g1 * mpmath.sqrt(2 * mpmath.mpf(d)) / mpmath.pi
                   * mpmath.sqrt(2 - 2 * L + L ** 2) * fp)
            assert hilbert_theorem_bound(d, fi, fp) == pytest.approx(
                float(ref), rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            hilbert_theorem_bound(0.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            hilbert_theorem_bound(0.5, -1.0, 1.0)


class TestCorollaryBound:
    def test_real_n1_closed_form(self):
        L = math.log(2)
        expected = 1 + g1_constant() / math.pi * (
            4 * L + math.sqrt(4 + 4 * L + 2 * L * L))
        assert corollary_bound(BoundParams(N=1, M=1.0)) == pytest.approx(
            expected, abs=1e-15)

    def test_complex_reduces_to_real(self):
        p = BoundParams(N=7, M=2.5, im_p0=0.0)
        assert corollary_bound(p, form="complex") == pytest.approx(
            corollary_bound(p, form="real"), abs=1e-15)

    def test_complex_adds_imaginary_part(self):
        p = BoundParams(N=7, M=2.0, im_p0=0.3)
        assert corollary_bound(p, form="complex") == pytest.approx(
            corollary_bound(p, form="real") + 2.0 * 0.3, abs=1e-12)

    def test_simplified_dominates(self):
        for N in range(1, 10 ** 4 + 1):
            p = BoundParams(N=N, M=1.0)
            assert corollary_bound(p, "simplified") >= corollary_bound(
                p, "real") - 1e-12

    def test_monotone_in_n_linear_in_m(self):
        prev = 0.0
        for N in range(1, 1001):
            b = corollary_bound(BoundParams(N=N, M=1.0))
            assert b >= prev
            prev = b
        assert corollary_bound(BoundParams(N=5, M=3.0)) == pytest.approx(
            3 * corollary_bound(BoundParams(N=5, M=1.0)), rel=1e-14)

    def test_param_validation(self):
        with pytest.raises(ValueError):
            BoundParams(N=0, M=1.0)
        with pytest.raises(ValueError):
            BoundParams(N=1, M=0.0)
        with pytest.raises(ValueError):
            BoundParams(N=1, M=1.0, im_p0=-0.1)
        with pytest.raises(ValueError):
            corollary_bound(BoundParams(N=1, M=1.0), form="imagined")


def cheb_monomial_sampler(rng):
    n = int(rng.integers(1, 65))
    a = np.zeros(n + 1)
    a[n] = 1.0
    return PolyCoeffs(a.astype(complex))


def random_real_sampler(rng):
    d = int(rng.integers(1, 65))
    return PolyCoeffs(rng.normal(size=d + 1).astype(complex))


def mod4_sampler(rng):
    d = int(rng.integers(1, 33))
    a = np.zeros(4 * d + 2)
    a[1::4] = rng.normal(size=len(a[1::4]))
    return PolyCoeffs(a.astype(complex))


class TestVerifyBetaBound:
    def test_cheb_monomials(self):
        rep = verify_beta_bound(cheb_monomial_sampler, 64, seed=1)
        betas = np.array([r[3] for r in rep.rows])
        assert rep.violations == 0
        assert np.allclose(betas, 1.0, atol=1e-6)
        assert rep.max_ratio < 0.5

    def test_random_real(self):
        rep = verify_beta_bound(random_real_sampler, 1000, seed=2)
        assert rep.violations == 0

    def test_mod4_beta_at_most_two(self):
        rep = verify_beta_bound(mod4_sampler, 300, seed=3)
        assert rep.violations == 0
        assert max(r[3] for r in rep.rows) <= 2 + 1e-6

    def test_rejects_complex_sampler(self):
        def bad(rng):
            return PolyCoeffs(np.array([1.0, 1j]))
        with pytest.raises(ValueError):
            verify_beta_bound(bad, 2)


class TestBernstein:
    def test_pure_exponential_equality(self):
        for N in (1, 5, 17):
            a = np.zeros(N + 1, dtype=complex)
            a[N] = 1.0
            assert bernstein_check(PolyCoeffs(a))

    def test_constant(self):
        assert bernstein_check(PolyCoeffs([0.7]))

    def test_random_sweep(self):
        rng = np.random.default_rng(52)
        for _ in range(100):
            d = int(rng.integers(1, 33))
            a = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
            assert bernstein_check(PolyCoeffs(a))


class TestTorusNorms:
    def test_parseval_single_mode(self):
        assert norm2_torus(PolyCoeffs([0, 0, 3.0])) == pytest.approx(
            3.0 * math.sqrt(2 * math.pi), abs=1e-14)

    def test_derivative_weights(self):
        c = PolyCoeffs([1.0, 0, 2.0])
        assert norm2_torus_derivative(c) == pytest.approx(
            math.sqrt(2 * math.pi * 16.0), abs=1e-12)
