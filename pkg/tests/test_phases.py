import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gqtlab.phases import (
    NormViolationError,
    PhaseFactors,
    RotationGate,
    complementary_polynomial,
    gqsp_matrix,
    reconstruct_P,
    rotation_matrix,
    solve_phases,
)
from gqtlab.polynomials import (
    ApproxSpec,
    PolyCoeffs,
    approx_inverse,
    eval_circle,
    max_abs_circle,
)


def scaled_random_poly(rng, d, target=0.9):
    a = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    c = PolyCoeffs(a)
    return c.scaled(target / max_abs_circle(c))


def coeff_error(a: PolyCoeffs, b: PolyCoeffs) -> float:
    n = max(len(a.coeffs), len(b.coeffs))
    pa = np.pad(a.coeffs, (0, n - len(a.coeffs)))
    pb = np.pad(b.coeffs, (0, n - len(b.coeffs)))
    return float(np.max(np.abs(pa - pb)))


class TestRotationMatrix:
    def test_zero_angles(self):
        assert np.allclose(rotation_matrix(RotationGate(0, 0, 0)),
                           [[1, 0], [0, -1]])

    def test_half_pi(self):
        assert np.allclose(rotation_matrix(RotationGate(math.pi / 2, 0, 0)),
                           [[0, 1], [1, 0]], atol=1e-15)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
    def test_unitary(self, t, p, l):
        R = rotation_matrix(RotationGate(t, p, l))
        assert np.linalg.norm(R.conj().T @ R - np.eye(2)) < 1e-12


class TestPhaseFactors:
    def test_canonicalized(self):
        ph = PhaseFactors([4.0], [-4.0], 7.0)
        assert -math.pi < ph.thetas[0] <= math.pi
        assert -math.pi < ph.phis[0] <= math.pi
        assert -math.pi < ph.lam <= math.pi

    def test_json_round_trip(self):
        ph = PhaseFactors([0.1, 0.2], [0.3, -0.4], 1.5)
        back = PhaseFactors.from_json_dict(ph.to_json_dict())
        assert np.allclose(back.thetas, ph.thetas)
        assert np.allclose(back.phis, ph.phis)
        assert back.lam == pytest.approx(ph.lam)

    def test_mismatched_lengths(self):
        with pytest.raises(ValueError):
            PhaseFactors([0.1], [0.2, 0.3], 0.0)


class TestSolvePhases:
    def test_constant(self):
        ph = solve_phases(PolyCoeffs([0.5]))
        assert ph.degree == 0
        assert coeff_error(reconstruct_P(ph), PolyCoeffs([0.5])) < 1e-12

    def test_single_monomial(self):
        c = PolyCoeffs([0, 0.9])
        ph = solve_phases(c)
        assert coeff_error(reconstruct_P(ph), c) < 1e-10

    def test_inverse_polynomial(self):
        c = approx_inverse(ApproxSpec(kappa=10, eps=1e-3)).poly.scaled(0.5)
        ph = solve_phases(c)
        assert coeff_error(reconstruct_P(ph), c.trimmed()) <= 1e-8 * 56

    def test_norm_violation(self):
        with pytest.raises(NormViolationError):
            solve_phases(PolyCoeffs([0, 1.0]))

    def test_round_trip_random(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            d = int(rng.integers(0, 65))
            c = scaled_random_poly(rng, d)
            ph = solve_phases(c)
            assert coeff_error(reconstruct_P(ph), c.trimmed()) <= 1e-8 * (d + 1)


class TestReconstructP:
    def test_trivial(self):
        ph = PhaseFactors([0.0], [0.0], 0.0)
        assert coeff_error(reconstruct_P(ph), PolyCoeffs([1.0])) < 1e-15

    def test_round_trip(self):
        c = PolyCoeffs([0, 0, 0.7])
        rec = reconstruct_P(solve_phases(c))
        assert coeff_error(rec, c) < 1e-10

    def test_interpolation_oracle(self):
        # coefficients must match a Fourier fit of the numerically
        # assembled 2x2 chain evaluated at unit-circle points
        rng = np.random.default_rng(22)
        d = 6
        ph = PhaseFactors(rng.uniform(-np.pi, np.pi, d + 1),
                          rng.uniform(-np.pi, np.pi, d + 1),
                          rng.uniform(-np.pi, np.pi))
        npts = 13
        thetas = 2 * np.pi * np.arange(npts) / npts
        tl = []
        for t in thetas:
            z = np.exp(1j * t)
            M = rotation_matrix(RotationGate(ph.thetas[0], ph.phis[0], ph.lam))
            for k in range(1, d + 1):
                M = np.diag([z, 1.0]) @ M
                M = rotation_matrix(
                    RotationGate(ph.thetas[k], ph.phis[k], 0.0)) @ M
            tl.append(M[0, 0])
        V = np.exp(1j * np.outer(thetas, np.arange(npts)))
        fitted = np.linalg.solve(V, np.array(tl))[: d + 1]
        assert coeff_error(PolyCoeffs(fitted), reconstruct_P(ph)) < 1e-10


class TestComplementary:
    def test_identity_on_circle(self):
        rng = np.random.default_rng(23)
        c = scaled_random_poly(rng, 24)
        q = complementary_polynomial(c)
        theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
        total = (np.abs(eval_circle(c, theta)) ** 2
                 + np.abs(eval_circle(q, theta)) ** 2)
        assert np.max(np.abs(total - 1)) < 1e-9


class TestGqspMatrix:
    def test_identity_argument(self):
        c = PolyCoeffs([0, 0.9])
        ph = solve_phases(c)
        G = gqsp_matrix(ph, np.eye(3))
        assert np.allclose(G[:3, :3], 0.9 * np.eye(3), atol=1e-10)

    def test_diagonal_unitary(self):
        rng = np.random.default_rng(24)
        c = scaled_random_poly(rng, 5)
        ph = solve_phases(c)
        gammas = rng.uniform(0, 2 * np.pi, 4)
        U = np.diag(np.exp(1j * gammas))
        blk = gqsp_matrix(ph, U)[:4, :4]
        assert np.allclose(np.diag(blk), eval_circle(c, gammas), atol=1e-9)

    def test_random_unitary_eig_oracle(self):
        rng = np.random.default_rng(25)
        X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        U, _ = np.linalg.qr(X)
        c = scaled_random_poly(rng, 5)
        ph = solve_phases(c)
        G = gqsp_matrix(ph, U)
        w, V = np.linalg.eig(U)
        PU = (V * np.polynomial.polynomial.polyval(w, c.coeffs)) \
            @ np.linalg.inv(V)
        assert np.linalg.norm(G[:4, :4] - PU, 2) < 1e-9
        assert np.linalg.norm(G.conj().T @ G - np.eye(8)) < 1e-10

    def test_rejects_nonunitary(self):
        ph = solve_phases(PolyCoeffs([0.5]))
        with pytest.raises(ValueError):
            gqsp_matrix(ph, np.ones((2, 2)))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 16), st.integers(0, 2 ** 31 - 1))
def test_round_trip_property(d, seed):
    rng = np.random.default_rng(seed)
    c = scaled_random_poly(rng, d)
    ph = solve_phases(c)
    assert coeff_error(reconstruct_P(ph), c.trimmed()) <= 1e-8 * (d + 1)
