"""Phase-factor synthesis for generalized signal processing.

A degree-d complex polynomial P(z) with max |P| <= 1 on the unit circle is
realized as the top-left block of an interleaved product

    R(theta_d, phi_d, 0) * A * R(theta_{d-1}, phi_{d-1}, 0) * A * ...
        * A * R(theta_0, phi_0, lambda),       A = diag(z, 1),

where R is the single-qubit rotation of `rotation_matrix`.  `solve_phases`
finds the angles (spectral-factorization completion + layer stripping);
`reconstruct_P` multiplies the chain symbolically with polynomial-valued
entries and is the independent round-trip oracle; `gqsp_matrix` assembles the
explicit unitary for a given matrix argument.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from typing import Sequence

import numpy as np

from .polynomials import PolyCoeffs, max_abs_circle

__all__ = [
    "PhaseFactors",
    "RotationGate",
    "NormViolationError",
    "CompletionConditioningWarning",
    "rotation_matrix",
    "solve_phases",
    "reconstruct_P",
    "complementary_polynomial",
    "gqsp_matrix",
]

DEFAULT_MARGIN = 1e-4


class NormViolationError(ValueError):
    """|P| exceeds the admissible circle norm."""


class CompletionConditioningWarning(UserWarning):
    """Completion roots close to the unit circle; angles may lose accuracy."""


def _canonical(angle):
    """Map angles to (-pi, pi]."""
    a = np.mod(np.asarray(angle, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    return np.where(np.isclose(a, -math.pi), math.pi, a)


@dataclasses.dataclass(frozen=True)
class PhaseFactors:
    """Angles ({theta_i}, {phi_i}, lambda) for a degree-d polynomial."""

    thetas: np.ndarray
    phis: np.ndarray
    lam: float

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.thetas, dtype=float))
        p = np.atleast_1d(np.asarray(self.phis, dtype=float))
        if t.shape != p.shape or t.ndim != 1 or t.size < 1:
            raise ValueError("thetas and phis must be equal-length 1-D, size >= 1")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(p))
                and math.isfinite(float(self.lam))):
            raise ValueError("angles must be finite")
        t = _canonical(t)
        p = _canonical(p)
        t.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "thetas", t)
        object.__setattr__(self, "phis", p)
        object.__setattr__(self, "lam", float(_canonical(self.lam)))

    @property
    def degree(self) -> int:
        return len(self.thetas) - 1

    def to_json_dict(self) -> dict:
        return {
            "thetas": [float(x) for x in self.thetas],
            "phis": [float(x) for x in self.phis],
            "lambda": float(self.lam),
            "degree": self.degree,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PhaseFactors":
        ph = cls(np.asarray(d["thetas"]), np.asarray(d["phis"]), d["lambda"])
        if "degree" in d and int(d["degree"]) != ph.degree:
            raise ValueError("degree field inconsistent with angle count")
        return ph


@dataclasses.dataclass(frozen=True)
class RotationGate:
    theta: float
    phi: float
    lam: float


def rotation_matrix(g: RotationGate) -> np.ndarray:
    """[[e^{i(lam+phi)} cos, e^{i phi} sin], [e^{i lam} sin, -cos]]."""
    ct, st = math.cos(g.theta), math.sin(g.theta)
    return np.array([
        [np.exp(1j * (g.lam + g.phi)) * ct, np.exp(1j * g.phi) * st],
        [np.exp(1j * g.lam) * st, -ct],
    ])


def _reconstruct_PQ(ph: PhaseFactors) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient recursion induced on the chain's first column (P, Q)."""
    d = ph.degree
    P = np.array([np.exp(1j * (ph.lam + ph.phis[0])) * math.cos(ph.thetas[0])])
    Q = np.array([np.exp(1j * ph.lam) * math.sin(ph.thetas[0])])
    for k in range(1, d + 1):
        ct, st = math.cos(ph.thetas[k]), math.sin(ph.thetas[k])
        zP = np.concatenate(([0.0], P))
        Qp = np.concatenate((Q, [0.0]))
        P = np.exp(1j * ph.phis[k]) * (ct * zP + st * Qp)
        Q = st * zP - ct * Qp
    return P, Q


def reconstruct_P(ph: PhaseFactors) -> PolyCoeffs:
    """Top-left polynomial entry of the symbolic chain product.

    P_0 = e^{i(lam+phi_0)} cos th_0,    Q_0 = e^{i lam} sin th_0,
    P_k = e^{i phi_k}(cos th_k * z P_{k-1} + sin th_k * Q_{k-1}),
    Q_k =            sin th_k * z P_{k-1} - cos th_k * Q_{k-1}.
    """
    P, _ = _reconstruct_PQ(ph)
    return PolyCoeffs(P)


def complementary_polynomial(c: PolyCoeffs | Sequence[complex]) -> PolyCoeffs:
    """Q of degree <= d with |P|^2 + |Q|^2 = 1 on the unit circle.

    Spectral factorization of 1 - |P|^2: the Laurent coefficients give a
    polynomial G(z) = z^d (1 - P(z) conj(P)(1/z)) whose roots come in
    conjugate-reciprocal pairs; Q collects one root per pair (the one inside
    the unit disk, located via a companion matrix) plus a positive scale
    fitted on the circle.
    """
    a = c.coeffs if isinstance(c, PolyCoeffs) else np.asarray(c, dtype=complex)
    d = len(a) - 1
    # Laurent coefficients of 1 - P(z) conj(P)(1/z); index j <-> power j - d.
    g = -np.convolve(a, np.conj(a)[::-1])
    g[d] += 1.0
    if d == 0:
        q0 = math.sqrt(max(float(g[0].real), 0.0))
        return PolyCoeffs(np.array([q0], dtype=complex))

    scale = np.max(np.abs(g))
    if scale == 0.0:
        return PolyCoeffs(np.zeros(d + 1, dtype=complex))
    # Strip exact-zero ends: low-end zeros are roots at z = 0 and may be
    # assigned to Q freely since |z^k Q| = |Q| on the circle.
    lo = 0
    while lo < 2 * d and abs(g[lo]) <= 1e-14 * scale:
        lo += 1
    hi = 2 * d
    while hi > lo and abs(g[hi]) <= 1e-14 * scale:
        hi -= 1
    core = g[lo:hi + 1]
    if len(core) > 1:
        roots = np.roots(core[::-1])
        # Companion-matrix roots of high-degree products limit the identity
        # |P|^2 + |Q|^2 = 1 to ~1e-8; a few Newton steps on the stripped
        # polynomial restore each root to near machine precision.
        cr = core[::-1]
        dcr = cr[:-1] * np.arange(len(cr) - 1, 0, -1)
        for _ in range(3):
            fv = np.polyval(cr, roots)
            fp = np.polyval(dcr, roots)
            step = np.where(np.abs(fp) > 0, fv / np.where(fp == 0, 1, fp), 0)
            nxt = roots - step
            ok = np.abs(np.polyval(cr, nxt)) <= np.abs(fv)
            roots = np.where(ok, nxt, roots)
        order = np.argsort(np.abs(roots))
        inside = roots[order[: roots.size // 2]]
        if np.min(np.abs(np.abs(roots) - 1.0)) < 1e-7:
            warnings.warn(
                "completion roots cluster on the unit circle; phase factors "
                "may be ill-conditioned", CompletionConditioningWarning,
                stacklevel=2)
    else:
        inside = np.array([], dtype=complex)

    q = np.ones(1, dtype=complex)
    for r in inside:
        q = np.convolve(q, np.array([-r, 1.0]))
    q = np.concatenate((np.zeros(lo, dtype=complex), q))
    if len(q) < d + 1:
        q = np.concatenate((q, np.zeros(d + 1 - len(q), dtype=complex)))

    # Positive scale from |Q|^2 = 1 - |P|^2 on a circle sample (median is
    # robust to points where both sides nearly vanish).
    theta = 2.0 * math.pi * (np.arange(4 * (d + 1)) + 0.37) / (4 * (d + 1))
    z = np.exp(1j * theta)
    target = 1.0 - np.abs(np.polyval(a[::-1], z)) ** 2
    got = np.abs(np.polyval(q[::-1], z)) ** 2
    ratio = np.median(np.maximum(target, 0.0) / np.maximum(got, 1e-300))
    q = q * math.sqrt(max(float(ratio), 0.0))
    return PolyCoeffs(_refine_completion(g, q))


def _refine_completion(g: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Coefficient-space Newton polish of conv(q, rev(conj q)) = g.

    Expanding the selected roots into coefficients loses ~1e-8 at degree 64;
    a couple of Newton steps on the quadratic coefficient equation restore
    the completion identity to near machine precision.  The global phase of
    q is the one-dimensional null direction, handled by least squares.
    """
    m = len(q)
    for _ in range(3):
        r = np.convolve(q, np.conj(q)[::-1]) - g
        if np.max(np.abs(r)) < 1e-13:
            break
        cols = []
        for k in range(m):
            e = np.zeros(m, dtype=complex)
            e[k] = 1.0
            cols.append(np.convolve(e, np.conj(q)[::-1])
                        + np.convolve(q, np.conj(e)[::-1]))
            e[k] = 1j
            cols.append(np.convolve(e, np.conj(q)[::-1])
                        + np.convolve(q, np.conj(e)[::-1]))
        J = np.array(cols).T
        Jr = np.vstack([J.real, J.imag])
        rr = np.concatenate([r.real, r.imag])
        sol, *_ = np.linalg.lstsq(Jr, -rr, rcond=None)
        q = q + sol[0::2] + 1j * sol[1::2]
    return q


def solve_phases(c: PolyCoeffs | Sequence[complex],
                 margin: float = DEFAULT_MARGIN) -> PhaseFactors:
    """Angles realizing P(z); verified by the reconstruct_P round trip.

    Trailing zero coefficients are trimmed first, so the returned degree is
    the effective degree of P.  Requires max |P| <= 1 - margin on the circle.
    """
    c = c if isinstance(c, PolyCoeffs) else PolyCoeffs(np.asarray(c))
    c = c.trimmed()
    if max_abs_circle(c) > 1.0 - margin:
        raise NormViolationError(
            f"max |P| on the circle exceeds 1 - margin (margin={margin}); "
            "rescale the polynomial first")
    d = c.degree
    P = c.coeffs.astype(complex).copy()
    Q = complementary_polynomial(PolyCoeffs(P)).coeffs.copy()

    thetas = np.zeros(d + 1)
    phis = np.zeros(d + 1)
    # Layer stripping: peel R(theta_k, phi_k, 0) * diag(z, 1) off the top.
    for k in range(d, 0, -1):
        p_lead, q_lead = P[k], Q[k]
        mag = max(np.max(np.abs(P)), np.max(np.abs(Q)))
        if abs(q_lead) <= 1e-14 * mag:
            # theta = 0 layer: P_k = z P_{k-1}, Q_k = -Q_{k-1}.
            theta, phi = 0.0, 0.0
            newP = P[1:]
            newQ = -Q[:k]
        else:
            phi = math.atan2((p_lead / q_lead).imag, (p_lead / q_lead).real)
            theta = math.atan2(abs(q_lead), abs(p_lead))
            e = np.exp(-1j * phi)
            ct, st = math.cos(theta), math.sin(theta)
            zP = e * ct * P + st * Q          # coefficients of z * P_{k-1}
            newQ = e * st * P - ct * Q        # degree k-1 (leading ~0)
            newP = zP[1:]
            newQ = newQ[:k]
        thetas[k], phis[k] = theta, phi
        P, Q = newP, newQ

    p0, q0 = P[0], Q[0]
    thetas[0] = math.atan2(abs(q0), abs(p0))
    if abs(q0) > 1e-14:
        lam = math.atan2(q0.imag, q0.real)
    else:
        lam = 0.0
    if abs(p0) > 1e-14:
        phis[0] = math.atan2(p0.imag, p0.real) - lam
    return PhaseFactors(thetas, phis, lam)


def gqsp_matrix(ph: PhaseFactors, U: np.ndarray) -> np.ndarray:
    """Explicit 2M x 2M circuit matrix; top-left block applies P to U.

    The ancilla is the slow tensor factor: diag(z, 1) becomes
    block_diag(U, I), i.e. U is applied when the ancilla is |0>.
    """
    U = np.asarray(U, dtype=complex)
    M = U.shape[0]
    if U.shape != (M, M) or np.linalg.norm(U.conj().T @ U - np.eye(M)) > 1e-10:
        raise ValueError("U must be unitary to 1e-10")
    eyeM = np.eye(M)
    A = np.block([[U, np.zeros((M, M))], [np.zeros((M, M)), eyeM]])
    out = np.kron(rotation_matrix(RotationGate(ph.thetas[0], ph.phis[0],
                                               ph.lam)), eyeM)
    for k in range(1, ph.degree + 1):
        out = A @ out
        out = np.kron(rotation_matrix(RotationGate(ph.thetas[k], ph.phis[k],
                                                   0.0)), eyeM) @ out
    return out
