"""Dual-basis polynomial algebra.

A single complex coefficient vector ``a_0 .. a_d`` is read two ways
throughout this package: as Chebyshev coefficients of ``p(x) = sum a_n T_n(x)``
on [-1, 1], and as monomial coefficients of ``P(z) = sum a_n z^n`` on the
unit circle.  The ratio of the two sup-norms (the scaling factor ``beta``)
decides how much a transformation polynomial must be scaled down before a
phase-factor sequence exists.
"""

from __future__ import annotations

import dataclasses
import math
import warnings
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from numpy.polynomial import polynomial as _poly

__all__ = [
    "PolyCoeffs",
    "ParityClass",
    "ApproxSpec",
    "InverseApproxResult",
    "DomainError",
    "DegeneratePolynomialError",
    "ParityError",
    "ApproximationError",
    "eval_cheb",
    "eval_circle",
    "max_abs_interval",
    "max_abs_circle",
    "scaling_factor",
    "classify_parity",
    "parity_split",
    "sqrt_substitute_even",
    "sqrt_substitute_odd",
    "approx_inverse",
    "approx_target_sqrt",
    "cheb_to_monomial",
    "monomial_to_cheb",
]

# Relative tolerance below which a coefficient counts as zero for parity
# classification and tail trimming.
ZERO_TOL = 1e-12

# Degree beyond which the exact Chebyshev<->monomial basis change is
# numerically unreliable in float64.
MONOMIAL_DEGREE_CAP = 64


class DomainError(ValueError):
    """Evaluation point outside the allowed domain."""


class DegeneratePolynomialError(ValueError):
    """Polynomial too close to zero for the requested operation."""


class ParityError(ValueError):
    """Coefficients do not have the parity the operation requires."""


class ApproximationError(RuntimeError):
    """Target accuracy unreachable within the degree cap."""


@dataclasses.dataclass(frozen=True)
class PolyCoeffs:
    """Complex coefficients a_0..a_d, shared by p(x) and P(z)."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("coefficient vector must be 1-D and non-empty")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def trimmed(self, tol: float = ZERO_TOL) -> "PolyCoeffs":
        """Drop an exact/near-zero tail (relative to the largest coefficient)."""
        a = self.coeffs
        scale = np.max(np.abs(a))
        if scale == 0.0:
            return PolyCoeffs(np.zeros(1, dtype=complex))
        keep = np.nonzero(np.abs(a) > tol * scale)[0]
        if keep.size == 0:
            return PolyCoeffs(np.zeros(1, dtype=complex))
        return PolyCoeffs(a[: keep[-1] + 1])

    def scaled(self, s: complex) -> "PolyCoeffs":
        return PolyCoeffs(self.coeffs * s)

    def to_json_dict(self) -> dict:
        return {
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "basis": "chebyshev-monomial-dual",
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PolyCoeffs":
        if d.get("basis", "chebyshev-monomial-dual") != "chebyshev-monomial-dual":
            raise ValueError(f"unknown basis {d.get('basis')!r}")
        return cls(np.array([complex(re, im) for re, im in d["coeffs"]]))


@dataclasses.dataclass(frozen=True)
class ParityClass:
    """Which coefficient indices carry weight.

    ``tag`` is even/odd/mixed; ``mod4`` refines odd polynomials whose nonzero
    indices all sit in one residue class mod 4 (those enjoy beta <= 2).
    """

    tag: str  # "even" | "odd" | "mixed"
    mod4: str | None = None  # "mod4_1" | "mod4_3" | None

    def __post_init__(self):
        if self.tag not in ("even", "odd", "mixed"):
            raise ValueError(f"bad parity tag {self.tag!r}")
        if self.mod4 not in (None, "mod4_1", "mod4_3"):
            raise ValueError(f"bad mod4 tag {self.mod4!r}")


@dataclasses.dataclass(frozen=True)
class ApproxSpec:
    """Parameters of the matrix-inversion target 1/(4*kappa*x)."""

    kappa: float
    eps: float
    target: str = "inverse_x"

    def __post_init__(self):
        if not self.kappa > 1:
            raise ValueError("kappa must exceed 1")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")


@dataclasses.dataclass(frozen=True)
class InverseApproxResult:
    poly: PolyCoeffs
    degree: int
    max_error: float
    kappa: float
    eps: float
    mode: str


def _as_poly(c) -> PolyCoeffs:
    return c if isinstance(c, PolyCoeffs) else PolyCoeffs(np.asarray(c))


def eval_cheb(c: PolyCoeffs | Sequence[complex], x):
    """p(x) = sum a_n T_n(x) by the Clenshaw recurrence."""
    c = _as_poly(c)
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1 + 1e-12):
        raise DomainError("Chebyshev evaluation requires |x| <= 1")
    return _cheb.chebval(xa, c.coeffs)


def eval_circle(c: PolyCoeffs | Sequence[complex], theta):
    """P(e^{i theta}) = sum a_n e^{i n theta}."""
    c = _as_poly(c)
    z = np.exp(1j * np.asarray(theta, dtype=float))
    return _poly.polyval(z, c.coeffs)


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                xtol: float = 1e-9) -> float:
    """Maximum of a unimodal-on-[lo,hi] function by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1, f2 = f(c1), f(c2)
    while (b - a) > xtol:
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = f(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = f(c1)
    return max(f1, f2, f(0.5 * (a + b)))


# Uniform sampling is capped so very high degrees stay tractable; the
# refinement step recovers anything the grid clips.
_SAMPLES_PER_DEGREE = 4096
_SAMPLES_CAP = 1 << 20
_REFINE_TOP = 8


def _sample_count(degree: int, samples: int | None) -> int:
    if samples is not None:
        return max(int(samples), 4 * (degree + 1))
    return min(_SAMPLES_PER_DEGREE * (degree + 1), _SAMPLES_CAP)


def _refined_max(values: np.ndarray, grid: np.ndarray,
                 f: Callable[[float], float], periodic: bool) -> float:
    best = float(np.max(values))
    n = len(grid)
    top = np.argsort(values)[-_REFINE_TOP:]
    step = grid[1] - grid[0]
    for i in top:
        if periodic:
            lo, hi = grid[i] - step, grid[i] + step
        else:
            lo = max(grid[0], grid[i] - step)
            hi = max(lo + 1e-15, min(grid[-1], grid[i] + step))
        best = max(best, _golden_max(f, lo, hi))
    return best


def max_abs_interval(c: PolyCoeffs | Sequence[complex],
                     samples: int | None = None) -> float:
    """max over [-1, 1] of |p(x)|, dense sampling plus local refinement."""
    c = _as_poly(c)
    n = _sample_count(c.degree, samples)
    # Sample in theta: p(cos theta) covers [-1,1] with extra density at the
    # endpoints, where Chebyshev sums peak most often.
    theta = np.linspace(0.0, math.pi, n)
    vals = np.abs(_cheb.chebval(np.cos(theta), c.coeffs))
    f = lambda t: abs(_cheb.chebval(math.cos(t), c.coeffs))
    return _refined_max(vals, theta, f, periodic=False)


def max_abs_circle(c: PolyCoeffs | Sequence[complex],
                   samples: int | None = None) -> float:
    """max over theta of |P(e^{i theta})|, FFT sampling plus refinement."""
    c = _as_poly(c)
    n = _sample_count(c.degree, samples)
    # FFT evaluates P at all n-th roots of unity at once.
    vals = np.abs(np.fft.fft(c.coeffs, n))
    theta = -2.0 * math.pi * np.arange(n) / n  # fft convention e^{-2pi i kj/n}
    f = lambda t: abs(_poly.polyval(np.exp(1j * t), c.coeffs))
    return _refined_max(vals, theta, f, periodic=True)


def scaling_factor(c: PolyCoeffs | Sequence[complex]) -> float:
    """beta = max|P| on the circle / max|p| on [-1,1]; >= 1 up to roundoff."""
    c = _as_poly(c)
    denom = max_abs_interval(c)
    if denom < 1e-14:
        raise DegeneratePolynomialError(
            "interval sup-norm below 1e-14; scaling factor undefined")
    return max_abs_circle(c) / denom


def classify_parity(c: PolyCoeffs | Sequence[complex],
                    tol: float = ZERO_TOL) -> ParityClass:
    c = _as_poly(c)
    if tol < 0:
        raise ValueError("tol must be >= 0")
    a = np.abs(c.coeffs)
    scale = a.max()
    if scale == 0.0:
        return ParityClass("even")
    idx = np.nonzero(a > tol * scale)[0]
    if np.all(idx % 2 == 0):
        return ParityClass("even")
    if np.all(idx % 2 == 1):
        mod4 = None
        if np.all(idx % 4 == 1):
            mod4 = "mod4_1"
        elif np.all(idx % 4 == 3):
            mod4 = "mod4_3"
        return ParityClass("odd", mod4)
    return ParityClass("mixed")


def parity_split(c: PolyCoeffs | Sequence[complex]) -> tuple[PolyCoeffs, PolyCoeffs]:
    """(even part, odd part); they sum back to c exactly after padding."""
    c = _as_poly(c)
    even = c.coeffs.copy()
    odd = c.coeffs.copy()
    even[1::2] = 0.0
    odd[0::2] = 0.0
    return PolyCoeffs(even).trimmed(tol=0.0), PolyCoeffs(odd).trimmed(tol=0.0)


def _check_parity(c: PolyCoeffs, want: str, tol: float = 1e-10):
    a = np.abs(c.coeffs)
    scale = a.max()
    if scale == 0.0:
        return
    bad = a[1::2] if want == "even" else a[0::2]
    if bad.size and bad.max() > tol * scale:
        raise ParityError(f"coefficients are not {want} within tolerance")


def _cheb_shifted_tn(n_max: int) -> list[np.ndarray]:
    """Chebyshev(x) coefficients of T_n(2x - 1) for n = 0..n_max.

    Uses the three-term recurrence with u(x) = 2x - 1 = -T_0 + 2 T_1.
    """
    u = np.array([-1.0, 2.0])
    out = [np.array([1.0])]
    if n_max >= 1:
        out.append(u.copy())
    for _ in range(2, n_max + 1):
        out.append(_cheb.chebsub(2.0 * _cheb.chebmul(u, out[-1]), out[-2]))
    return out


def sqrt_substitute_even(c_even: PolyCoeffs | Sequence[complex]) -> PolyCoeffs:
    """q with q(y^2) = p_even(y); via T_{2n}(y) = T_n(2y^2 - 1)."""
    c = _as_poly(c_even)
    _check_parity(c, "even")
    m = c.degree // 2
    basis = _cheb_shifted_tn(m)
    q = np.zeros(m + 1, dtype=complex)
    for n in range(m + 1):
        k = 2 * n
        if k <= c.degree:
            q[: n + 1] += c.coeffs[k] * basis[n]
    return PolyCoeffs(q)


def sqrt_substitute_odd(c_odd: PolyCoeffs | Sequence[complex]) -> PolyCoeffs:
    """q with y*q(y^2) = p_odd(y).

    T_{2n+1}(y) = y * c_n(2y^2 - 1) where c_0 = 1, c_1 = 2u - 1 and
    c_n = 2u c_{n-1} - c_{n-2} (from T_{a+2} = 2 T_2 T_a - T_{a-2}).
    """
    c = _as_poly(c_odd)
    _check_parity(c, "odd")
    m = (c.degree - 1) // 2 if c.degree >= 1 else 0
    u = np.array([-1.0, 2.0])  # 2x - 1 in the Chebyshev basis
    fams = [np.array([1.0])]
    if m >= 1:
        fams.append(_cheb.chebsub(2.0 * u, np.array([1.0])))
    for _ in range(2, m + 1):
        fams.append(_cheb.chebsub(2.0 * _cheb.chebmul(u, fams[-1]), fams[-2]))
    q = np.zeros(m + 1, dtype=complex)
    for n in range(m + 1):
        k = 2 * n + 1
        if k <= c.degree:
            q[: n + 1] += c.coeffs[k] * fams[n]
    return PolyCoeffs(q)


# ---------------------------------------------------------------------------
# Minimax approximation of 1/(4 kappa x) on [1/kappa, 1] by odd polynomials.
# ---------------------------------------------------------------------------

def _remez_odd(f: Callable[[np.ndarray], np.ndarray], a: float, degree: int,
               grid_size: int = 0, max_iter: int = 60) -> tuple[np.ndarray, float]:
    """Minimax odd approximation of f on [a, 1] by weighted Remez exchange.

    An odd polynomial of degree d is x * s(x^2) with deg s = (d-1)/2, so the
    problem is solved as a weighted (weight sqrt(y)) approximation of
    f(sqrt(y))/sqrt(y) by s over y in [a^2, 1], in a Chebyshev basis adapted
    to that interval; this stays well-conditioned at degrees where the global
    odd-Chebyshev design matrix degenerates.  Returns the full coefficient
    vector (length degree+1, even entries zero) and the achieved sup error.
    """
    m = (degree + 1) // 2  # free coefficients c_0..c_{m-1} of s
    npts = m + 1
    ylo, yhi = a * a, 1.0
    mid, half = 0.5 * (yhi + ylo), 0.5 * (yhi - ylo)

    def design(ys: np.ndarray) -> np.ndarray:
        u = np.clip((ys - mid) / half, -1.0, 1.0)
        return np.cos(np.outer(np.arccos(u), np.arange(m)))

    def g(ys):
        x = np.sqrt(ys)
        return f(x) / x

    w = np.sqrt  # the error in x-space is sqrt(y) * (s(y) - g(y))

    k = np.arange(npts)
    ref = mid + half * np.cos(math.pi * k / (npts - 1))
    ref.sort()
    if grid_size <= 0:
        grid_size = max(20 * degree, 2000)
    grid = mid + half * np.cos(np.linspace(0.0, math.pi, grid_size))
    grid = np.unique(grid)
    gg, wg = g(grid), w(grid)

    coef = np.zeros(m)
    h = 0.0
    for _ in range(max_iter):
        A = np.empty((npts, m + 1))
        A[:, :m] = design(ref)
        A[:, m] = (-1.0) ** np.arange(npts) / w(ref)
        sol = np.linalg.solve(A, g(ref))
        coef, h = sol[:m], sol[m]

        err = wg * (design(grid) @ coef - gg)
        # Local extrema of the error (plus the endpoints).
        sign_change = np.diff(np.sign(np.diff(err)))
        interior = np.nonzero(sign_change != 0)[0] + 1
        cand = np.unique(np.concatenate(([0], interior, [len(grid) - 1])))
        # Keep an alternating subsequence, favouring the largest |err|.
        pts, vals = [], []
        for i in cand:
            if pts and np.sign(err[i]) == np.sign(vals[-1]):
                if abs(err[i]) > abs(vals[-1]):
                    pts[-1], vals[-1] = i, err[i]
            else:
                pts.append(i)
                vals.append(err[i])
        if len(pts) > npts:
            # Drop smallest-amplitude endpoints until the count fits.
            while len(pts) > npts:
                drop = 0 if abs(vals[0]) < abs(vals[-1]) else len(pts) - 1
                pts.pop(drop)
                vals.pop(drop)
        if len(pts) < npts:
            break  # degenerate alternation; current solution is near-optimal
        new_ref = grid[np.array(pts)]
        max_err = float(np.max(np.abs(err)))
        if max_err - abs(h) <= 1e-6 * max(abs(h), 1e-300) + 1e-15:
            ref = new_ref
            break
        ref = new_ref

    err = wg * (design(grid) @ coef - gg)

    # Convert x * s(x^2) to global Chebyshev coefficients on [-1, 1]:
    # with u(x^2) = (x^2 - mid)/half and x^2 = (T_2 + 1)/2,
    # u = ((1 - 2 mid) T_0 + T_2) / (2 half) as a Chebyshev vector.
    u_cheb = np.array([(0.5 - mid) / half, 0.0, 0.5 / half])
    t_prev = np.array([1.0])
    acc = coef[0] * t_prev
    if m > 1:
        t_cur = u_cheb.copy()
        acc = _cheb.chebadd(acc, coef[1] * t_cur)
        for kk in range(2, m):
            t_next = _cheb.chebsub(2.0 * _cheb.chebmul(u_cheb, t_cur), t_prev)
            t_prev, t_cur = t_cur, t_next
            acc = _cheb.chebadd(acc, coef[kk] * t_cur)
    full_c = _cheb.chebmul(np.array([0.0, 1.0]), acc)
    full = np.zeros(degree + 1)
    full[:len(full_c)] = full_c
    return full, float(np.max(np.abs(err)))


def approx_inverse(spec: ApproxSpec, mode: str = "remez",
                   degree: int | None = None,
                   degree_cap: int = 4001) -> InverseApproxResult:
    """Odd real polynomial approximating 1/(4 kappa x) on [1/kappa, 1].

    ``mode='remez'`` (reference) runs a Remez exchange on [1/kappa, 1] with an
    odd-Chebyshev basis; oddness makes the error on [-1, -1/kappa] identical.
    ``mode='projection'`` Chebyshev-projects a smoothed inverse as a cheaper
    baseline.  When ``degree`` is None the minimal odd degree achieving eps is
    located by bracketing plus bisection.
    """
    kappa, eps = spec.kappa, spec.eps
    a = 1.0 / kappa
    f = lambda x: 1.0 / (4.0 * kappa * x)

    if mode == "projection":
        return _projection_inverse(spec, degree, degree_cap)
    if mode != "remez":
        raise ValueError(f"unknown mode {mode!r}")

    def err_at(d: int) -> tuple[np.ndarray, float]:
        return _remez_odd(f, a, d)

    if degree is not None:
        d = degree if degree % 2 == 1 else degree + 1
        coeffs, e = err_at(d)
        if e > eps:
            raise ApproximationError(
                f"degree {d} reaches error {e:.3e} > eps {eps:.3e} "
                f"(kappa={kappa})")
        return InverseApproxResult(PolyCoeffs(coeffs), d, e, kappa, eps, mode)

    # Bracket the minimal degree, then bisect over odd degrees.
    lo, hi = 1, None
    d = max(3, int(kappa))
    if d % 2 == 0:
        d += 1
    last = None
    while d <= degree_cap:
        coeffs, e = err_at(d)
        last = (d, coeffs, e)
        if e <= eps:
            hi = d
            break
        lo = d
        d = 2 * d + 1
    if hi is None:
        raise ApproximationError(
            f"eps {eps:.3e} unreachable below degree {degree_cap} "
            f"(best error {last[2]:.3e} at degree {last[0]})")
    best = last
    while hi - lo > 2:
        mid = (lo + hi) // 2
        if mid % 2 == 0:
            mid += 1
        if mid >= hi:
            mid = hi - 2
        if mid <= lo:
            break
        coeffs, e = err_at(mid)
        if e <= eps:
            hi, best = mid, (mid, coeffs, e)
        else:
            lo = mid
    if best[0] != hi:
        coeffs, e = err_at(hi)
        best = (hi, coeffs, e)
    d, coeffs, e = best
    return InverseApproxResult(PolyCoeffs(coeffs), d, e, kappa, eps, mode)


def _projection_inverse(spec: ApproxSpec, degree: int | None,
                        degree_cap: int) -> InverseApproxResult:
    """Chebyshev interpolation of the smoothed inverse (1-(1-x^2)^b)/(4 kappa x)."""
    kappa, eps = spec.kappa, spec.eps
    b = max(1, int(math.ceil(kappa ** 2 * math.log(kappa / eps))))

    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        small = np.abs(x) < 1e-8
        # near 0 the smoothed target tends to 0 like b*x
        out[small] = x[small] * b / (4.0 * kappa)
        xs = x[~small]
        out[~small] = (1.0 - (1.0 - xs ** 2) ** b) / (4.0 * kappa * xs)
        return out

    if degree is None:
        d = min(degree_cap, max(11, int(6 * math.sqrt(b * math.log(4 * b / eps)))))
        if d % 2 == 0:
            d += 1
    else:
        d = degree if degree % 2 == 1 else degree + 1
    coeffs = _cheb.chebinterpolate(g, d)
    coeffs[0::2] = 0.0  # exact odd symmetry up to roundoff
    xs = np.linspace(1.0 / kappa, 1.0, 20000)
    e = float(np.max(np.abs(_cheb.chebval(xs, coeffs) - 1.0 / (4 * kappa * xs))))
    if e > eps:
        raise ApproximationError(
            f"projection mode reached error {e:.3e} > eps {eps:.3e}; "
            "use mode='remez'")
    return InverseApproxResult(PolyCoeffs(coeffs.astype(complex)), d, e,
                               kappa, eps, "projection")


def approx_target_sqrt(f: Callable[[np.ndarray], np.ndarray],
                       degree: int) -> PolyCoeffs:
    """Chebyshev interpolant of f on [-1, 1] at Chebyshev nodes."""
    coeffs = _cheb.chebinterpolate(lambda x: np.asarray(f(x), dtype=complex),
                                   degree)
    return PolyCoeffs(np.atleast_1d(coeffs))


def cheb_to_monomial(c: PolyCoeffs | Sequence[complex]) -> np.ndarray:
    c = _as_poly(c)
    if c.degree > MONOMIAL_DEGREE_CAP:
        warnings.warn(
            f"degree {c.degree} exceeds the monomial-conversion stability cap "
            f"({MONOMIAL_DEGREE_CAP}); results may lose precision",
            stacklevel=2)
    return _cheb.cheb2poly(c.coeffs)


def monomial_to_cheb(m: Sequence[complex]) -> PolyCoeffs:
    m = np.atleast_1d(np.asarray(m, dtype=complex))
    if len(m) - 1 > MONOMIAL_DEGREE_CAP:
        warnings.warn(
            f"degree {len(m) - 1} exceeds the monomial-conversion stability "
            f"cap ({MONOMIAL_DEGREE_CAP}); results may lose precision",
            stacklevel=2)
    return PolyCoeffs(_cheb.poly2cheb(m))
