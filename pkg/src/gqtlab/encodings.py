"""Projected unitary encodings as explicit dense matrices.

An encoding is a unitary U together with isometries Pi_L, Pi_R and a scale
alpha such that Pi_L^dag U Pi_R = A/alpha.  This module constructs encodings
from plain matrices (dilation), qubitizes Hermitian encodings into walk
operators, and combines encodings (Hermitianization, product with one extra
qubit).  Dimensions are exact — no power-of-two padding is required.
"""

from __future__ import annotations

import dataclasses
import math
import warnings

import numpy as np

__all__ = [
    "ProjectedUnitaryEncoding",
    "HermitianEncoding",
    "QubitizedPair",
    "EncodingValidationError",
    "SubnormalizationError",
    "DegenerateBranchError",
    "NearDegenerateWarning",
    "encoded_matrix",
    "dilate_hermitian",
    "dilate_general",
    "reflection",
    "walk_operator",
    "qubitized_eigenpairs",
    "coding_subspace_decomposition",
    "controlled_walk",
    "hermitianize",
    "multiply",
]

VALIDATION_TOL = 1e-10


class EncodingValidationError(ValueError):
    """One or more encoding invariants violated; message lists them."""


class SubnormalizationError(ValueError):
    """alpha smaller than the spectral norm of the matrix to encode."""


class DegenerateBranchError(ValueError):
    """Operation needs a non-degenerate qubitized pair."""


class NearDegenerateWarning(UserWarning):
    """sin(gamma) too small for the closed-form eigenvectors."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex).copy()
    a.flags.writeable = False
    return a


def _validate_core(U, Pi_L, Pi_R, alpha, hermitian: bool) -> list[str]:
    problems = []
    M = U.shape[0]
    if U.shape != (M, M):
        problems.append(f"U is {U.shape}, not square")
        return problems
    if np.linalg.norm(U.conj().T @ U - np.eye(M)) > VALIDATION_TOL * max(M, 1):
        problems.append("U is not unitary to 1e-10")
    if hermitian and np.linalg.norm(U - U.conj().T) > VALIDATION_TOL * max(M, 1):
        problems.append("U is not Hermitian to 1e-10")
    for name, Pi in (("Pi_L", Pi_L), ("Pi_R", Pi_R)):
        if Pi.shape[0] != M:
            problems.append(f"{name} has {Pi.shape[0]} rows, expected {M}")
            continue
        N = Pi.shape[1]
        if np.linalg.norm(Pi.conj().T @ Pi - np.eye(N)) > VALIDATION_TOL:
            problems.append(f"{name} is not an isometry to 1e-10")
    if not alpha > 0:
        problems.append("alpha must be positive")
    if not problems:
        enc = Pi_L.conj().T @ U @ Pi_R
        if np.linalg.norm(enc, 2) > 1 + 1e-9:
            problems.append("encoded matrix has spectral norm above 1 + 1e-9")
    return problems


@dataclasses.dataclass(frozen=True)
class ProjectedUnitaryEncoding:
    """U with Pi_L^dag U Pi_R = A/alpha."""

    U: np.ndarray
    Pi_L: np.ndarray
    Pi_R: np.ndarray
    alpha: float

    def __post_init__(self):
        U = _freeze(self.U)
        Pi_L = _freeze(self.Pi_L)
        Pi_R = _freeze(self.Pi_R)
        problems = _validate_core(U, Pi_L, Pi_R, self.alpha,
                                  hermitian=self._hermitian())
        if problems:
            raise EncodingValidationError("; ".join(problems))
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "Pi_L", Pi_L)
        object.__setattr__(self, "Pi_R", Pi_R)
        object.__setattr__(self, "alpha", float(self.alpha))

    @staticmethod
    def _hermitian() -> bool:
        return False

    @property
    def M(self) -> int:
        return self.U.shape[0]

    @property
    def N_L(self) -> int:
        return self.Pi_L.shape[1]

    @property
    def N_R(self) -> int:
        return self.Pi_R.shape[1]

    def to_json_dict(self) -> dict:
        from .serialization import matrix_to_json
        return {
            "U": matrix_to_json(self.U),
            "Pi_L": matrix_to_json(self.Pi_L),
            "Pi_R": matrix_to_json(self.Pi_R),
            "alpha": self.alpha,
        }


@dataclasses.dataclass(frozen=True)
class HermitianEncoding(ProjectedUnitaryEncoding):
    """U Hermitian and Pi_L == Pi_R (called Pi)."""

    def __post_init__(self):
        if self.Pi_L.shape != self.Pi_R.shape or \
                not np.allclose(self.Pi_L, self.Pi_R, atol=1e-12):
            raise EncodingValidationError(
                "Hermitian encoding requires Pi_L == Pi_R")
        super().__post_init__()

    @staticmethod
    def _hermitian() -> bool:
        return True

    @property
    def Pi(self) -> np.ndarray:
        return self.Pi_L


@dataclasses.dataclass(frozen=True)
class QubitizedPair:
    """Walk-operator eigendata sourced from one eigenvalue of A/alpha.

    Non-degenerate pairs carry two eigenvectors with eigenvalues
    e^{+i gamma}, e^{-i gamma}; the degenerate branch (gamma in {0, pi})
    carries a single vector.
    """

    gamma: float
    eigvals: tuple
    eigvecs: tuple
    degenerate: bool = False

    def __post_init__(self):
        if not 0.0 <= self.gamma <= math.pi:
            raise ValueError("gamma must lie in [0, pi]")
        if self.degenerate and len(self.eigvecs) != 1:
            raise ValueError("degenerate pair must carry exactly one vector")
        if not self.degenerate and len(self.eigvecs) != 2:
            raise ValueError("non-degenerate pair must carry two vectors")


def encoded_matrix(e: ProjectedUnitaryEncoding) -> np.ndarray:
    """A/alpha = Pi_L^dag U Pi_R."""
    return e.Pi_L.conj().T @ e.U @ e.Pi_R


def _psd_sqrt(B: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian matrix, eigenvalues clamped to [0,1]."""
    w, V = np.linalg.eigh((B + B.conj().T) / 2)
    w = np.clip(w, 0.0, 1.0)
    return (V * np.sqrt(w)) @ V.conj().T


def _selector(M: int, N: int) -> np.ndarray:
    """Isometry onto the first N coordinates of dimension M."""
    Pi = np.zeros((M, N), dtype=complex)
    Pi[:N, :N] = np.eye(N)
    return Pi


def dilate_hermitian(A: np.ndarray, alpha: float) -> HermitianEncoding:
    """Hermitian unitary [[A/a, S], [S, -A/a]] with S = sqrt(I - (A/a)^2).

    S is assembled from the eigendecomposition of A/a itself (eigenvalues
    clamped to [-1, 1]) so that (A/a)^2 + S^2 = I and [A/a, S] = 0 hold to
    roundoff even when eigenvalues of A/a sit exactly at +-1.
    """
    A = np.asarray(A, dtype=complex)
    N = A.shape[0]
    if A.shape != (N, N) or np.linalg.norm(A - A.conj().T) > 1e-10 * max(N, 1):
        raise EncodingValidationError("A must be square Hermitian to 1e-10")
    if alpha < np.linalg.norm(A, 2) - 1e-12:
        raise SubnormalizationError(
            f"alpha={alpha} below spectral norm {np.linalg.norm(A, 2)}")
    w, V = np.linalg.eigh(A / alpha)
    w = np.clip(w, -1.0, 1.0)
    B = (V * w) @ V.conj().T
    S = (V * np.sqrt(1.0 - w ** 2)) @ V.conj().T
    U = np.block([[B, S], [S, -B]])
    Pi = _selector(2 * N, N)
    return HermitianEncoding(U, Pi, Pi, alpha)


def dilate_general(A: np.ndarray, alpha: float) -> ProjectedUnitaryEncoding:
    """Unitary completion of the contraction A/alpha; M = N_L + N_R.

    Cosine-sine construction from the full SVD B = W S V^dag:

        U = [[B, W C_L W^dag], [V C_R V^dag, -V S^T W^dag]],

    with C = sqrt(1 - s^2) on the singular directions (1 on the padding),
    so every block shares one factorization and U is unitary to roundoff.
    """
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    N_L, N_R = A.shape
    if alpha < np.linalg.norm(A, 2) - 1e-12:
        raise SubnormalizationError(
            f"alpha={alpha} below spectral norm {np.linalg.norm(A, 2)}")
    B = A / alpha
    W, s, Vh = np.linalg.svd(B, full_matrices=True)
    s = np.clip(s, 0.0, 1.0)
    c = np.sqrt(1.0 - s ** 2)
    cL = np.ones(N_L)
    cL[: len(s)] = c
    cR = np.ones(N_R)
    cR[: len(s)] = c
    V = Vh.conj().T
    Bc = (W[:, : len(s)] * s) @ Vh[: len(s), :]
    St = np.zeros((N_R, N_L))
    St[: len(s), : len(s)] = np.diag(s)
    U = np.block([
        [Bc, (W * cL) @ W.conj().T],
        [(V * cR) @ V.conj().T, -V @ St @ W.conj().T],
    ])
    return ProjectedUnitaryEncoding(
        U, _selector(N_L + N_R, N_L), _selector(N_L + N_R, N_R), alpha)


def reflection(Pi: np.ndarray) -> np.ndarray:
    """-(I - 2 Pi Pi^dag): +1 on the range of Pi, -1 on its complement."""
    Pi = np.asarray(Pi, dtype=complex)
    M = Pi.shape[0]
    return 2.0 * (Pi @ Pi.conj().T) - np.eye(M)


def walk_operator(e: HermitianEncoding) -> np.ndarray:
    """Qubitized operator R_Pi U."""
    return reflection(e.Pi) @ e.U


def qubitized_eigenpairs(e: HermitianEncoding) -> list[QubitizedPair]:
    """Walk-operator eigenpairs derived from the eigenpairs of A/alpha.

    For each eigenpair (x, v) of A/alpha with gamma = arccos(x), the vectors
    (e^{+-i gamma} I - U) Pi v / (sqrt(2) sin gamma) are eigenvectors of
    R_Pi U with eigenvalues e^{+-i gamma}; when x = +-1 the single vector
    Pi v is kept with eigenvalue x.
    """
    enc = encoded_matrix(e)
    vals, vecs = np.linalg.eigh(enc)
    U, Pi = e.U, e.Pi
    pairs = []
    for x, v in zip(vals, vecs.T):
        x = float(np.clip(x, -1.0, 1.0))
        gamma = math.acos(x)
        pv = Pi @ v
        if abs(math.sin(gamma)) < 1e-6:
            warnings.warn(
                f"sin(gamma)={math.sin(gamma):.2e}; using the degenerate "
                "single-vector branch", NearDegenerateWarning, stacklevel=2)
            pairs.append(QubitizedPair(gamma, (complex(x),), (pv,),
                                       degenerate=True))
            continue
        norm = math.sqrt(2.0) * math.sin(gamma)
        plus = (np.exp(1j * gamma) * pv - U @ pv) / norm
        minus = (np.exp(-1j * gamma) * pv - U @ pv) / norm
        pairs.append(QubitizedPair(
            gamma, (np.exp(1j * gamma), np.exp(-1j * gamma)), (plus, minus)))
    return pairs


def coding_subspace_decomposition(pair: QubitizedPair) -> np.ndarray:
    """Recover Pi v from the eigenvector pair: (v_plus - v_minus)/(sqrt(2) i)."""
    if pair.degenerate:
        raise DegenerateBranchError(
            "decomposition needs a non-degenerate pair")
    plus, minus = pair.eigvecs
    return (plus - minus) / (math.sqrt(2.0) * 1j)


def controlled_walk(e: HermitianEncoding, decomposed: bool = False) -> np.ndarray:
    """|0><0| (x) R_Pi U + |1><1| (x) I on control (x) system.

    With decomposed=True the same matrix is assembled from three factors:
    anti-controlled U, the projector-controlled reflection
    I - 2|0><0| (x) Pi Pi^dag, and -Z on the control.  Both forms agree to
    float roundoff.
    """
    M = e.M
    eyeM = np.eye(M)
    if not decomposed:
        W = walk_operator(e)
        return np.block([[W, np.zeros((M, M))], [np.zeros((M, M)), eyeM]])
    anti_U = np.block([[e.U, np.zeros((M, M))], [np.zeros((M, M)), eyeM]])
    P = e.Pi @ e.Pi.conj().T
    ctrl_refl = np.eye(2 * M) - 2.0 * np.block(
        [[P, np.zeros((M, M))], [np.zeros((M, M)), np.zeros((M, M))]])
    minus_Z = np.kron(np.diag([-1.0, 1.0]), eyeM)
    return ctrl_refl @ minus_Z @ anti_U


def hermitianize(e: ProjectedUnitaryEncoding) -> HermitianEncoding:
    """Embed A into the Hermitian [[0, A], [A^dag, 0]] at the same alpha."""
    M = e.M
    Z = np.zeros((M, M))
    U_bar = np.block([[Z, e.U], [e.U.conj().T, Z]])
    Pi_bar = np.block([
        [e.Pi_L, np.zeros((M, e.N_R))],
        [np.zeros((M, e.N_L)), e.Pi_R],
    ])
    return HermitianEncoding(U_bar, Pi_bar, Pi_bar, e.alpha)


def _pad_encoding(e: ProjectedUnitaryEncoding, M: int) -> ProjectedUnitaryEncoding:
    """Extend the unitary by an identity direct summand up to dimension M."""
    extra = M - e.M
    if extra == 0:
        return e
    U = np.block([
        [e.U, np.zeros((e.M, extra))],
        [np.zeros((extra, e.M)), np.eye(extra)],
    ])
    Pi_L = np.vstack([e.Pi_L, np.zeros((extra, e.N_L))])
    Pi_R = np.vstack([e.Pi_R, np.zeros((extra, e.N_R))])
    return ProjectedUnitaryEncoding(U, Pi_L, Pi_R, e.alpha)


def multiply(e1: ProjectedUnitaryEncoding,
             e2: ProjectedUnitaryEncoding) -> ProjectedUnitaryEncoding:
    """Encoding of A1 A2 / (alpha1 alpha2) with one extra qubit.

    U_bar = (I2 (x) U1) Omega (I2 (x) U2) where Omega transfers the range of
    Pi_{2,L} into the range of Pi_{1,R} on the |0> branch (and the adjoint on
    the |1> branch, with the orthogonal complements swapped across branches to
    stay unitary):

        Omega = [[V, I - P1], [I - P2, V^dag]],
        V = Pi_{1,R} Pi_{2,L}^dag,  P1 = Pi_{1,R} Pi_{1,R}^dag,
                                    P2 = Pi_{2,L} Pi_{2,L}^dag.

    When Pi_{1,R} = Pi_{2,L} this reduces to the projector-controlled-NOT
    form I2 (x) P + X (x) (I - P).  Extraction: Pi_bar = |0> (x) Pi_{1,L} /
    |0> (x) Pi_{2,R}.  Unitary dimension is 2*max(M1, M2): the smaller
    encoding is padded by an identity direct summand first.
    """
    if e1.N_R != e2.N_L:
        raise ValueError(
            f"inner dimensions differ: {e1.N_R} (right of first) vs "
            f"{e2.N_L} (left of second)")
    M = max(e1.M, e2.M)
    e1 = _pad_encoding(e1, M)
    e2 = _pad_encoding(e2, M)
    V = e1.Pi_R @ e2.Pi_L.conj().T
    P1 = e1.Pi_R @ e1.Pi_R.conj().T
    P2 = e2.Pi_L @ e2.Pi_L.conj().T
    eye = np.eye(M)
    Omega = np.block([[V, eye - P1], [eye - P2, V.conj().T]])
    U_bar = np.kron(np.eye(2), e1.U) @ Omega @ np.kron(np.eye(2), e2.U)
    Pi_L = np.vstack([e1.Pi_L, np.zeros((M, e1.N_L))])
    Pi_R = np.vstack([e2.Pi_R, np.zeros((M, e2.N_R))])
    return ProjectedUnitaryEncoding(U_bar, Pi_L, Pi_R, e1.alpha * e2.alpha)
