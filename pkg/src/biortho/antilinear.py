"""Antilinear operators, symmetry checks, and the spectral C operator.

An antilinear operator is stored as a linear matrix M composed with
entrywise complex conjugation K, acting as v -> M·conj(v). Composing two
such operators gives a plain linear one with matrix M1·conj(M2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditioningError,
    DefectiveSystemError,
    NoAntilinearSymmetryError,
    SignAmbiguityError,
    SingularOperatorError,
)
from .spectral import BiorthogonalSystem, classify_spectrum

SYMMETRY_TOL = 1e-10
PT_NORM_FLOOR = 1e-10


@dataclass(frozen=True)
class AntilinearOp:
    """Linear matrix plus a conjugation flag (true means antilinear)."""

    linear_part: np.ndarray
    conjugates: bool = True

    def __call__(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        return self.linear_part @ (np.conj(v) if self.conjugates else v)

    def compose(self, other: "AntilinearOp") -> "AntilinearOp":
        """self ∘ other; antilinear ∘ antilinear is linear."""
        m2 = np.conj(other.linear_part) if self.conjugates else other.linear_part
        return AntilinearOp(
            linear_part=self.linear_part @ m2,
            conjugates=self.conjugates != other.conjugates,
        )

    def matrix_action(self, X: np.ndarray) -> np.ndarray:
        """Adjoint action on an operator: X -> M·conj(X)·M⁻¹ (antilinear case)."""
        X = np.asarray(X, dtype=complex)
        Xc = np.conj(X) if self.conjugates else X
        return self.linear_part @ Xc @ np.linalg.inv(self.linear_part)


def identity_op(n: int, conjugates: bool = True) -> AntilinearOp:
    return AntilinearOp(np.eye(n, dtype=complex), conjugates=conjugates)


@dataclass(frozen=True)
class SymmetryCheck:
    residual: float
    condition_number: float

    def holds(self, tol: float = SYMMETRY_TOL) -> bool:
        return self.residual < tol


def commutes_with(op: AntilinearOp, H) -> SymmetryCheck:
    """Relative residual of [H, A] = 0 for antilinear A = M∘K.

    Returns ||M·conj(H)·M⁻¹ − H|| / ||H|| (Frobenius) together with the
    condition number of M; raises SingularOperatorError for singular M.
    """
    H = np.asarray(H, dtype=complex)
    M = op.linear_part
    sigma = np.linalg.svd(M, compute_uv=False)
    if sigma[-1] <= len(M) * np.finfo(float).eps * sigma[0]:
        raise SingularOperatorError(
            f"linear part is numerically singular (sigma_min={sigma[-1]:.3e})"
        )
    cond = float(sigma[0] / sigma[-1])
    transformed = op.matrix_action(H)
    h_norm = np.linalg.norm(H)
    residual = float(np.linalg.norm(transformed - H) / (h_norm if h_norm else 1.0))
    return SymmetryCheck(residual=residual, condition_number=cond)


def anticommutator_with(C: np.ndarray, op: AntilinearOp) -> np.ndarray:
    """Linear part of C·A − A·C for antilinear A = M∘K.

    (C·A − A·C)v = (C·M − M·conj(C))·conj(v), so the returned matrix is
    C·M − M·conj(C); its norm measures [C, A].
    """
    C = np.asarray(C, dtype=complex)
    M = op.linear_part
    Cc = np.conj(C) if op.conjugates else C
    return C @ M - M @ Cc


@dataclass(frozen=True)
class RealityReport:
    is_real: bool
    max_imag: float


def is_real(H, tol: float = 1e-12) -> RealityReport:
    """Entrywise reality test: true iff max |Im H_mn| < tol."""
    H = np.asarray(H, dtype=complex)
    max_imag = float(np.max(np.abs(H.imag))) if H.size else 0.0
    return RealityReport(is_real=max_imag < tol, max_imag=max_imag)


def _nullspace(A: np.ndarray, rtol: float = 1e-9):
    """Right nullspace basis of A via SVD (rows of Vh below the cutoff)."""
    _, s, vh = np.linalg.svd(A)
    cutoff = rtol * (s[0] if len(s) and s[0] > 0 else 1.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def find_antilinear_symmetry(H, tol: float = 1e-8,
                             n_random_candidates: int = 64) -> AntilinearOp:
    """Construct an antilinear symmetry A = M∘K of H, if one exists.

    Requires the spectrum to be closed under conjugation within ``tol``
    (otherwise NoAntilinearSymmetryError). M solves M·conj(H) = H·M and is
    picked from the nullspace of X -> H·X − X·conj(H) by a deterministic
    scan that maximizes the smallest singular value of M; a seeded random
    fallback keeps the scan reproducible. If H is entrywise real the
    identity is returned directly.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]

    if is_real(H, tol=1e-14).is_real:
        return identity_op(n)

    evals = np.linalg.eigvals(H)
    scale = max(np.max(np.abs(evals)), 1.0)
    buckets = classify_spectrum(evals, tol_real=tol * scale, tol_cluster=tol * scale)
    if buckets.leftovers:
        raise NoAntilinearSymmetryError(
            "spectrum is not closed under complex conjugation: "
            f"unpaired eigenvalues {buckets.leftovers}"
        )

    # vec (column-major): vec(H X) = (I ⊗ H) vec(X), vec(X B) = (Bᵀ ⊗ I) vec(X)
    eye = np.eye(n, dtype=complex)
    A = np.kron(eye, H) - np.kron(np.conj(H).T, eye)
    basis = _nullspace(A)
    if basis.shape[1] == 0:
        raise NoAntilinearSymmetryError(
            "intertwiner equation M·conj(H) = H·M has no nonzero solution"
        )
    mats = [basis[:, k].reshape(n, n, order="F") for k in range(basis.shape[1])]

    candidates = [sum(mats)]
    candidates.extend(mats)
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            candidates.append(mats[a] + mats[b])
            candidates.append(mats[a] - mats[b])
    rng = np.random.default_rng(0)
    for _ in range(n_random_candidates):
        coeff = rng.standard_normal(len(mats)) + 1j * rng.standard_normal(len(mats))
        candidates.append(sum(c * m for c, m in zip(coeff, mats)))

    best, best_sigma_min = None, -1.0
    for cand in candidates:
        norm = np.linalg.norm(cand)
        if norm == 0.0:
            continue
        cand = cand / norm
        sigma_min = float(np.linalg.svd(cand, compute_uv=False)[-1])
        if sigma_min > best_sigma_min:
            best, best_sigma_min = cand, sigma_min

    if best is None or best_sigma_min < 1e-8:
        raise ConditioningError(
            "no well-conditioned invertible intertwiner found "
            f"(best sigma_min = {best_sigma_min:.3e})"
        )

    op = AntilinearOp(best)
    check = commutes_with(op, H)
    if check.residual > tol:
        raise ConditioningError(
            f"intertwiner residual {check.residual:.3e} exceeds tol {tol:.1e}"
        )
    return op


def build_c_operator(system: BiorthogonalSystem, pt: AntilinearOp,
                     tol: float = 1e-8,
                     tol_real: float = 1e-8) -> np.ndarray:
    """Spectral C operator: C = Σ_n c_n |R_n><L_pair(n)|.

    Real eigenvalues take c_n = sign of the (phase-invariant, bilinear) PT
    norm (PT·R_n)ᵀ·R_n. Members of a complex conjugate pair take c = +1 for
    Im E > 0 and c = −1 for the partner: that is the unique
    Hamiltonian-commuting involution on the pair sector beyond ±identity,
    and it reproduces the broken-phase non-commutation of C with PT.
    """
    if not system.is_diagonalizable:
        raise DefectiveSystemError(
            "C operator construction requires a diagonalizable system; "
            f"defective indices {system.defective_indices}"
        )
    evals = system.eigenvalues
    n = len(evals)
    scale = max(np.max(np.abs(evals)), 1.0)

    signs = np.zeros(n)
    real_mask = np.abs(evals.imag) < tol_real * scale
    for i in np.nonzero(real_mask)[0]:
        r = system.right_vectors[:, i]
        pt_norm = pt(r).T @ r        # bilinear: invariant under r -> e^{ia} r
        if abs(pt_norm) < PT_NORM_FLOOR * np.vdot(r, r).real:
            raise SignAmbiguityError(
                f"PT norm of eigenvalue {evals[i]:.6g} vanishes within tolerance"
            )
        signs[i] = np.sign(pt_norm.real)

    complex_idx = np.nonzero(~real_mask)[0]
    for i in complex_idx:
        signs[i] = 1.0 if evals[i].imag > 0 else -1.0

    left = system.paired_left_matrix()
    C = (system.right_vectors * signs) @ left.conj().T

    if complex_idx.size == 0:
        # real-spectrum regime: the involution and commutation promises
        # must hold at the requested tolerance
        c_scale = max(np.linalg.norm(C), 1.0)
        involution = np.linalg.norm(C @ C - np.eye(n)) / c_scale
        H = system.matrix
        commutation = np.linalg.norm(C @ H - H @ C) / (c_scale * max(scale, 1.0))
        if max(involution, commutation) > tol:
            raise ConditioningError(
                f"C operator verification failed: |C^2-1|={involution:.3e}, "
                f"|[C,H]|={commutation:.3e} exceed tol {tol:.1e}"
            )
    return C
