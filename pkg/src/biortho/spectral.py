"""Biorthogonal eigendecomposition and spectrum classification.

Right eigenvectors solve H|R_i> = E_i|R_i>. Left vectors are eigenvectors of
the conjugate transpose, H†|L_j> = E_j|L_j>, and carry their own H†
eigenvalue as label. The pairing i -> j matches E_j = conj(E_i); under that
labeling <L_j(t)|R_i(t)> picks up the phase exp(i(conj(E_j) − E_i)t), so a
pairing overlap is exactly the time-independent scalar product, and
<L_j|R_i> = 0 whenever conj(E_j) != E_i.

The dense solve is delegated to LAPACK's standard pipeline (balancing,
Hessenberg reduction, implicitly shifted QR, back-transformed eigenvectors)
via numpy.linalg.eig; pairing, normalization and defect detection live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError

DEFAULT_TOL = 1e-9
DEFAULT_TOL_REAL = 1e-8
DEFAULT_TOL_CLUSTER = 1e-8
# pairing overlaps below this (for unit vectors) mark the index defective
OVERLAP_FLOOR = 1e-10


def _sort_key(values, conjugate=False):
    imag = -values.imag if conjugate else values.imag
    return np.lexsort((imag, values.real))


@dataclass
class BiorthogonalSystem:
    """Paired right/left eigensystem of a square complex matrix."""

    matrix: np.ndarray
    eigenvalues: np.ndarray          # E_i, sorted by (Re, Im)
    right_vectors: np.ndarray        # columns |R_i>, unit norm before scaling
    left_eigenvalues: np.ndarray     # E_j of H†, sorted so pairing is near-diagonal
    left_vectors: np.ndarray         # columns |L_j>, scaled so <L_pair(i)|R_i> = 1
    pairing: np.ndarray              # i -> j with E_j ~ conj(E_i)
    pairing_residual: float          # max_i |left_eigenvalues[pair(i)] - conj(E_i)|
    right_residual: float            # max_i ||H R_i - E_i R_i||
    left_residual: float             # max_j ||H† L_j - E_j L_j||
    defective_indices: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_diagonalizable(self) -> bool:
        return not self.defective_indices

    def left_for(self, i: int) -> np.ndarray:
        """Left vector paired with right index ``i``."""
        return self.left_vectors[:, self.pairing[i]]

    def paired_left_matrix(self) -> np.ndarray:
        """Columns L_pair(0), L_pair(1), ... aligned with the right columns."""
        return self.left_vectors[:, self.pairing]

    def overlap_matrix(self) -> np.ndarray:
        """G with G[j, i] = <L_j|R_i>."""
        return self.left_vectors.conj().T @ self.right_vectors

    def reconstruct(self) -> np.ndarray:
        """Sum_i E_i |R_i><L_pair(i)| (equals H when diagonalizable)."""
        left = self.paired_left_matrix()
        return (self.right_vectors * self.eigenvalues) @ left.conj().T


def eigendecompose(H, tol: float = DEFAULT_TOL) -> BiorthogonalSystem:
    """Full biorthogonal decomposition of a square complex matrix.

    Raises ConvergenceError if the QR iteration fails or residuals exceed
    tol·||H||; near-defective pairings are flagged, not fatal.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if H.shape[0] < 1:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(H)):
        raise ValueError("matrix has non-finite entries")

    try:
        evals, rvecs = np.linalg.eig(H)
        levals, lvecs = np.linalg.eig(H.conj().T)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc

    # deterministic order: rights by (Re, Im); lefts by (Re, -Im) so the
    # conjugate partner of right i usually sits near left i
    r_order = _sort_key(evals)
    l_order = _sort_key(levals, conjugate=True)
    evals, rvecs = evals[r_order], rvecs[:, r_order]
    levals, lvecs = levals[l_order], lvecs[:, l_order]

    n = H.shape[0]
    # greedy conjugate matching; positional order is only a heuristic since
    # the two LAPACK runs carry independent rounding noise
    cost = np.abs(levals[None, :] - np.conj(evals)[:, None])
    pairing = np.full(n, -1, dtype=int)
    used = np.zeros(n, dtype=bool)
    for i in range(n):
        row = np.where(used, np.inf, cost[i])
        j = int(np.argmin(row))
        pairing[i] = j
        used[j] = True
    pairing_residual = float(np.max(cost[np.arange(n), pairing])) if n else 0.0

    scale = max(np.linalg.norm(H, 2), 1.0)
    right_res = float(np.max(np.linalg.norm(H @ rvecs - rvecs * evals, axis=0)))
    left_res = float(np.max(np.linalg.norm(H.conj().T @ lvecs - lvecs * levals, axis=0)))
    if max(right_res, left_res) > tol * scale:
        raise ConvergenceError(
            f"eigenvector residual {max(right_res, left_res):.3e} exceeds "
            f"{tol:.1e}·||H||",
            partial=(evals, rvecs, levals, lvecs),
        )

    defective = []
    for i in range(n):
        j = pairing[i]
        overlap = np.vdot(lvecs[:, j], rvecs[:, i])
        if abs(overlap) < OVERLAP_FLOOR:
            defective.append(i)
        else:
            lvecs[:, j] /= np.conj(overlap)

    if not defective:
        _rebiorthogonalize_clusters(evals, rvecs, lvecs, pairing, defective)

    return BiorthogonalSystem(
        matrix=H,
        eigenvalues=evals,
        right_vectors=rvecs,
        left_eigenvalues=levals,
        left_vectors=lvecs,
        pairing=pairing,
        pairing_residual=pairing_residual,
        right_residual=right_res,
        left_residual=left_res,
        defective_indices=defective,
    )


def _rebiorthogonalize_clusters(evals, rvecs, lvecs, pairing, defective,
                                ctol: float = 1e-8):
    """Fix cross-overlaps inside (near-)degenerate eigenvalue clusters.

    Within a cluster of equal eigenvalues the two LAPACK runs may return
    bases that are not mutually biorthogonal; solving the small overlap
    system restores <L_pair(j)|R_i> = delta_ij there.
    """
    n = len(evals)
    scale = max(np.max(np.abs(evals)), 1.0)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(evals[stop] - evals[stop - 1]) < ctol * scale:
            stop += 1
        if stop - start > 1:
            idx = np.arange(start, stop)
            left_idx = pairing[idx]
            O = lvecs[:, left_idx].conj().T @ rvecs[:, idx]
            # guard: only adjust well-conditioned clusters
            if np.linalg.cond(O) < 1e8:
                lvecs[:, left_idx] = lvecs[:, left_idx] @ np.linalg.inv(O).conj().T
            else:
                defective.extend(int(k) for k in idx)
        start = stop


@dataclass
class SpectrumClassification:
    """Partition of eigenvalues into real singles, conjugate pairs,
    leftovers, and (optionally) defective clusters."""

    real_singles: list
    conjugate_pairs: list            # (E, conj-partner), Im > 0 first
    leftovers: list                  # unpaired complex beyond tol_cluster
    defective_clusters: list         # (eigenvalue, alg. mult., geom. mult.)
    tol_real: float
    tol_cluster: float

    @property
    def has_warning(self) -> bool:
        return bool(self.leftovers)

    @property
    def count(self) -> int:
        return (len(self.real_singles) + 2 * len(self.conjugate_pairs)
                + len(self.leftovers))


def classify_spectrum(eigenvalues, tol_real: float = DEFAULT_TOL_REAL,
                      tol_cluster: float = DEFAULT_TOL_CLUSTER,
                      defective_clusters=None) -> SpectrumClassification:
    """Bucket eigenvalues as real / conjugate pairs / leftovers.

    Pairs are matched greedily by minimal |E - conj(E')|; an unpaired
    complex eigenvalue beyond tol_cluster lands in ``leftovers``, which
    signals a conjugation-asymmetric spectrum (or too tight a tolerance).
    """
    evs = np.asarray(eigenvalues, dtype=complex).ravel()
    if not np.all(np.isfinite(evs)):
        raise ValueError("eigenvalues must be finite")
    order = _sort_key(evs)
    evs = evs[order]

    real_mask = np.abs(evs.imag) < tol_real
    real_singles = sorted(evs[real_mask].real.tolist())

    complex_evs = evs[~real_mask]
    pairs = []
    leftovers = []
    k = len(complex_evs)
    if k == 1:
        leftovers.append(complex(complex_evs[0]))
    elif k > 1:
        # |E_a - conj(E_b)| is already symmetric in (a, b)
        dist = np.abs(complex_evs[:, None] - np.conj(complex_evs)[None, :])
        np.fill_diagonal(dist, np.inf)
        alive = np.ones(k, dtype=bool)
        while alive.sum() >= 2:
            a, b = np.unravel_index(np.argmin(dist), dist.shape)
            if dist[a, b] >= tol_cluster:
                break
            ea, eb = complex(complex_evs[a]), complex(complex_evs[b])
            plus, minus = (ea, eb) if ea.imag >= eb.imag else (eb, ea)
            pairs.append((plus, minus))
            for idx in (a, b):
                alive[idx] = False
                dist[idx, :] = np.inf
                dist[:, idx] = np.inf
        leftovers.extend(complex(e) for e in complex_evs[alive])
    pairs.sort(key=lambda p: (p[0].real, p[0].imag))

    return SpectrumClassification(
        real_singles=real_singles,
        conjugate_pairs=pairs,
        leftovers=sorted(leftovers, key=lambda e: (e.real, e.imag)),
        defective_clusters=list(defective_clusters or []),
        tol_real=tol_real,
        tol_cluster=tol_cluster,
    )


@dataclass
class DefectReport:
    eigenvalue: complex
    algebraic_multiplicity: int
    geometric_multiplicity: int
    min_singular_value: float

    @property
    def is_defective(self) -> bool:
        return self.geometric_multiplicity < self.algebraic_multiplicity


def defect_report(H, eigenvalue, tol: float = 1e-10,
                  tol_cluster: float = 1e-6) -> DefectReport:
    """Algebraic/geometric multiplicity of ``eigenvalue`` in H.

    Geometric multiplicity is n − rank(H − E·I), with rank decided by
    singular values above tol·||H||; algebraic multiplicity counts
    eigenvalues within tol_cluster·max(1, |E|) of E.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    E = complex(eigenvalue)
    scale = max(np.linalg.norm(H, 2), 1.0)

    sigma = np.linalg.svd(H - E * np.eye(n), compute_uv=False)
    rank = int(np.sum(sigma > tol * scale))
    geometric = n - rank

    evals = np.linalg.eigvals(H)
    cluster_radius = tol_cluster * max(1.0, abs(E))
    algebraic = int(np.sum(np.abs(evals - E) < cluster_radius))

    return DefectReport(
        eigenvalue=E,
        algebraic_multiplicity=algebraic,
        geometric_multiplicity=geometric,
        min_singular_value=float(sigma[-1]),
    )
