"""Time evolution, overlap traces, and Euclidean reality checks.

Right states evolve with exp(−iHt); left states pick up exp(iHt) on the
right of the bra, so every pairing overlap <L_pair(i)|R_i> is constant in
time. Overlap traces are computed both literally (matrix exponential
products) and from the closed-form phase exp(i(conj(E_j) − E_i)t); the two
must agree on the numerically safe time range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DefectiveSystemError, PropagatorRangeError
from .spectral import BiorthogonalSystem, eigendecompose

# np.exp overflows just above 709; keep headroom
MAX_EXPONENT = 700.0
# the literal product exp(iHt)·exp(−iHt) cancels e^{+gt} against e^{-gt}
# only to a relative eps·e^{2gt}; past this exponent that noise would
# exceed the 1e-9 dual-method gate, so the closed form takes over
LITERAL_EXPONENT_BOUND = 8.0
# overlap entries below this (relative) level are roundoff seeds of exact
# zeros; propagating them through a growing closed-form phase would
# manufacture fake drift
OVERLAP_NOISE_FLOOR = 1e-13
DEFAULT_N_TIMES = 101


def expm_series(A: np.ndarray, max_terms: int = 64) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring on the Taylor series."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    norm = np.linalg.norm(A, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    B = A / (2.0 ** squarings)

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, max_terms + 1):
        term = term @ B / k
        result = result + term
        if np.linalg.norm(term, 1) <= np.finfo(float).eps * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def _growth_rate(H: np.ndarray) -> float:
    """Largest |Im E| over the spectrum (growth/decay rate of exp(−iHt))."""
    evals = np.linalg.eigvals(H)
    return float(np.max(np.abs(evals.imag))) if evals.size else 0.0


def _check_range(rate: float, t: float, what: str):
    if rate * abs(t) > MAX_EXPONENT:
        raise PropagatorRangeError(
            f"{what} at t={t:g} overflows (growth rate {rate:.3g}); "
            f"safe |t| <= {MAX_EXPONENT / rate:.6g}",
            safe_time=MAX_EXPONENT / rate,
        )


def propagator(H, t: float, method: str = "auto",
               system: BiorthogonalSystem | None = None) -> np.ndarray:
    """Evolution operator exp(−iHt).

    method "eigen" uses the pairing-normalized spectral sum (requires a
    diagonalizable H), "series" uses scaling-and-squaring, "auto" prefers
    the spectral route and falls back to the series for defective input.
    """
    H = np.asarray(H, dtype=complex)
    if method not in ("auto", "eigen", "series"):
        raise ValueError(f"unknown method {method!r}")
    if system is not None:
        rate = float(np.max(np.abs(system.eigenvalues.imag)))
    else:
        rate = _growth_rate(H)
    _check_range(rate, t, "propagator")

    if method == "series":
        return expm_series(-1j * t * H)

    if system is None:
        system = eigendecompose(H)
    if not system.is_diagonalizable:
        if method == "eigen":
            raise DefectiveSystemError(
                "spectral propagator requires a diagonalizable matrix"
            )
        return expm_series(-1j * t * H)

    phases = np.exp(-1j * system.eigenvalues * t)
    left = system.paired_left_matrix()
    return (system.right_vectors * phases) @ left.conj().T


@dataclass
class OverlapTrace:
    """G[j, i](t) = <L_j(t)|R_i(t)> on a time grid, with drift statistics."""

    times: np.ndarray
    overlaps: np.ndarray             # shape (n_times, n, n)
    right_eigenvalues: np.ndarray    # E_i labels (columns)
    left_eigenvalues: np.ndarray     # E_j labels (rows)
    drift: np.ndarray                # max_t |G(t) - G(0)| per (j, i)
    method_agreement: float          # max |literal - closed form| on safe range
    literal_time_bound: float        # literal products used for |t| below this

    @property
    def max_drift(self) -> float:
        return float(np.max(self.drift))

    def pair_labels(self, j: int, i: int):
        return (complex(self.left_eigenvalues[j]), complex(self.right_eigenvalues[i]))


def overlap_trace(system: BiorthogonalSystem, times=None,
                  t_max: float = 10.0, n_times: int = DEFAULT_N_TIMES) -> OverlapTrace:
    """Track every left-right overlap over a time grid.

    Each entry is computed two ways: from the closed-form phase
    G(0)·exp(i(conj(E_j) − E_i)t), which is what gets recorded (it never
    overflows), and literally as <L_j(0)|exp(iHt)·exp(−iHt)|R_i(0)> with
    series exponentials for the times where that product's cancellation
    noise eps·e^{2gt} stays below the 1e-9 agreement gate.
    """
    if not system.is_diagonalizable:
        raise DefectiveSystemError(
            "overlap traces require a diagonalizable system; "
            f"defective indices {system.defective_indices}"
        )
    if times is None:
        times = np.linspace(0.0, t_max, n_times)
    times = np.asarray(times, dtype=float)

    H = system.matrix
    L = system.left_vectors
    R = system.right_vectors
    G0 = system.overlap_matrix()
    # entries this far below the pairing overlaps are noise on exact zeros
    floor = OVERLAP_NOISE_FLOOR * float(np.max(np.abs(G0)))
    G0 = np.where(np.abs(G0) < floor, 0.0, G0)

    rate = float(np.max(np.abs(system.eigenvalues.imag)))
    literal_bound = np.inf if rate == 0.0 else LITERAL_EXPONENT_BOUND / rate

    # closed form: phase[j, i](t) = exp(i(conj(E_j) - E_i) t); zero seeds
    # stay zero regardless of the phase's growth, and surviving growing
    # entries are capped at the overflow bound instead of turning inf
    exponent = 1j * (np.conj(system.left_eigenvalues)[:, None]
                     - system.eigenvalues[None, :])
    exponent = np.where(G0 == 0.0, 0.0, exponent)
    overlaps = np.empty((len(times), *G0.shape), dtype=complex)
    agreement = 0.0
    for k, t in enumerate(times):
        expo = exponent * t
        expo = np.minimum(expo.real, MAX_EXPONENT) + 1j * expo.imag
        overlaps[k] = G0 * np.exp(expo)
        if abs(t) <= literal_bound:
            forward = expm_series(1j * t * H)
            backward = expm_series(-1j * t * H)
            literal = L.conj().T @ forward @ backward @ R
            agreement = max(agreement, float(np.max(np.abs(literal - overlaps[k]))))

    drift = np.max(np.abs(overlaps - overlaps[0]), axis=0)
    return OverlapTrace(
        times=times,
        overlaps=overlaps,
        right_eigenvalues=system.eigenvalues.copy(),
        left_eigenvalues=system.left_eigenvalues.copy(),
        drift=drift,
        method_agreement=agreement,
        literal_time_bound=float(literal_bound),
    )


@dataclass
class SelectionRuleReport:
    violations: list                 # (j, i, E_j, E_i, |G[j, i]|)
    max_forbidden_overlap: float
    tol: float
    tol_cluster: float

    @property
    def ok(self) -> bool:
        return not self.violations


def selection_rule_check(system: BiorthogonalSystem, tol: float = 1e-8,
                         tol_cluster: float = 1e-8) -> SelectionRuleReport:
    """Check that overlaps vanish wherever they must.

    A nonzero <L_j|R_i> is allowed only when Re E_i = Re E_j and
    Im E_i = −Im E_j (within the clustering tolerance); all other entries
    are reported as violations when they exceed ``tol``.
    """
    if not system.is_diagonalizable:
        raise DefectiveSystemError(
            "selection rule check requires a diagonalizable system"
        )
    G = system.overlap_matrix()
    Ei = system.eigenvalues
    Ej = system.left_eigenvalues
    scale = max(float(np.max(np.abs(Ei))), 1.0)

    allowed = (
        (np.abs(Ej.real[:, None] - Ei.real[None, :]) < tol_cluster * scale)
        & (np.abs(Ej.imag[:, None] + Ei.imag[None, :]) < tol_cluster * scale)
    )
    forbidden_mag = np.where(allowed, 0.0, np.abs(G))
    violations = [
        (int(j), int(i), complex(Ej[j]), complex(Ei[i]), float(forbidden_mag[j, i]))
        for j, i in zip(*np.nonzero(forbidden_mag > tol))
    ]
    return SelectionRuleReport(
        violations=violations,
        max_forbidden_overlap=float(forbidden_mag.max()) if forbidden_mag.size else 0.0,
        tol=tol,
        tol_cluster=tol_cluster,
    )


@dataclass
class EuclideanReality:
    is_real: bool
    max_imag: float
    trace_imag: float
    tau: float

    def trace_is_real(self, tol: float = 1e-9) -> bool:
        return abs(self.trace_imag) < tol


def euclidean_reality(H, tau: float, tol: float = 1e-10) -> EuclideanReality:
    """Entrywise and trace reality of the Euclidean propagator exp(−H·tau).

    Entrywise reality holds whenever H itself is real; for a Hamiltonian
    with conjugate-paired spectrum only the trace need be real, so both
    are reported.
    """
    H = np.asarray(H, dtype=complex)
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    evals = np.linalg.eigvals(H)
    decay = float(np.max(-evals.real)) if evals.size else 0.0
    if decay * tau > MAX_EXPONENT:
        raise PropagatorRangeError(
            f"exp(−H·tau) overflows at tau={tau:g}; safe tau <= "
            f"{MAX_EXPONENT / decay:.6g}",
            safe_time=MAX_EXPONENT / decay,
        )
    K = expm_series(-tau * H)
    max_imag = float(np.max(np.abs(K.imag)))
    return EuclideanReality(
        is_real=max_imag < tol,
        max_imag=max_imag,
        trace_imag=float(abs(np.trace(K).imag)),
        tau=tau,
    )
