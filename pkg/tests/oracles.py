"""Independent verification routines used only by the tests.

These deliberately avoid the library's own eigensolver path: the
characteristic polynomial comes from the Faddeev-LeVerrier trace recursion
and its roots from Durand-Kerner simultaneous iteration (no companion
matrix, no QR).
"""

import numpy as np


def faddeev_leverrier(H):
    """Monic characteristic polynomial coefficients [1, c1, ..., cn].

    M_1 = H, c_1 = -tr(M_1); M_k = H(M_{k-1} + c_{k-1}·I), c_k = -tr(M_k)/k.
    """
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    coeffs = [1.0 + 0.0j]
    M = np.zeros_like(H)
    c = 1.0 + 0.0j
    for k in range(1, n + 1):
        M = H @ (M + c * np.eye(n))
        c = -np.trace(M) / k
        coeffs.append(c)
    return np.array(coeffs)


def durand_kerner_roots(coeffs, max_iter=500, tol=1e-14):
    """All roots of a monic polynomial by Weierstrass simultaneous iteration."""
    coeffs = np.asarray(coeffs, dtype=complex)
    assert coeffs[0] == 1.0, "polynomial must be monic"
    n = len(coeffs) - 1
    if n == 0:
        return np.array([], dtype=complex)
    radius = 1.0 + np.max(np.abs(coeffs[1:]))
    # standard non-real, non-symmetric starting points
    roots = radius * (0.4 + 0.9j) ** np.arange(1, n + 1)

    for _ in range(max_iter):
        values = np.polyval(coeffs, roots)
        diffs = roots[:, None] - roots[None, :]
        np.fill_diagonal(diffs, 1.0)
        denom = np.prod(diffs, axis=1)
        delta = values / denom
        roots = roots - delta
        if np.max(np.abs(delta)) < tol * max(1.0, np.max(np.abs(roots))):
            break
    return roots


def charpoly_eigenvalues(H):
    """Eigenvalues of H via the two routines above."""
    return durand_kerner_roots(faddeev_leverrier(H))


def match_distance(set_a, set_b):
    """Max over a in set_a of the distance to its greedily matched b."""
    a = list(np.asarray(set_a, dtype=complex))
    b = list(np.asarray(set_b, dtype=complex))
    assert len(a) == len(b)
    worst = 0.0
    for value in a:
        dists = [abs(value - other) for other in b]
        k = int(np.argmin(dists))
        worst = max(worst, dists[k])
        b.pop(k)
    return worst
