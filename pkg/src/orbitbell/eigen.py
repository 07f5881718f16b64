"""Dense symmetric eigensolver: cyclic Jacobi rotations.

Sized for the operators this package produces (dimension <= 49).  The
sweep order and the post-processing (descending eigenvalue sort, sign fixed
by the largest-magnitude component) are deterministic so downstream reports
are byte-identical across runs.
"""

from __future__ import annotations

import numpy as np

OFFDIAG_TOLERANCE = 1e-12
_MAX_SWEEPS = 100


class EigensolverError(RuntimeError):
    """The rotation sweep failed to reach the convergence threshold."""


def _offdiagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix: np.ndarray, tol: float = OFFDIAG_TOLERANCE) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors (columns).

    Convergence: the off-diagonal Frobenius norm drops below ``tol`` or
    below the relative floor 1e-14 * ||A||_F, whichever is larger.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if float(np.max(np.abs(a - a.T))) > 1e-12 * max(1.0, float(np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    threshold = max(tol, 1e-14 * float(np.linalg.norm(a)))

    if n == 1:
        return np.array([a[0, 0]]), np.array([[1.0]])

    for _ in range(_MAX_SWEEPS):
        if _offdiagonal_norm(a) <= threshold:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold / (n * n):
                    continue
                rotated = True
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p, rot_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * rot_p - s * rot_q
                a[:, q] = s * rot_p + c * rot_q
                rot_p, rot_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rot_p - s * rot_q
                a[q, :] = s * rot_p + c * rot_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
        if not rotated:
            break
    else:
        raise EigensolverError(
            f"Jacobi sweep did not converge: off-diagonal norm "
            f"{_offdiagonal_norm(a):.3e} > {threshold:.3e}"
        )
    if _offdiagonal_norm(a) > threshold:
        raise EigensolverError(
            f"Jacobi sweep stalled at off-diagonal norm {_offdiagonal_norm(a):.3e}"
        )

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    vectors = v[:, order]
    for col in range(n):
        lead = int(np.argmax(np.abs(vectors[:, col])))
        if vectors[lead, col] < 0:
            vectors[:, col] = -vectors[:, col]
    return eigenvalues, vectors
