"""Small symmetric solves in extended precision.

Moment matrices are tiny (order <= ~8) but can be brutally ill-conditioned:
a Hankel Gram matrix of a saturated Krylov chain is rank-deficient by
construction.  LAPACK has no longdouble path, so a cyclic Jacobi
eigendecomposition is rolled by hand; on x86-64 this buys roughly three
extra decimal digits, which the tightest root tolerances need.
"""

from __future__ import annotations

import numpy as np


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Works for any real float dtype, longdouble included.  Returns
    (eigenvalues, eigenvectors) with columns as eigenvectors, unsorted.
    """
    a = np.array(matrix, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    dtype = a.dtype
    eps = np.finfo(dtype).eps
    vectors = np.eye(n, dtype=dtype)
    one = dtype.type(1.0)
    for _ in range(max_sweeps):
        off = max(
            (abs(a[p, q]) for p in range(n - 1) for q in range(p + 1, n)),
            default=dtype.type(0.0),
        )
        scale = max((abs(a[i, i]) for i in range(n)), default=one)
        if off <= eps * max(scale, one):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = one
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + one))
                c = one / np.sqrt(t * t + one)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * vectors[:, p] - s * vectors[:, q]
                rot_q = s * vectors[:, p] + c * vectors[:, q]
                vectors[:, p], vectors[:, q] = rot_p, rot_q
    return np.diagonal(a).copy(), vectors


def symmetric_spectrum(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Longdouble Jacobi spectrum of a real symmetric matrix."""
    return jacobi_eigh(np.array(matrix, dtype=np.longdouble))


def spectral_condition(eigenvalues: np.ndarray) -> float:
    """max|lambda| / min|lambda|; inf for a singular (or empty) spectrum."""
    magnitudes = np.abs(np.asarray(eigenvalues, dtype=np.longdouble))
    if magnitudes.size == 0 or float(magnitudes.min()) == 0.0:
        return float("inf")
    return float(magnitudes.max() / magnitudes.min())


def spectral_solve(
    eigenvalues: np.ndarray,
    eigenvectors: np.ndarray,
    rhs: np.ndarray,
    rcond: float = 0.0,
    absolute_cutoff: float = 0.0,
) -> np.ndarray:
    """Apply the (pseudo)inverse from a Jacobi spectrum to a vector.

    Eigenvalues with |lambda| <= max(rcond * max|lambda|, absolute_cutoff)
    are dropped; the spectral condition number alone cannot flag a matrix
    whose every eigenvalue is tiny, hence the absolute knob.  Returns a
    longdouble vector.
    """
    w = np.asarray(eigenvalues, dtype=np.longdouble)
    v = np.asarray(eigenvectors, dtype=np.longdouble)
    b = np.asarray(rhs, dtype=np.longdouble)
    magnitudes = np.abs(w)
    wmax = magnitudes.max() if w.size else np.longdouble(0.0)
    keep = magnitudes > max(rcond * wmax, np.longdouble(absolute_cutoff))
    inverse = np.where(keep, np.longdouble(1.0), np.longdouble(0.0)) / np.where(keep, w, np.longdouble(1.0))
    return v @ (inverse * (v.T @ b))
