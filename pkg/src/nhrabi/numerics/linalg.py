"""Dense eigenvalue kernels (LAPACK via numpy)."""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, ShapeError


def _finite_or_raise(values: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise ConvergenceError("eigensolver produced non-finite eigenvalues")
    return values


def eig_complex(m) -> np.ndarray:
    """All eigenvalues of a general square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ShapeError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(a)):
        raise ShapeError("matrix has non-finite entries")
    try:
        return _finite_or_raise(np.linalg.eigvals(a))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc


def eig_tridiagonal_real(diag: np.ndarray, upper: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Eigenvalues of a real (generally non-symmetric) tridiagonal matrix.

    Complex eigenvalues come out as exact conjugate pairs.
    """
    n = diag.shape[0]
    m = np.zeros((n, n))
    idx = np.arange(n)
    m[idx, idx] = diag
    m[idx[:-1], idx[1:]] = upper
    m[idx[1:], idx[:-1]] = lower
    try:
        ev = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return _finite_or_raise(ev.astype(complex))


def eig_tridiagonal_symmetric(diag: np.ndarray, off: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian tridiagonal matrix (``off`` may be complex)."""
    n = diag.shape[0]
    m = np.zeros((n, n), dtype=np.result_type(off, float))
    idx = np.arange(n)
    m[idx, idx] = diag
    m[idx[:-1], idx[1:]] = off
    m[idx[1:], idx[:-1]] = np.conj(off)
    try:
        ev = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(str(exc)) from exc
    return _finite_or_raise(ev.astype(complex))
