"""Dense complex linear algebra for the 2x2 and 4x4 matrices used in tomography.

Matrices are plain ``numpy`` complex arrays.  The Hermitian eigensolver is a
cyclic Jacobi sweep, which is exact enough and cheap at these sizes.
"""
from collections import namedtuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPsd

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-9
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

HermitianEigen = namedtuple("HermitianEigen", ["eigenvalues", "eigenvectors"])


def as_matrix(a):
    """Return ``a`` as a square, finite complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _check_same_dim(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")


def kron(a, b):
    """Kronecker product, with ``a`` as the left (outer) factor."""
    a = as_matrix(a)
    b = as_matrix(b)
    da, db = a.shape[0], b.shape[0]
    out = np.empty((da * db, da * db), dtype=complex)
    for p in range(da):
        for r in range(da):
            out[p * db:(p + 1) * db, r * db:(r + 1) * db] = a[p, r] * b
    return out


def matmul(a, b):
    a = as_matrix(a)
    b = as_matrix(b)
    _check_same_dim(a, b)
    return a @ b


def adjoint(a):
    return as_matrix(a).conj().T


def trace(a):
    return complex(np.trace(as_matrix(a)))


def hermitian_deviation(a):
    """Largest elementwise magnitude of ``a - a^dagger``."""
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def hermitian_eig(a, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.  Raises NotHermitian if ``a`` deviates from its
    adjoint by more than ``tol``.
    """
    a = as_matrix(a)
    dev = hermitian_deviation(a)
    if dev > tol:
        raise NotHermitian(f"matrix is not Hermitian (max |A - A^H| = {dev:.3g})")
    n = a.shape[0]
    work = 0.5 * (a + a.conj().T)
    vecs = np.eye(n, dtype=complex)

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.abs(work - np.diag(np.diag(work)))
        if n < 2 or off.max() < JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = work[p, q]
                mag = abs(b)
                if mag < JACOBI_TOL * 1e-3:
                    continue
                # phase on column q makes the (p, q) entry real and positive,
                # then a real Givens rotation annihilates it
                phase = b / mag
                app = work[p, p].real
                aqq = work[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.eye(n, dtype=complex)
                rot[p, p] = c
                rot[q, q] = c * np.conj(phase)
                rot[p, q] = s
                rot[q, p] = -s * np.conj(phase)
                work = rot.conj().T @ work @ rot
                work[p, q] = work[q, p] = 0.0
                vecs = vecs @ rot

    vals = np.diag(work).real.copy()
    order = np.argsort(vals, kind="stable")
    return HermitianEigen(vals[order], vecs[:, order])


def sqrt_psd(a, clamp=PSD_CLAMP):
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-clamp, 0)`` are treated as zero; anything more negative
    raises NotPsd.
    """
    vals, vecs = hermitian_eig(a)
    if vals[0] < -clamp:
        raise NotPsd(f"matrix has negative eigenvalue {vals[0]:.3g}")
    roots = np.sqrt(np.clip(vals, 0.0, None))
    out = (vecs * roots) @ vecs.conj().T
    return 0.5 * (out + out.conj().T)
