"""Dense complex linear algebra shared by every other module.

Joint system-environment operators always put the system on the left:
the joint index is ``system_index * dE + environment_index``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotHermitianError, NotPSDError

HERMITIAN_TOL = 1e-10
PSD_FLOOR = -1e-10


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def ket(index: int, dim: int) -> np.ndarray:
    """Computational basis column vector."""
    v = np.zeros((dim, 1), dtype=complex)
    v[index, 0] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = as_matrix(v)
    return v @ v.conj().T


def dag(m) -> np.ndarray:
    return np.asarray(m).conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product with ``a`` as the slow (left) index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_env(m, ds: int, de: int) -> np.ndarray:
    """Trace out the right (environment) factor of a ``(ds*de)``-square matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (ds * de, ds * de):
        raise DimensionError("bad joint dimension")
    return np.einsum("ieje->ij", m.reshape(ds, de, ds, de))


def partial_trace_sys(m, ds: int, de: int) -> np.ndarray:
    """Trace out the left (system) factor."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (ds * de, ds * de):
        raise DimensionError("bad joint dimension")
    return np.einsum("sesf->ef", m.reshape(ds, de, ds, de))


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m - m.conj().T))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermiticity_residual(m) <= tol


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix.

    The input is symmetrized before diagonalizing so that round-off
    asymmetry below ``tol`` does not leak into the eigenvectors.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1] or hermiticity_residual(m) > tol:
        raise NotHermitianError("not Hermitian")
    h = 0.5 * (m + m.conj().T)
    values, vectors = np.linalg.eigh(h)
    return values, vectors


def matrix_sqrt_psd(m, floor: float = PSD_FLOOR) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in ``[floor, 0)`` are clamped to zero."""
    values, vectors = hermitian_eig(m)
    if values[0] < floor:
        raise NotPSDError(f"not PSD (min eigenvalue {values[0]:.3e})")
    root = np.sqrt(np.clip(values, 0.0, None))
    r = (vectors * root) @ vectors.conj().T
    return 0.5 * (r + r.conj().T)


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def is_unitary(u, tol: float | None = None) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    if tol is None:
        tol = 1e-12 * u.shape[0]
    return unitarity_residual(u) <= tol


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Ginibre matrix with unit-variance entries."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from QR of a Ginibre matrix.

    Each column of ``Q`` is multiplied by the phase of the matching
    diagonal entry of ``R``; without that correction the distribution
    is not Haar.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    q, r = np.linalg.qr(ginibre(dim, dim, rng))
    d = np.diag(r)
    return q * (d / np.abs(d))


def swap_unitary(d: int) -> np.ndarray:
    """SWAP on ``C^d (x) C^d``."""
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank generic state ``G G^dag / Tr(G G^dag)``."""
    g = ginibre(dim, dim, rng)
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(dim, dim, rng)
    return 0.5 * (g + g.conj().T)
