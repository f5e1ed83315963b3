"""Linear maps on system operators as Kraus sets and Choi matrices.

Choi convention (used everywhere in the package)::

    C = sum_ij |i><j| (x) Phi[|i><j|]

with the input factor on the left, so ``C[i*d_out + m, j*d_out + n] = Phi[|i><j|][m, n]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import operators as ops
from .errors import DimensionError, NotCPError, NotHermitianError

RANK_RTOL = 1e-12


@dataclass(frozen=True)
class KrausSet:
    dim_in: int
    dim_out: int
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not mats:
            raise ValueError("Kraus set must be non-empty")
        for k in mats:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionError(f"Kraus operator shape {k.shape} != {(self.dim_out, self.dim_in)}")
        object.__setattr__(self, "operators", mats)

    @classmethod
    def from_operators(cls, operators: Sequence) -> "KrausSet":
        mats = [np.asarray(k, dtype=complex) for k in operators]
        dout, din = mats[0].shape
        return cls(din, dout, tuple(mats))

    def __len__(self) -> int:
        return len(self.operators)

    @property
    def completeness_residual(self) -> float:
        s = sum(k.conj().T @ k for k in self.operators)
        return float(np.linalg.norm(s - np.eye(self.dim_in)))


@dataclass(frozen=True)
class ChoiMatrix:
    dim_in: int
    dim_out: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.dim_in * self.dim_out
        if m.shape != (n, n):
            raise DimensionError(f"Choi matrix must be {n}x{n}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def hermiticity_residual(self) -> float:
        return ops.hermiticity_residual(self.matrix)

    def eigenvalues(self) -> np.ndarray:
        m = self.matrix
        return np.linalg.eigvalsh(0.5 * (m + m.conj().T))

    def output_trace_residual(self) -> float:
        """``|| Tr_out C - 1_in ||_F``; zero iff the map is trace preserving."""
        tr_out = ops.partial_trace_env(self.matrix, self.dim_in, self.dim_out)
        return float(np.linalg.norm(tr_out - np.eye(self.dim_in)))


def choi_from_map(fn: Callable[[np.ndarray], np.ndarray], dim_in: int, dim_out: int) -> ChoiMatrix:
    """Choi matrix of a linear map given as a callable, by feeding it matrix units."""
    c = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
    for i in range(dim_in):
        for j in range(dim_in):
            unit = np.zeros((dim_in, dim_in), dtype=complex)
            unit[i, j] = 1.0
            out = np.asarray(fn(unit))
            if out.shape != (dim_out, dim_out):
                raise DimensionError(f"map output shape {out.shape} != {(dim_out, dim_out)}")
            c[i * dim_out:(i + 1) * dim_out, j * dim_out:(j + 1) * dim_out] = out
    return ChoiMatrix(dim_in, dim_out, c)


def choi_from_kraus(k: KrausSet) -> ChoiMatrix:
    # |K>> has entry (i*d_out + m) = K[m, i]
    vecs = np.stack([op.T.ravel() for op in k.operators], axis=1)
    return ChoiMatrix(k.dim_in, k.dim_out, vecs @ vecs.conj().T)


def kraus_from_choi(c: ChoiMatrix, tol: float = 1e-10) -> KrausSet:
    """Kraus operators from the eigendecomposition of a PSD Choi matrix.

    Eigenvalues below ``1e-12`` times the leading one are treated as zero.
    """
    values, vectors = ops.hermitian_eig(c.matrix)
    if values[0] < -tol:
        raise NotCPError(f"not CP (min eigenvalue {values[0]:.3e})")
    cutoff = RANK_RTOL * max(values[-1], 0.0)
    kraus = []
    for lam, v in zip(values, vectors.T):
        if lam > cutoff:
            kraus.append(np.sqrt(lam) * v.reshape(c.dim_in, c.dim_out).T)
    if not kraus:
        kraus.append(np.zeros((c.dim_out, c.dim_in), dtype=complex))
    return KrausSet(c.dim_in, c.dim_out, tuple(kraus))


def apply_kraus(k: KrausSet, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (k.dim_in, k.dim_in):
        raise DimensionError(f"input shape {rho.shape} does not match dim_in={k.dim_in}")
    return sum(op @ rho @ op.conj().T for op in k.operators)


def apply_choi(c: ChoiMatrix, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (c.dim_in, c.dim_in):
        raise DimensionError(f"input shape {rho.shape} does not match dim_in={c.dim_in}")
    blocks = c.matrix.reshape(c.dim_in, c.dim_out, c.dim_in, c.dim_out)
    return np.einsum("ij,imjn->mn", rho, blocks)


def is_cp(c: ChoiMatrix, tol: float = 1e-10) -> tuple[bool, float]:
    """Choi's criterion. Returns the verdict and the smallest Choi eigenvalue."""
    if c.hermiticity_residual > 1e-10:
        raise NotHermitianError("not Hermiticity-preserving")
    lo = float(c.eigenvalues()[0])
    return lo >= -tol, lo


def is_trace_preserving(k: KrausSet, tol: float = 1e-12) -> tuple[bool, float]:
    r = k.completeness_residual
    return r <= tol, r


def identity_channel(d: int) -> KrausSet:
    return KrausSet(d, d, (np.eye(d, dtype=complex),))


def transpose_map_choi(d: int) -> ChoiMatrix:
    """Choi matrix of the transpose map (the SWAP operator); not CP for ``d >= 2``."""
    return ChoiMatrix(d, d, ops.swap_unitary(d))
