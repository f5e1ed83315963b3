"""Constructions of reduced dynamical maps from correlated initial states.

Two routes are provided:

* decomposition-based maps, built from a fixed expansion of the joint
  state ``sum coeff |a><b| (x) phi`` and a joint unitary (``sl_map_choi``
  for orthonormal expansions, ``counterexample_kraus`` for the
  non-orthogonal expansion of the discordant family);
* linear assignment maps ``X -> A[X]`` from system operators to joint
  operators, whose dynamical map is ``Tr_E(U A[X] U^dag)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import operators as ops
from .channels import ChoiMatrix, KrausSet, apply_choi, choi_from_map
from .correlations import DEGENERACY_GAP, zero_discord_decision
from .errors import DecompositionError, DegenerateSpectrumError, DimensionError
from .states import (
    BipartiteState,
    CounterexampleSpec,
    SEDecomposition,
    basis_matrix,
    build_cq_state,
    extract_decomposition,
    plus_ket,
    reduced_system,
    validate_density,
)

EIG_CUTOFF = 1e-14


def reduced_dynamics(state: BipartiteState, u) -> np.ndarray:
    """``Tr_E[U rho_SE U^dag]``, the reference every constructed map must reproduce."""
    u = _check_unitary(u, state.dim)
    return ops.partial_trace_env(u @ state.joint @ u.conj().T, state.ds, state.de)


def _check_unitary(u, dim: int) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (dim, dim):
        raise DimensionError(f"unitary must be {dim}x{dim}, got {u.shape}")
    return u


# -- non-orthogonal construction for the discordant family ------------------


@dataclass(frozen=True)
class PovmFactor:
    label: str
    m: np.ndarray
    phi: np.ndarray


@dataclass(frozen=True)
class PovmFactorSet:
    ds: int
    factors: tuple[PovmFactor, ...]

    @property
    def completeness_residual(self) -> float:
        s = sum(f.m.conj().T @ f.m for f in self.factors)
        return float(np.linalg.norm(s - np.eye(self.ds)))

    def __getitem__(self, label: str) -> PovmFactor:
        for f in self.factors:
            if f.label == label:
                return f
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [f.label for f in self.factors]


def make_povm_factors(spec: CounterexampleSpec) -> PovmFactorSet:
    """POVM square roots that leave the family's reduced state invariant, paired with
    their environment states.

    Labels are ``"0"``, ``"1"``, ``"+0"``, ``"+1"`` and ``"2"``..``"n"``.
    """
    ds = spec.ds
    k0, k1, kp = ops.ket(0, ds), ops.ket(1, ds), plus_ket(ds)
    factors = [
        PovmFactor("0", np.sqrt(2 / 3) * k0 @ k0.T, spec.rho0),
        PovmFactor("1", np.sqrt(2 / 3) * k1 @ k1.T, spec.rho1),
        PovmFactor("+0", np.sqrt(1 / 3) * kp @ k0.T, spec.rho_plus),
        PovmFactor("+1", np.sqrt(1 / 3) * kp @ k1.T, spec.rho_plus),
    ]
    for j in range(2, ds):
        kj = ops.ket(j, ds)
        factors.append(PovmFactor(str(j), kj @ kj.T, spec.rho_j(j)))
    return PovmFactorSet(ds, tuple(factors))


def _env_slices(u: np.ndarray, ds: int, de: int, x: np.ndarray) -> list[np.ndarray]:
    """Blocks ``<k|U|x>`` as ``ds x ds`` matrices, one per environment basis vector ``k``."""
    ux = np.einsum("mkse,e->kms", u.reshape(ds, de, ds, de), x.ravel())
    return list(ux)


def counterexample_kraus(spec: CounterexampleSpec, u) -> KrausSet:
    """Kraus operators ``sqrt(lambda_a) <k|U|x_a> M`` for every POVM factor ``M``, spectral
    component ``(lambda_a, x_a)`` of its environment state and environment basis vector ``k``.
    """
    ds, de = spec.ds, spec.env_dim
    u = _check_unitary(u, ds * de)
    kraus = []
    for f in make_povm_factors(spec).factors:
        values, vectors = ops.hermitian_eig(f.phi)
        for lam, x in zip(values, vectors.T):
            if lam <= EIG_CUTOFF:
                continue
            for v in _env_slices(u, ds, de, x):
                kraus.append(np.sqrt(lam) * v @ f.m)
    return KrausSet(ds, ds, tuple(kraus))


# -- orthonormal (basis-dependent) construction ------------------------------


def sl_map_choi(dec: SEDecomposition, u) -> ChoiMatrix:
    """Choi matrix of the map fixed by ``Phi[|i><j|] = Tr_E[U (|i><j| (x) phi_ij) U^dag]``.

    ``|i>`` runs over the decomposition's orthonormal basis and missing
    terms mean ``phi_ij = 0``. The map is extended linearly, then its Choi
    matrix is taken in the computational basis.
    """
    if not dec.orthonormal:
        raise DecompositionError("requires orthonormal basis")
    ds, de = dec.ds, dec.de
    u = _check_unitary(u, ds * de)
    b = np.asarray(dec.basis)
    phis = dec.phi_matrix()
    for (i, j), phi in phis.items():
        other = phis.get((j, i))
        if other is None or np.linalg.norm(other - phi.conj().T) > 1e-10:
            warnings.warn("phi_ji != phi_ij^dag: map is not Hermiticity preserving", stacklevel=2)
            break

    images = {}
    for (i, j), phi in phis.items():
        op = ops.tensor(b[:, [i]] @ b[:, [j]].conj().T, phi)
        images[(i, j)] = ops.partial_trace_env(u @ op @ u.conj().T, ds, de)

    def phi_map(x):
        coeffs = b.conj().T @ x @ b
        return sum((coeffs[i, j] * img for (i, j), img in images.items()), np.zeros((ds, ds), complex))

    return choi_from_map(phi_map, ds, ds)


def eigenbasis(rho) -> np.ndarray:
    """Eigenvector columns of ``rho``; raises when the spectrum is degenerate."""
    values, vectors = ops.hermitian_eig(rho)
    if len(values) > 1 and np.min(np.diff(values)) <= DEGENERACY_GAP:
        raise DegenerateSpectrumError("degenerate eigenbasis, gap undefined")
    return vectors


def sl_map_from_state(state: BipartiteState, u) -> ChoiMatrix:
    """Basis-dependent map built from the eigenbasis of the state's own reduced state.

    Off-diagonal blocks in that basis are always traceless; they cannot
    contribute to the image of the state itself and are left out.
    """
    basis = eigenbasis(reduced_system(state))
    return sl_map_choi(extract_decomposition(state, basis, drop_traceless=True), u)


def nonlinearity_gap(state1: BipartiteState, state2: BipartiteState, weight: float, u) -> float:
    """How far the eigenbasis construction is from linear on a convex mixture.

    Returns ``|| Phi_mix[rho_mix] - w Phi_1[rho_1] - (1 - w) Phi_2[rho_2] ||_F`` where
    each map is built from the eigenbasis of its own input state and
    ``rho_mix = w rho_1 + (1 - w) rho_2``.
    """
    if not 0.0 < weight < 1.0:
        raise ValueError("weight must lie in (0, 1)")
    if (state1.ds, state1.de) != (state2.ds, state2.de):
        raise DimensionError("states have different dimensions")
    for s in (state1, state2):
        verdict = zero_discord_decision(s).structurally_zero
        if verdict == "indeterminate":
            raise DegenerateSpectrumError("degenerate eigenbasis, gap undefined")
        if verdict != "yes":
            raise DecompositionError("nonlinearity_gap needs zero-discord inputs")
    mix = BipartiteState(state1.ds, state1.de, weight * state1.joint + (1 - weight) * state2.joint)

    outputs = []
    for s in (mix, state1, state2):
        outputs.append(apply_choi(sl_map_from_state(s, u), reduced_system(s)))
    gap = outputs[0] - weight * outputs[1] - (1 - weight) * outputs[2]
    return float(np.linalg.norm(gap))


def default_cq_pair() -> tuple[BipartiteState, BipartiteState]:
    """Qubit CQ states with the same weights in the Z and X bases and orthogonal environment labels."""
    z = np.eye(2, dtype=complex)
    x = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    probs = (0.7, 0.3)
    z_state = build_cq_state(probs, z, [ops.projector(z[:, [0]]), ops.projector(z[:, [1]])])
    x_state = build_cq_state(probs, x, [ops.projector(x[:, [0]]), ops.projector(x[:, [1]])])
    return z_state, x_state


# -- linear assignment maps --------------------------------------------------


@dataclass(frozen=True)
class AssignmentMap:
    """Linear map from ``ds x ds`` operators to ``(ds*de) x (ds*de)`` operators.

    ``matrix`` acts on row-major vectorized operators. ``kraus_like`` holds
    ``(ds*de) x ds`` operators ``D`` with ``A[X] = sum D X D^dag`` when the
    assignment is CP.
    """

    ds: int
    de: int
    matrix: np.ndarray
    kraus_like: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        n_in, n_out = self.ds ** 2, (self.ds * self.de) ** 2
        if np.shape(self.matrix) != (n_out, n_in):
            raise DimensionError(f"assignment matrix must be {n_out}x{n_in}")

    @classmethod
    def from_kraus_like(cls, ds: int, de: int, operators: Sequence) -> "AssignmentMap":
        ops_ = tuple(np.asarray(d, dtype=complex) for d in operators)
        for d in ops_:
            if d.shape != (ds * de, ds):
                raise DimensionError(f"assignment operator shape {d.shape} != {(ds * de, ds)}")
        # row-major vec(D X D^dag) = (D kron conj(D)) vec(X)
        matrix = sum(np.kron(d, d.conj()) for d in ops_)
        return cls(ds, de, matrix, ops_)

    @property
    def dim(self) -> int:
        return self.ds * self.de


def apply_assignment(a: AssignmentMap, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (a.ds, a.ds):
        raise DimensionError(f"input shape {rho.shape} does not match ds={a.ds}")
    return (a.matrix @ rho.ravel()).reshape(a.dim, a.dim)


def _lift(m: np.ndarray, root_env: np.ndarray) -> list[np.ndarray]:
    """``m (x) sqrt(phi)|k>`` for every environment basis vector ``k``."""
    return [np.kron(m, root_env[:, [k]]) for k in range(root_env.shape[0])]


def zero_discord_assignment(basis, env_states: Sequence) -> AssignmentMap:
    """``A[X] = sum_i <i|X|i> |i><i| (x) phi_i``, positive and CP."""
    b = basis_matrix(basis)
    if np.linalg.norm(b.conj().T @ b - np.eye(b.shape[1])) > 1e-10:
        raise DecompositionError("basis not orthonormal")
    if len(env_states) != b.shape[1]:
        raise DimensionError("need one environment state per basis vector")
    envs = [validate_density(e) for e in env_states]
    ds, de = b.shape[0], envs[0].shape[0]
    d_ops = []
    for i, phi in enumerate(envs):
        d_ops += _lift(b[:, [i]] @ b[:, [i]].conj().T, ops.matrix_sqrt_psd(phi))
    return AssignmentMap.from_kraus_like(ds, de, d_ops)


def counterexample_assignment(spec: CounterexampleSpec) -> AssignmentMap:
    """CP assignment with operators ``M_i (x) sqrt(phi_i)`` built from the POVM factors."""
    d_ops = []
    for f in make_povm_factors(spec).factors:
        d_ops += _lift(f.m, ops.matrix_sqrt_psd(f.phi))
    return AssignmentMap.from_kraus_like(spec.ds, spec.env_dim, d_ops)


def product_assignment(sigma, ds: int) -> AssignmentMap:
    """Uncorrelated assignment ``A[X] = X (x) sigma``."""
    sigma = validate_density(sigma)
    return AssignmentMap.from_kraus_like(ds, sigma.shape[0], _lift(np.eye(ds), ops.matrix_sqrt_psd(sigma)))


def assignment_choi(a: AssignmentMap) -> ChoiMatrix:
    """Choi matrix of the assignment viewed as a map ``S -> SE``."""
    return choi_from_map(lambda x: apply_assignment(a, x), a.ds, a.dim)


def dynamical_map_from_assignment(a: AssignmentMap, u) -> ChoiMatrix:
    u = _check_unitary(u, a.dim)

    def b_map(x):
        return ops.partial_trace_env(u @ apply_assignment(a, x) @ u.conj().T, a.ds, a.de)

    return choi_from_map(b_map, a.ds, a.ds)


def consistency_residual(a: AssignmentMap, rho) -> float:
    """``|| Tr_E A[rho] - rho ||_F``."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.linalg.norm(ops.partial_trace_env(apply_assignment(a, rho), a.ds, a.de) - rho))


def linearity_residual(a: AssignmentMap, x, y, alpha: complex, beta: complex) -> float:
    lhs = apply_assignment(a, alpha * np.asarray(x) + beta * np.asarray(y))
    rhs = alpha * apply_assignment(a, x) + beta * apply_assignment(a, y)
    return float(np.linalg.norm(lhs - rhs))


def kraus_like_residual(a: AssignmentMap, x) -> float:
    """Distance between the matrix action and ``sum D X D^dag`` on ``x``."""
    if a.kraus_like is None:
        raise ValueError("assignment has no operator-sum form")
    x = np.asarray(x, dtype=complex)
    direct = sum(d @ x @ d.conj().T for d in a.kraus_like)
    return float(np.linalg.norm(apply_assignment(a, x) - direct))


def output_correlation(a: AssignmentMap, rho) -> float:
    """``|| A[rho] - Tr_E A[rho] (x) Tr_S A[rho] ||_F`` (zero for uncorrelated outputs)."""
    out = apply_assignment(a, rho)
    rs = ops.partial_trace_env(out, a.ds, a.de)
    re = ops.partial_trace_sys(out, a.ds, a.de)
    return float(np.linalg.norm(out - ops.tensor(rs, re)))
