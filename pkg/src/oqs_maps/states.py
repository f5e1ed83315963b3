"""Density matrices, bipartite system-environment states and their decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import operators as ops
from .errors import DecompositionError, DimensionError, InvalidStateError

STATE_TOL = 1e-10
BLOCK_TOL = 1e-10


def _frozen(m) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    arr.setflags(write=False)
    return arr


def density_violations(m, tol: float = STATE_TOL) -> list[str]:
    """Reasons ``m`` fails to be a density matrix (empty when valid)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        return [f"not square: shape {m.shape}"]
    if not np.all(np.isfinite(m)):
        return ["non-finite entries"]
    problems = []
    herm = ops.hermiticity_residual(m)
    if herm > tol:
        problems.append(f"not Hermitian (residual {herm:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > tol:
        problems.append(f"trace {tr:.6g} != 1")
    if herm <= tol:
        lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0]
        if lo < -tol:
            problems.append(f"negative eigenvalue {lo:.3e}")
    return problems


def is_density(m, tol: float = STATE_TOL) -> bool:
    return not density_violations(m, tol)


def validate_density(m, tol: float = STATE_TOL) -> np.ndarray:
    """Return ``m`` as a complex array, raising ``InvalidStateError`` if it is not a state."""
    problems = density_violations(m, tol)
    if problems:
        raise InvalidStateError("not a density matrix: " + "; ".join(problems))
    return np.asarray(m, dtype=complex)


@dataclass(frozen=True)
class BipartiteState:
    """Joint state on ``S (x) E`` with the system as the left factor."""

    ds: int
    de: int
    joint: np.ndarray

    def __post_init__(self):
        joint = np.asarray(self.joint, dtype=complex)
        if joint.shape != (self.ds * self.de, self.ds * self.de):
            raise DimensionError("bad joint dimension")
        validate_density(joint)
        object.__setattr__(self, "joint", _frozen(joint))

    @property
    def dim(self) -> int:
        return self.ds * self.de


def product_state(rho_s, rho_e) -> BipartiteState:
    rho_s, rho_e = ops.as_matrix(rho_s), ops.as_matrix(rho_e)
    return BipartiteState(rho_s.shape[0], rho_e.shape[0], ops.tensor(rho_s, rho_e))


def reduced_system(state: BipartiteState) -> np.ndarray:
    return ops.partial_trace_env(state.joint, state.ds, state.de)


def reduced_environment(state: BipartiteState) -> np.ndarray:
    return ops.partial_trace_sys(state.joint, state.ds, state.de)


def basis_matrix(basis) -> np.ndarray:
    """Stack a basis (matrix of columns or sequence of vectors) into a square matrix."""
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        b = np.asarray(basis, dtype=complex)
    else:
        b = np.column_stack([np.asarray(v, dtype=complex).ravel() for v in basis])
    if b.shape[0] != b.shape[1]:
        raise DimensionError(f"basis must span the space, got shape {b.shape}")
    return b


def _check_orthonormal(b: np.ndarray, tol: float = STATE_TOL):
    if np.linalg.norm(b.conj().T @ b - np.eye(b.shape[1])) > tol:
        raise DecompositionError("basis not orthonormal")


@dataclass(frozen=True)
class CounterexampleSpec:
    """Parameters of the discordant family

    ``(p/3)(|0><0| x r0 + |1><1| x r1 + |+><+| x r+) + sum_{i>=2} p_i |i><i| x r_i``

    on a system of dimension ``n + 1``. ``env_states`` is ordered
    ``(r0, r1, r+, r2, ..., rn)``.
    """

    n: int
    p: float
    extra_probs: tuple[float, ...]
    env_dim: int
    env_states: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        extra = tuple(float(x) for x in self.extra_probs)
        if len(extra) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} extra probabilities, got {len(extra)}")
        if not 0.0 <= self.p <= 1.0 or any(x < 0 for x in extra):
            raise InvalidStateError("probs not normalized")
        if abs(self.p + sum(extra) - 1.0) > 1e-12:
            raise InvalidStateError("probs not normalized")
        envs = tuple(self.env_states)
        if len(envs) != self.n + 2:
            raise ValueError(f"expected {self.n + 2} environment states, got {len(envs)}")
        frozen = []
        for rho in envs:
            rho = validate_density(rho)
            if rho.shape != (self.env_dim, self.env_dim):
                raise DimensionError("environment state has wrong dimension")
            frozen.append(_frozen(rho))
        object.__setattr__(self, "extra_probs", extra)
        object.__setattr__(self, "env_states", tuple(frozen))

    @property
    def ds(self) -> int:
        return self.n + 1

    @property
    def rho0(self) -> np.ndarray:
        return self.env_states[0]

    @property
    def rho1(self) -> np.ndarray:
        return self.env_states[1]

    @property
    def rho_plus(self) -> np.ndarray:
        return self.env_states[2]

    def rho_j(self, j: int) -> np.ndarray:
        """Environment state paired with ``|j>`` for ``j >= 2``."""
        return self.env_states[j + 1]

    def prob_j(self, j: int) -> float:
        return self.extra_probs[j - 2]


def plus_ket(dim: int) -> np.ndarray:
    return (ops.ket(0, dim) + ops.ket(1, dim)) / np.sqrt(2)


def random_counterexample_spec(
    rng: np.random.Generator,
    n: int = 1,
    p: float = 1.0,
    env_dim: int = 2,
    extra_probs: Sequence[float] | None = None,
) -> CounterexampleSpec:
    """Spec with generic full-rank environment states drawn from ``rng``.

    Without ``extra_probs`` the leftover weight ``1 - p`` is split evenly.
    """
    if extra_probs is None:
        extra_probs = [(1.0 - p) / (n - 1)] * (n - 1) if n > 1 else []
    envs = tuple(ops.random_density(env_dim, rng) for _ in range(n + 2))
    return CounterexampleSpec(n, p, tuple(extra_probs), env_dim, envs)


def consistent_system_state(spec: CounterexampleSpec) -> np.ndarray:
    """Reduced system state of the counterexample family."""
    ds = spec.ds
    rho = spec.p / 3 * (
        ops.projector(ops.ket(0, ds)) + ops.projector(ops.ket(1, ds)) + ops.projector(plus_ket(ds))
    )
    for j in range(2, ds):
        rho = rho + spec.prob_j(j) * ops.projector(ops.ket(j, ds))
    return rho


def build_counterexample(spec: CounterexampleSpec) -> BipartiteState:
    ds = spec.ds
    joint = spec.p / 3 * (
        ops.tensor(ops.projector(ops.ket(0, ds)), spec.rho0)
        + ops.tensor(ops.projector(ops.ket(1, ds)), spec.rho1)
        + ops.tensor(ops.projector(plus_ket(ds)), spec.rho_plus)
    )
    for j in range(2, ds):
        joint = joint + spec.prob_j(j) * ops.tensor(ops.projector(ops.ket(j, ds)), spec.rho_j(j))
    return BipartiteState(ds, spec.env_dim, joint)


def build_cq_state(probs: Sequence[float], basis, env_states: Sequence) -> BipartiteState:
    """Classical-quantum state ``sum_i p_i |chi_i><chi_i| x rho_i``."""
    b = basis_matrix(basis)
    probs = np.asarray(probs, dtype=float)
    if not (len(probs) == b.shape[1] == len(env_states)):
        raise DimensionError("probs, basis and env_states must have equal length")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise InvalidStateError("probs not normalized")
    _check_orthonormal(b)
    envs = [validate_density(e) for e in env_states]
    de = envs[0].shape[0]
    joint = sum(
        p * ops.tensor(ops.projector(b[:, [i]]), envs[i]) for i, p in enumerate(probs)
    )
    return BipartiteState(b.shape[0], de, joint)


@dataclass(frozen=True)
class SETerm:
    """One term ``coefficient * |ket><bra| (x) phi``."""

    ket: np.ndarray
    bra: np.ndarray
    coefficient: complex
    phi: np.ndarray
    label: str = ""
    index: tuple[int, int] | None = None


@dataclass(frozen=True)
class SEDecomposition:
    ds: int
    de: int
    terms: tuple[SETerm, ...]
    orthonormal: bool
    basis: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            tr = np.trace(t.phi)
            if abs(tr) > BLOCK_TOL and abs(tr - 1.0) > 1e-10:
                raise DecompositionError("environment operator with nonzero trace is not normalized")
        if self.orthonormal:
            if self.basis is None:
                raise DecompositionError("orthonormal decomposition needs its basis")
            _check_orthonormal(np.asarray(self.basis))

    def gram(self) -> np.ndarray:
        """Gram matrix of the distinct kets appearing in the terms."""
        kets: list[np.ndarray] = []
        for t in self.terms:
            v = t.ket.ravel()
            if not any(np.allclose(v, k) for k in kets):
                kets.append(v)
        k = np.column_stack(kets)
        return k.conj().T @ k

    def phi_matrix(self) -> dict[tuple[int, int], np.ndarray]:
        """``{(i, j): phi_ij}`` indexed by basis position (orthonormal decompositions only)."""
        if not self.orthonormal:
            raise DecompositionError("requires orthonormal basis")
        return {t.index: t.phi for t in self.terms}


def extract_decomposition(state: BipartiteState, basis, drop_traceless: bool = False) -> SEDecomposition:
    """Environment blocks ``B_ij = (<chi_i| x 1) rho (|chi_j> x 1)`` normalized to unit trace.

    Blocks that vanish are omitted. A block with zero trace but nonzero
    norm has no defined coefficient; it raises unless ``drop_traceless``
    is set, in which case it is omitted too.
    """
    b = basis_matrix(basis)
    if b.shape[0] != state.ds:
        raise DimensionError("basis dimension does not match the system")
    _check_orthonormal(b)
    ds, de = state.ds, state.de
    blocks = np.einsum("ai,aebf,bj->ijef", b.conj(), state.joint.reshape(ds, de, ds, de), b)
    terms = []
    for i in range(ds):
        for j in range(ds):
            blk = blocks[i, j]
            tr = np.trace(blk)
            if abs(tr) > BLOCK_TOL:
                terms.append(SETerm(_frozen(b[:, [i]]), _frozen(b[:, [j]]), complex(tr), _frozen(blk / tr), f"{i}{j}", (i, j)))
            elif np.linalg.norm(blk) > BLOCK_TOL and not drop_traceless:
                raise DecompositionError("traceless nonzero block")
    return SEDecomposition(ds, de, tuple(terms), True, _frozen(b))


def counterexample_decomposition(spec: CounterexampleSpec) -> SEDecomposition:
    """Diagonal decomposition of the counterexample over the non-orthogonal kets ``0, 1, +, 2..n``."""
    ds = spec.ds
    kets = [("0", ops.ket(0, ds), spec.p / 3, spec.rho0),
            ("1", ops.ket(1, ds), spec.p / 3, spec.rho1),
            ("+", plus_ket(ds), spec.p / 3, spec.rho_plus)]
    kets += [(str(j), ops.ket(j, ds), spec.prob_j(j), spec.rho_j(j)) for j in range(2, ds)]
    terms = tuple(SETerm(_frozen(v), _frozen(v), complex(c), phi, label) for label, v, c, phi in kets)
    return SEDecomposition(ds, spec.env_dim, terms, False)


def reconstruct_state(dec: SEDecomposition) -> BipartiteState:
    if not dec.terms:
        raise InvalidStateError("reconstruction not a state: no terms")
    joint = sum(
        t.coefficient * ops.tensor(t.ket @ t.bra.conj().T, t.phi) for t in dec.terms
    )
    problems = density_violations(joint)
    if problems:
        raise InvalidStateError("reconstruction not a state: " + "; ".join(problems))
    return BipartiteState(dec.ds, dec.de, joint)
