"""Zero-discord detection for bipartite states, with discord measured on the system side."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import operators as ops
from .states import BipartiteState, reduced_system

DEGENERACY_GAP = 1e-8
BLOCK_TOL = 1e-10


@dataclass(frozen=True)
class DiscordVerdict:
    witness: float
    structurally_zero: str  # "yes" | "no" | "indeterminate"
    decomposition: tuple[tuple[float, np.ndarray, np.ndarray], ...] | None = None

    def reconstruct(self) -> np.ndarray:
        if self.decomposition is None:
            raise ValueError("verdict carries no decomposition")
        return sum(p * ops.tensor(ops.projector(v), rho) for p, v, rho in self.decomposition)


def discord_witness(state: BipartiteState) -> float:
    """Frobenius norm of ``[rho_S (x) 1_E, rho_SE]``.

    A positive value certifies nonzero discord; zero does not certify its absence.
    """
    lifted = ops.tensor(reduced_system(state), np.eye(state.de))
    return float(np.linalg.norm(ops.commutator(lifted, state.joint)))


def zero_discord_decision(state: BipartiteState) -> DiscordVerdict:
    """Decide whether ``state`` has classical-quantum form in the eigenbasis of its reduced state.

    With a nondegenerate reduced spectrum that eigenbasis is the only
    candidate, so vanishing off-diagonal environment blocks are necessary
    and sufficient. Under degeneracy the candidate basis is not unique and
    the verdict is ``"indeterminate"``.
    """
    witness = discord_witness(state)
    values, vectors = ops.hermitian_eig(reduced_system(state))
    if len(values) > 1 and np.min(np.diff(values)) <= DEGENERACY_GAP:
        return DiscordVerdict(witness, "indeterminate")

    ds, de = state.ds, state.de
    blocks = np.einsum("ai,aebf,bj->ijef", vectors.conj(), state.joint.reshape(ds, de, ds, de), vectors)
    off = max(
        (np.linalg.norm(blocks[i, j]) for i in range(ds) for j in range(ds) if i != j),
        default=0.0,
    )
    if off > BLOCK_TOL:
        return DiscordVerdict(witness, "no")

    terms = []
    for i in range(ds):
        p = float(np.trace(blocks[i, i]).real)
        env = blocks[i, i] / p if p > BLOCK_TOL else np.eye(de) / de
        terms.append((p, vectors[:, [i]], env))
    return DiscordVerdict(witness, "yes", tuple(terms))
