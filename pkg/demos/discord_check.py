"""Witness and structural test for zero discord."""

import numpy as np

import oqs_maps as om

rng = np.random.default_rng(4)
cq = om.build_cq_state([0.5, 0.3, 0.2], om.haar_unitary(3, rng), [om.operators.random_density(2, rng) for _ in range(3)])
v = om.zero_discord_decision(cq)
print("CQ state:", v.structurally_zero, "witness", v.witness)
for p, vec, _ in v.decomposition:
    print(f"  p={p:.6f}  basis vector {np.round(np.ravel(vec), 3)}")

ce = om.build_counterexample(om.random_counterexample_spec(rng))
v = om.zero_discord_decision(ce)
print("counterexample:", v.structurally_zero, "witness", v.witness)

bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
v = om.zero_discord_decision(om.BipartiteState(2, 2, np.outer(bell, bell)))
print("Bell state (maximally mixed marginal):", v.structurally_zero)
