"""A discordant initial state whose reduced dynamics is still completely positive.

Every joint unitary gives a Kraus representation built from POVM factors,
so the Choi matrix stays PSD even though the state has nonzero discord.
"""

import numpy as np

import oqs_maps as om
from oqs_maps.channels import choi_from_kraus

rng = np.random.default_rng(0)
spec = om.random_counterexample_spec(rng, n=2, p=0.6, env_dim=2)
state = om.build_counterexample(spec)
print("system dim", spec.ds, "env dim", spec.env_dim)
print("discord witness", om.discord_witness(state))
# the reduced state can be degenerate here, in which case the structural test abstains
print("zero-discord decision:", om.zero_discord_decision(state).structurally_zero)

rho_s = om.consistent_system_state(spec)
worst_eig, worst_eq = np.inf, 0.0
for _ in range(200):
    u = om.haar_unitary(spec.ds * spec.env_dim, rng)
    kraus = om.counterexample_kraus(spec, u)
    worst_eig = min(worst_eig, om.is_cp(choi_from_kraus(kraus))[1])
    worst_eq = max(worst_eq, np.linalg.norm(om.apply_kraus(kraus, rho_s) - om.reduced_dynamics(state, u)))

print("smallest Choi eigenvalue over 200 unitaries", worst_eig)
print("largest mismatch with the exact reduced dynamics", worst_eq)
