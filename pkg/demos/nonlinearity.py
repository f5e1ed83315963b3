"""State-dependent maps are not linear across a change of eigenbasis.

Mixing two zero-discord states with incompatible bases gives a state whose
own map disagrees with the weighted sum of the two component maps.
"""

import numpy as np

import oqs_maps as om
from oqs_maps.frameworks import default_cq_pair

rng = np.random.default_rng(2)
z_state, x_state = default_cq_pair()
w = 0.6
mix = om.BipartiteState(2, 2, w * z_state.joint + (1 - w) * x_state.joint)
print("mixture discord witness", om.discord_witness(mix))

gaps = [om.nonlinearity_gap(z_state, x_state, w, om.haar_unitary(4, rng)) for _ in range(100)]
print("largest gap over 100 unitaries", max(gaps))
print("gap with the identity unitary", om.nonlinearity_gap(z_state, x_state, w, np.eye(4)))
print("gap for two states sharing a basis", om.nonlinearity_gap(z_state, z_state, w, om.haar_unitary(4, rng)))
