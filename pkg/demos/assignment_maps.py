"""Linear assignment maps: consistent on their domain, inconsistent off it.

Both maps below are linear and completely positive. Each reproduces its
target joint state, and each fails for an input outside the domain it was built for.
"""

import numpy as np

import oqs_maps as om
from oqs_maps.frameworks import assignment_choi

rng = np.random.default_rng(3)
spec = om.random_counterexample_spec(rng)
a = om.counterexample_assignment(spec)
rho_s = om.consistent_system_state(spec)

print("Choi min eigenvalue", om.is_cp(assignment_choi(a))[1])
print("reconstructs the joint state to", np.linalg.norm(om.apply_assignment(a, rho_s) - om.build_counterexample(spec).joint))
print("consistency on the target state", om.consistency_residual(a, rho_s))
print("consistency on |0><0|", om.consistency_residual(a, np.diag([1.0, 0.0])))

lo = min(om.is_cp(om.dynamical_map_from_assignment(a, om.haar_unitary(4, rng)))[1] for _ in range(200))
print("induced dynamical maps, smallest Choi eigenvalue", lo)

h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
b = om.zero_discord_assignment(h, [spec.rho0, spec.rho1])
print("zero-discord assignment in the Hadamard basis, |0><0| residual", om.consistency_residual(b, np.diag([1.0, 0.0])))
