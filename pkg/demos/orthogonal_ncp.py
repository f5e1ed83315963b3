"""Fixing the decomposition in an orthonormal basis can break complete positivity.

The same discordant state, split along the computational basis, yields a
map whose Choi matrix acquires a negative eigenvalue for typical unitaries.
"""

import numpy as np

import oqs_maps as om

rng = np.random.default_rng(1)
spec = om.random_counterexample_spec(rng)
dec = om.extract_decomposition(om.build_counterexample(spec), np.eye(spec.ds))

eigs = np.array([om.is_cp(om.sl_map_choi(dec, om.haar_unitary(4, rng)))[1] for _ in range(300)])
print("fraction of unitaries giving a non-CP map", np.mean(eigs < -1e-6))
print("most negative eigenvalue", eigs.min())

# A classical-quantum state in its own basis never shows this.
cq = om.build_cq_state([0.7, 0.3], np.eye(2), [spec.rho0, spec.rho1])
cq_dec = om.extract_decomposition(cq, np.eye(2))
lo = min(om.is_cp(om.sl_map_choi(cq_dec, om.haar_unitary(4, rng)))[1] for _ in range(300))
print("classical-quantum control, smallest eigenvalue", lo)
