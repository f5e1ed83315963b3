import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oqs_maps import operators as ops
from oqs_maps.channels import (
    ChoiMatrix,
    KrausSet,
    apply_choi,
    apply_kraus,
    choi_from_kraus,
    identity_channel,
    is_cp,
    is_trace_preserving,
    kraus_from_choi,
    transpose_map_choi,
)
from oqs_maps.errors import DimensionError, NotCPError, NotHermitianError
from oqs_maps.frameworks import make_povm_factors
from oqs_maps.states import consistent_system_state, random_counterexample_spec
from oracles import choi_by_units, random_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
seeds = st.integers(0, 2**32 - 1)


def random_kraus(rng, d_in, d_out, count):
    """Random trace-preserving Kraus set from an isometry."""
    v = ops.haar_unitary(d_out * count, rng)[:, :d_in]
    return KrausSet(d_in, d_out, tuple(v[k * d_out:(k + 1) * d_out] for k in range(count)))


def test_identity_choi():
    c = choi_from_kraus(identity_channel(2)).matrix
    expected = np.zeros((4, 4))
    for i, j in [(0, 0), (0, 3), (3, 0), (3, 3)]:
        expected[i, j] = 1
    assert np.array_equal(c, expected)


def test_transpose_choi_spectrum():
    c = transpose_map_choi(2)
    assert np.allclose(c.matrix, choi_by_units(lambda x: x.T, 2, 2))
    assert np.allclose(c.eigenvalues(), [-1, 1, 1, 1])


def test_sigma_x_choi_rank_one():
    c = choi_from_kraus(KrausSet(2, 2, (SX,)))
    assert np.allclose(c.matrix, choi_by_units(lambda x: SX @ x @ SX, 2, 2))
    assert np.allclose(c.eigenvalues(), [0, 0, 0, 2], atol=1e-14)


def test_kraus_from_identity_choi():
    k = kraus_from_choi(choi_from_kraus(identity_channel(3)))
    assert len(k) == 1
    op = k.operators[0]
    assert np.allclose(op / op[0, 0], np.eye(3))


def test_kraus_from_transpose_fails():
    with pytest.raises(NotCPError, match="not CP"):
        kraus_from_choi(transpose_map_choi(2))


def test_kraus_roundtrip_sweep():
    rng = np.random.default_rng(0)
    for _ in range(500):
        d = int(rng.integers(2, 5))
        k = random_kraus(rng, d, d, int(rng.integers(1, 4)))
        c = choi_from_kraus(k)
        back = choi_from_kraus(kraus_from_choi(c))
        assert np.linalg.norm(back.matrix - c.matrix) <= 1e-10 * np.linalg.norm(c.matrix)
        assert abs(np.trace(c.matrix) - d) < 1e-10
        assert is_cp(c)[1] >= -1e-12


def test_kraus_roundtrip_rectangular():
    rng = np.random.default_rng(1)
    k = random_kraus(rng, 2, 3, 2)
    c = choi_from_kraus(k)
    assert np.allclose(choi_from_kraus(kraus_from_choi(c)).matrix, c.matrix, atol=1e-12)


def test_apply_identity():
    rho = random_state(3, np.random.default_rng(2))
    assert np.allclose(apply_kraus(identity_channel(3), rho), rho)
    assert np.allclose(apply_choi(choi_from_kraus(identity_channel(3)), rho), rho)


def test_apply_choi_transpose():
    rho = np.array([[1, 1j], [-1j, 1]]) / 2
    assert np.allclose(apply_choi(transpose_map_choi(2), rho), rho.T)


def test_apply_choi_matches_kraus():
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        k = random_kraus(rng, d, d, int(rng.integers(1, 5)))
        rho = random_state(d, rng)
        assert np.linalg.norm(apply_choi(choi_from_kraus(k), rho) - apply_kraus(k, rho)) < 1e-11


@settings(max_examples=30)
@given(seed=seeds, d=st.integers(2, 4), count=st.integers(1, 4))
def test_tp_preserves_trace(seed, d, count):
    rng = np.random.default_rng(seed)
    k = random_kraus(rng, d, d, count)
    out = apply_kraus(k, random_state(d, rng))
    assert abs(np.trace(out) - 1) < 1e-12
    assert ops.is_hermitian(out, 1e-13)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply_kraus(identity_channel(2), np.eye(3))
    with pytest.raises(DimensionError):
        apply_choi(choi_from_kraus(identity_channel(2)), np.eye(3))


def test_is_cp_cases():
    ok, lo = is_cp(choi_from_kraus(identity_channel(2)))
    assert ok and abs(lo) < 1e-15
    ok, lo = is_cp(transpose_map_choi(2))
    assert not ok and abs(lo + 1) < 1e-14


def test_is_cp_rejects_non_hermitian():
    with pytest.raises(NotHermitianError, match="not Hermiticity-preserving"):
        is_cp(ChoiMatrix(2, 2, np.triu(np.ones((4, 4)))))


def test_trace_preserving_scaled_identity():
    ok, r = is_trace_preserving(KrausSet(2, 2, (np.eye(2) / 2,)))
    assert not ok
    # I/4 - I has Frobenius norm sqrt(2) * 3/4
    assert abs(r - 0.75 * np.sqrt(2)) < 1e-15


def test_povm_factor_completeness():
    spec = random_counterexample_spec(np.random.default_rng(4))
    factors = make_povm_factors(spec)
    total = np.zeros((2, 2), dtype=complex)
    for f in factors.factors:
        for a in range(2):
            for b in range(2):
                total[a, b] += sum(np.conj(f.m[c, a]) * f.m[c, b] for c in range(2))
    assert np.linalg.norm(total - np.eye(2)) < 1e-14
    ok, r = is_trace_preserving(KrausSet(2, 2, tuple(f.m for f in factors.factors)), 1e-14)
    assert ok


def test_povm_factors_leave_state_invariant():
    spec = random_counterexample_spec(np.random.default_rng(5))
    rho = consistent_system_state(spec)
    k = KrausSet(2, 2, tuple(f.m for f in make_povm_factors(spec).factors))
    assert np.allclose(apply_kraus(k, rho), rho, atol=1e-15)
    assert np.allclose(rho, [[1 / 2, 1 / 6], [1 / 6, 1 / 2]])
