import json

import numpy as np
import pytest

from oqs_maps.channels import choi_from_kraus, identity_channel
from oqs_maps.errors import ConfigError, InvalidStateError
from oqs_maps.serialization import (
    choi_from_json,
    choi_to_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    state_from_json,
    state_to_json,
)
from oqs_maps.states import build_counterexample, random_counterexample_spec


def test_matrix_layout_is_row_major():
    d = matrix_to_json(np.array([[1, 2j], [3, 4 - 1j]]))
    assert d == {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, -1.0]]}


def test_matrix_roundtrip_is_lossless():
    m = np.random.default_rng(0).standard_normal((3, 5)) + 1j / 3
    back = matrix_from_json(json.loads(json.dumps(matrix_to_json(m))))
    assert np.array_equal(back, m)


def test_state_roundtrip():
    state = build_counterexample(random_counterexample_spec(np.random.default_rng(1), n=2, p=0.5))
    d = json.loads(json.dumps(state_to_json(state)))
    assert set(d) == {"ds", "de", "matrix"}
    back = state_from_json(d)
    assert (back.ds, back.de) == (3, 2)
    assert np.array_equal(back.joint, state.joint)


def test_choi_roundtrip():
    c = choi_from_kraus(identity_channel(2))
    d = choi_to_json(c)
    assert d["din"] == 2 and d["dout"] == 2
    assert np.array_equal(choi_from_json(d).matrix, c.matrix)


def test_matrix_entry_count_checked():
    with pytest.raises(ConfigError):
        matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})


def test_state_validity_checked():
    with pytest.raises(InvalidStateError):
        state_from_json({"ds": 1, "de": 2, "matrix": matrix_to_json(np.eye(2))})


def test_parse_error_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "ds": 2,\n  "de": 2\n  "matrix": {}\n}\n')
    with pytest.raises(ConfigError) as info:
        load_json(path)
    msg = str(info.value)
    assert ":4:" in msg
    assert '"matrix": {}' in msg
