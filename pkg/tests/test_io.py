import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entevo import io as jsonio
from entevo.io import FormatError
from entevo.states import (
    depolarizing_channel,
    isotropic_state,
    random_channel,
    random_density_matrix,
    random_pure_state,
)


@settings(max_examples=25, deadline=None)
@given(d=st.integers(2, 4), seed=st.integers(0, 2**31))
def test_pure_state_round_trip(d, seed):
    chi = random_pure_state(d, seed=seed)
    back = jsonio.loads(jsonio.dumps(chi))
    np.testing.assert_array_equal(back.coeffs, chi.coeffs)


@pytest.mark.parametrize("obj", [
    isotropic_state(3, 0.6),
    random_density_matrix(2, 3, seed=1),
    depolarizing_channel(2, 0.3),
    random_channel(3, 2, seed=2),
])
def test_round_trip_exact(obj, tmp_path):
    path = tmp_path / "x.json"
    jsonio.save(obj, path)
    back = jsonio.load(path)
    assert type(back) is type(obj)
    a, b = jsonio.to_dict(obj), jsonio.to_dict(back)
    assert a == b


def test_document_layout():
    doc = json.loads(jsonio.dumps(random_pure_state(2, seed=0)))
    assert doc["type"] == "pure_state" and (doc["d"], doc["f"]) == (2, 2)
    assert np.asarray(doc["coeffs"]).shape == (2, 2, 2)


@pytest.mark.parametrize("text", [
    "{not json",
    "[1, 2]",
    '{"type": "banana"}',
    '{"type": "pure_state", "d": 2, "f": 2}',
    '{"type": "pure_state", "d": 2, "f": 2, "coeffs": [[1, 0], [0, 1]]}',
    '{"type": "pure_state", "d": 3, "f": 3, "coeffs": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}',
    '{"type": "density_matrix", "d": 2, "f": 1, "matrix": [[[0.5, 0], [0, 1]], [[0, 0], [0.5, 0]]]}',
    '{"type": "density_matrix", "d": 1, "f": 2, "matrix": [[[2, 0], [0, 0]], [[0, 0], [0, 0]]]}',
    '{"type": "kraus_channel", "d": 2, "f": 3, "trace_preserving": true, "kraus": []}',
    '{"type": "kraus_channel", "d": 2, "f": 2, "trace_preserving": true, '
    '"kraus": [[[[2, 0], [0, 0]], [[0, 0], [2, 0]]]]}',
    '{"type": "pure_state", "d": 2, "f": 2, "coeffs": [[["a", 0], [0, 0]], [[0, 0], [1, 0]]]}',
])
def test_malformed_documents(text):
    with pytest.raises(FormatError):
        jsonio.loads(text)


def test_unknown_object():
    with pytest.raises(TypeError):
        jsonio.to_dict(np.eye(2))
