import json
from fractions import Fraction

import numpy as np
import pytest

from dualdet.dcmat import DCMatrix
from dualdet.dqmat import DQMatrix
from dualdet.errors import ParseError, ShapeError
from dualdet.generate import dc, dq
from dualdet.io import dumps, dumps_matrix, loads_matrix, result_scalar, scalar_from_json, scalar_to_json
from dualdet.scalar import DualComplex, DualQuaternion, DualReal, Quaternion

from conftest import fixture_path


def doc(rows, cols, entries, scalar="dc"):
    return json.dumps({"rows": rows, "cols": cols, "scalar": scalar, "entries": entries})


def test_parse_one_by_one():
    A = loads_matrix(doc(1, 1, [[[1, 0], [0, 0]]]))
    assert isinstance(A, DCMatrix) and A.exact and A.st[0, 0] == Fraction(1) and A.in_[0, 0] == 0


def test_parse_complex_entries():
    A = loads_matrix(doc(1, 2, [[[1, 2], [0, 0]], [[0.5, 0], [3, -1]]]))
    assert not A.exact and A[0, 0].st == 1 + 2j and A[0, 1].in_ == 3 - 1j


def test_wrong_count():
    with pytest.raises(ShapeError):
        loads_matrix(doc(2, 2, [[[1, 0], [0, 0]]] * 3))


@pytest.mark.parametrize(
    "entry, where",
    [([[1, 0], [0]], (1, 0)), ([[1, "x"], [0, 0]], (1, 0)), ("bad", (1, 0))],
)
def test_bad_entry_position(entry, where):
    good = [[1, 0], [0, 0]]
    with pytest.raises(ParseError) as info:
        loads_matrix(doc(2, 2, [good, good, entry, good]))
    assert (info.value.row, info.value.col) == where


@pytest.mark.parametrize(
    "text",
    ["{", "[]", json.dumps({"rows": 1}), doc(0, 1, []), doc(1, 1, [[[1, 0], [0, 0]]], scalar="dr")],
)
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        loads_matrix(text)


def test_nonfinite_rejected():
    with pytest.raises(ParseError):
        loads_matrix('{"rows": 1, "cols": 1, "scalar": "dc", "entries": [[[NaN, 0], [0, 0]]]}')


def test_roundtrip_float():
    g = np.random.default_rng(40)
    for A in (dc(g, 2, 3), dq(g, 3, 2)):
        B = loads_matrix(dumps_matrix(A))
        assert type(B) is type(A) and B.allclose(A, 0)
        assert dumps_matrix(B) == dumps_matrix(A)


@pytest.mark.parametrize("name", ["no_root", "free_root", "rational_roots"])
def test_fixtures_roundtrip(name):
    text = fixture_path(name).read_text()
    A = loads_matrix(text)
    assert A.exact
    assert dumps_matrix(A) == text


def test_scalar_json():
    for a in (DualReal(1.5, -2.0), DualComplex(1 + 2j, -3j), DualQuaternion(Quaternion(1, 2, 3, 4), Quaternion(0, 0, 1, 0))):
        assert scalar_from_json(json.loads(json.dumps(scalar_to_json(a)))) == a
    with pytest.raises(ParseError):
        scalar_from_json([1, 2, 3])


def test_result_collapse():
    assert result_scalar(DualComplex(Fraction(27), Fraction(12))) == [27, 12]
    assert result_scalar(DualComplex(1 + 1j, 0j)) == [[1.0, 1.0], [0.0, 0.0]]


def test_dumps_canonical():
    assert dumps({"b": 1, "a": -0.0}) == '{\n  "a": -0.0,\n  "b": 1\n}\n'
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


def test_dq_document():
    e = [[1, 0, 0, 0], [0, 1, 0, 0]]
    A = loads_matrix(doc(1, 1, [e], scalar="dq"))
    assert isinstance(A, DQMatrix) and A[0, 0] == DualQuaternion(Quaternion(1), Quaternion(0, 1))
