"""JSON encoding of dual scalars, matrices and reports.

Scalars: a dual real is ``[st, in]``, a dual complex number is
``[[re, im], [re, im]]`` and a dual quaternion is ``[[w, x, y, z], [w, x, y, z]]``.
Matrices are ``{"rows", "cols", "scalar": "dc" | "dq", "entries": [...]}``
with entries in row-major order.  Integer-valued real inputs load as exact
matrices so the fixtures reproduce rational values without rounding.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .dcmat import DCMatrix
from .dqmat import DQMatrix
from .errors import ParseError, ShapeError
from .scalar import DualComplex, DualQuaternion, DualReal, Quaternion


def plain_number(x) -> int | float:
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    return 0.0 if x == 0 else x  # drop the sign of zero


def _complex_pair(z) -> list:
    if isinstance(z, Fraction) or isinstance(z, (int, float, np.floating, np.integer)):
        return [plain_number(z), 0 if isinstance(z, (Fraction, int, np.integer)) else 0.0]
    return [plain_number(z.real), plain_number(z.imag)]


def scalar_to_json(a) -> list:
    if isinstance(a, DualReal):
        return [plain_number(a.st), plain_number(a.in_)]
    if isinstance(a, DualComplex):
        return [_complex_pair(a.st), _complex_pair(a.in_)]
    if isinstance(a, DualQuaternion):
        return [[plain_number(c) for c in a.st], [plain_number(c) for c in a.in_]]
    raise TypeError(f"not a dual scalar: {a!r}")


def result_scalar(a) -> list:
    """Like :func:`scalar_to_json` but real-valued dual complex results collapse to ``[st, in]``."""
    if isinstance(a, DualComplex):
        st, inf = complex(a.st), complex(a.in_)
        if st.imag == 0 and inf.imag == 0:
            return [plain_number(a.st.real if isinstance(a.st, complex) else a.st), plain_number(a.in_.real if isinstance(a.in_, complex) else a.in_)]
    return scalar_to_json(a)


def matrix_to_json(A: DCMatrix | DQMatrix) -> dict:
    if isinstance(A, DQMatrix):
        kind = "dq"
        entries = [scalar_to_json(e) for e in A.entries]
    else:
        kind = "dc"
        entries = [[_complex_pair(s), _complex_pair(i)] for s, i in zip(A.st.ravel(), A.in_.ravel())]
    return {"rows": A.rows, "cols": A.cols, "scalar": kind, "entries": entries}


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _parse_part(x, width: int, where) -> list:
    if not (isinstance(x, list) and len(x) == width and all(_is_number(c) for c in x)):
        raise ParseError(f"expected {width} finite numbers, got {x!r}", *where)
    return x


def _parse_entry(e, kind: str, where) -> tuple[list, list]:
    if not (isinstance(e, list) and len(e) == 2):
        raise ParseError(f"expected a [standard, infinitesimal] pair, got {e!r}", *where)
    width = 2 if kind == "dc" else 4
    return _parse_part(e[0], width, where), _parse_part(e[1], width, where)


def matrix_from_json(data: Any) -> DCMatrix | DQMatrix:
    if not isinstance(data, dict):
        raise ParseError("matrix document must be a JSON object")
    for key in ("rows", "cols", "scalar", "entries"):
        if key not in data:
            raise ParseError(f"missing field {key!r}")
    rows, cols, kind, entries = data["rows"], data["cols"], data["scalar"], data["entries"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ParseError(f"rows and cols must be positive integers, got {rows!r}, {cols!r}")
    if kind not in ("dc", "dq"):
        raise ParseError(f"scalar must be 'dc' or 'dq', got {kind!r}")
    if not isinstance(entries, list):
        raise ParseError("entries must be a list")
    if len(entries) != rows * cols:
        raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}")
    parsed = [_parse_entry(e, kind, divmod(k, cols)) for k, e in enumerate(entries)]
    if kind == "dq":
        return DQMatrix(
            np.array([p[0] for p in parsed], dtype=float).reshape(rows, cols, 4),
            np.array([p[1] for p in parsed], dtype=float).reshape(rows, cols, 4),
        )
    comps = [c for p in parsed for part in p for c in part]
    exact = all(isinstance(c, int) for c in comps) and all(p[0][1] == 0 and p[1][1] == 0 for p in parsed)
    if exact:
        st = np.array([Fraction(p[0][0]) for p in parsed], dtype=object).reshape(rows, cols)
        in_ = np.array([Fraction(p[1][0]) for p in parsed], dtype=object).reshape(rows, cols)
        return DCMatrix(st, in_, exact=True)
    st = np.array([complex(*p[0]) for p in parsed]).reshape(rows, cols)
    in_ = np.array([complex(*p[1]) for p in parsed]).reshape(rows, cols)
    return DCMatrix(st, in_)


def loads_matrix(text: str) -> DCMatrix | DQMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}") from exc
    return matrix_from_json(data)


def parse_matrix(path: str | Path) -> DCMatrix | DQMatrix:
    return loads_matrix(Path(path).read_text())


def dumps_matrix(A: DCMatrix | DQMatrix) -> str:
    return dumps(matrix_to_json(A))


def scalar_from_json(data: Any):
    """Inverse of :func:`scalar_to_json`, dispatching on the nesting shape."""
    if isinstance(data, list) and len(data) == 2:
        if all(_is_number(c) for c in data):
            return DualReal(float(data[0]), float(data[1]))
        if all(isinstance(p, list) for p in data):
            if all(len(p) == 2 for p in data):
                st, inf = _parse_entry(data, "dc", (None, None))
                return DualComplex(complex(*st), complex(*inf))
            if all(len(p) == 4 for p in data):
                st, inf = _parse_entry(data, "dq", (None, None))
                return DualQuaternion(Quaternion(*map(float, st)), Quaternion(*map(float, inf)))
    raise ParseError(f"cannot read a dual scalar from {data!r}")
