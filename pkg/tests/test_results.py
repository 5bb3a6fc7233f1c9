import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chiral_lics.results import ScanResult

META = {"tool": "chiral-lics", "version": "0.1.0", "summary": {"L": {"minima": [[4.1, 0.17]]}}}

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def _sample():
    return ScanResult(META, ["delta", "I_L", "label"], [[0.0, 0.25, "a"], [0.5, 1 / 3, "b"], [1.0, math.nan, "c"]])


def test_csv_layout():
    text = _sample().to_csv()
    lines = text.split("\n")
    assert lines[0] == "delta,I_L,label"
    assert lines[2] == "0.5,0.333333333333,b"
    assert lines[3] == "1,nan,c"
    assert lines[4].startswith("# tool: ")
    assert "\r" not in text and text.endswith("\n")


def test_json_layout():
    text = _sample().to_json()
    assert '"columns"' in text and "NaN" not in text
    back = ScanResult.from_json(text)
    assert math.isnan(back.rows[2][1])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20))
def test_json_round_trip_is_bit_exact(pairs):
    res = ScanResult(META, ["x", "y"], [list(p) for p in pairs])
    back = ScanResult.from_json(res.to_json())
    assert back.rows == res.rows
    assert back.meta == res.meta
    assert np.array(back.rows).tobytes() == np.array(res.rows).tobytes()


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20))
def test_csv_reread_rewrites_identical_bytes(pairs):
    res = ScanResult(META, ["x", "y"], [list(p) for p in pairs])
    text = res.to_csv()
    back = ScanResult.from_csv(text)
    assert back.to_csv() == text
    assert back.meta == res.meta


def test_write_and_read(tmp_path):
    res = _sample()
    for fmt in ("csv", "json"):
        path = tmp_path / f"out.{fmt}"
        res.write(path, fmt)
        back = ScanResult.read(path)
        assert back.columns == res.columns
        assert back.dumps(fmt) == path.read_text()


def test_column_and_validation():
    res = _sample()
    np.testing.assert_array_equal(res.column("delta"), [0.0, 0.5, 1.0])
    with pytest.raises(ValueError):
        ScanResult({}, ["a", "b"], [[1.0]])
    with pytest.raises(ValueError):
        res.dumps("xml")
