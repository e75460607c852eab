import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panelbreaks import Interval, build_panel
from panelbreaks.errors import (
    BadTimeIndex,
    EmptyPanel,
    IndexOutOfRange,
    NonFinite,
    RaggedPanel,
    ShapeMismatch,
)


def test_well_formed_construction():
    p = build_panel([[1, 2, 3], [4, 5, 6]], ["a", "b"], [1901, 1902, 1903])
    assert p.n == 2 and p.T == 3
    assert p.series_ids == ("a", "b")
    assert p.time_index == (1901, 1902, 1903)


def test_ragged_rows_rejected():
    with pytest.raises(RaggedPanel):
        build_panel([[1, 2, 3], [4, 5, 6, 7]], ["a", "b"], [1, 2, 3])


def test_nan_rejected():
    with pytest.raises(NonFinite):
        build_panel([[1, np.nan, 3]], ["a"], [1, 2, 3])
    with pytest.raises(NonFinite):
        build_panel([[1, np.inf, 3]], ["a"], [1, 2, 3])


def test_empty_and_short_panels_rejected():
    with pytest.raises(EmptyPanel):
        build_panel([], [], [])
    with pytest.raises(EmptyPanel):
        build_panel([[1.0]], ["a"], [1])


def test_metadata_length_mismatch_rejected():
    with pytest.raises(ShapeMismatch):
        build_panel([[1, 2, 3]], ["a", "b"], [1, 2, 3])
    with pytest.raises(ShapeMismatch):
        build_panel([[1, 2, 3]], ["a"], [1, 2])


def test_time_index_must_increase():
    with pytest.raises(BadTimeIndex):
        build_panel([[1, 2, 3]], ["a"], [3, 2, 1])
    with pytest.raises(BadTimeIndex):
        build_panel([[1, 2, 3]], ["a"], [1, 1, 2])


def test_full_range_slice_is_identity():
    p = build_panel(np.arange(20.0).reshape(2, 10), ["a", "b"], range(10))
    s = p.slice(1, 10)
    assert np.array_equal(s.values, p.values)
    assert s.time_index == p.time_index


def test_slice_width():
    p = build_panel(np.arange(20.0).reshape(2, 10), ["a", "b"], range(10))
    s = p.slice(3, 7)
    assert s.T == 5
    assert s.time_index == (2, 3, 4, 5, 6)


def test_slice_bad_order_rejected():
    p = build_panel(np.arange(20.0).reshape(2, 10), ["a", "b"], range(10))
    with pytest.raises(IndexOutOfRange):
        p.slice(7, 3)
    with pytest.raises(IndexOutOfRange):
        p.slice(1, 11)
    with pytest.raises(IndexOutOfRange):
        p.slice(0, 5)


@settings(max_examples=100, derandomize=True)
@given(st.data())
def test_slice_columns_match_source(data):
    n = data.draw(st.integers(1, 5))
    T = data.draw(st.integers(2, 24))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    p = build_panel(rng.standard_normal((n, T)), [f"s{i}" for i in range(n)], range(T))
    s = data.draw(st.integers(1, T - 1))
    e = data.draw(st.integers(s + 1, T))
    sub = p.slice(s, e)
    for k in range(sub.T):
        assert np.array_equal(sub.values[:, k], p.values[:, s + k - 1])


def test_panel_values_immutable():
    p = build_panel([[1, 2, 3]], ["a"], [1, 2, 3])
    with pytest.raises(ValueError):
        p.values[0, 0] = 99.0


def test_fingerprint_tracks_content():
    p1 = build_panel([[1, 2, 3]], ["a"], [1, 2, 3])
    p2 = build_panel([[1, 2, 3]], ["a"], [1, 2, 3])
    p3 = build_panel([[1, 2, 4]], ["a"], [1, 2, 3])
    assert p1.fingerprint() == p2.fingerprint()
    assert p1.fingerprint() != p3.fingerprint()


def test_interval_invariants():
    Interval(1, 1, 2)
    Interval(3, 5, 9)
    with pytest.raises(IndexOutOfRange):
        Interval(3, 2, 9)
    with pytest.raises(IndexOutOfRange):
        Interval(3, 9, 9)
