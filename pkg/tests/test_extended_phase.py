import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rimech.errors import InvalidDimensionError
from rimech.extended_phase import (
    ExtendedState,
    Trajectory,
    lower_index,
    make_metric,
    make_minkowski,
    max_spatial_speed,
    norm_squared,
    parse_signature,
    raise_index,
    weak_field_metric,
)


def test_minkowski_plus_minus():
    g = make_minkowski(4, "plus-minus")
    assert np.array_equal(g(np.zeros(4)), np.diag([1.0, -1, -1, -1]))


def test_minkowski_minus_plus():
    g = make_minkowski(4, "minus-plus")
    assert np.array_equal(g(np.zeros(4)), np.diag([-1.0, 1, 1, 1]))


def test_minkowski_one_dim():
    g = make_minkowski(1, "plus-minus")
    assert np.array_equal(g(np.zeros(1)), np.array([[1.0]]))


def test_minkowski_rejects_zero_dim():
    with pytest.raises(InvalidDimensionError):
        make_minkowski(0)


def test_unit_timelike_and_null():
    g = make_minkowski(4)
    x = np.zeros(4)
    assert norm_squared(g, x, [1, 0, 0, 0]) == 1.0
    assert norm_squared(g, x, [1, 1, 0, 0]) == 0.0


def test_weak_field_contraction():
    # 1 - 2 U / c^2 with U = 0.1 c^2
    m = make_metric(lambda x: np.diag([1 - 2 * 0.1, -1, -1, -1]), 4, "plus-minus")
    assert norm_squared(m, np.zeros(4), [1, 0, 0, 0]) == pytest.approx(0.8, abs=1e-15)


def test_weak_field_metric_g00():
    c = 3.0
    m = weak_field_metric(lambda x: 0.1 * c**2, c=c)
    assert -m(np.zeros(4))[0, 0] == pytest.approx(0.8, rel=1e-14)


def test_dimension_mismatch():
    g = make_minkowski(4)
    with pytest.raises(InvalidDimensionError):
        norm_squared(g, np.zeros(4), [1, 0, 0])


@pytest.mark.parametrize("sig,status,bound", [
    ("+---", "bounded", 1.0),
    ("++--", "unbounded", np.inf),
    ("---", "infeasible", None),
])
def test_speed_bounds(sig, status, bound):
    b = max_spatial_speed(sig)
    assert b.status == status
    if bound is not None:
        assert b.bound == pytest.approx(bound, rel=1e-6)


def test_speed_bound_single_axis():
    assert max_spatial_speed("+").status == "bounded"


def test_parse_signature_forms():
    assert parse_signature("+-") == (1, -1)
    assert parse_signature([1, -1, -1]) == (1, -1, -1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4))
def test_raise_lower_roundtrip(v):
    m = make_minkowski(4, "minus-plus")
    x = np.zeros(4)
    back = raise_index(m, x, lower_index(m, x, v))
    assert np.allclose(back, v, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.floats(0.1, 4))
def test_norm_is_quadratic(v, s):
    m = make_minkowski(3)
    x = np.zeros(3)
    assert norm_squared(m, x, s * np.asarray(v)) == pytest.approx(s * s * norm_squared(m, x, v), abs=1e-9)


def test_state_vector_roundtrip():
    s = ExtendedState([1.0, 2.0], [3.0, 4.0], lam=0.5)
    z = s.as_vector()
    r = ExtendedState.from_vector(z, lam=0.5)
    assert np.array_equal(r.x, s.x) and np.array_equal(r.p, s.p)


def test_trajectory_requires_monotone_grid():
    with pytest.raises(Exception):
        Trajectory(np.array([0.0, 1.0, 0.5]), np.zeros((3, 1)), np.zeros((3, 1)))
