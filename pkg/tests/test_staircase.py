import numpy as np
import pytest

from multitime_games.errors import NonIncreasingEndpoints, OutOfDomain
from multitime_games.staircase import ControlSignal, make_staircase


def test_two_axis_staircase():
    curve = make_staircase([0.0, 0.0], [1.0, 1.0], (0, 1))
    assert len(curve) == 2
    assert curve.segments[0].axis == 0
    np.testing.assert_allclose(curve.segments[0].start, [0.0, 0.0])
    np.testing.assert_allclose(curve.segments[0].end, [1.0, 0.0])
    assert curve.segments[1].axis == 1
    np.testing.assert_allclose(curve.segments[1].end, [1.0, 1.0])


def test_degenerate_curve_is_empty():
    for order in ((0, 1), (1, 0)):
        curve = make_staircase([0.5, 0.5], [0.5, 0.5], order)
        assert curve.segments == ()


def test_zero_length_leg_dropped():
    curve = make_staircase([0.0, 0.0], [1.0, 0.0], (1, 0))
    assert len(curve) == 1
    assert curve.segments[0].axis == 0
    assert curve.segments[0].length == pytest.approx(1.0)


def test_displacement_matches_per_axis():
    curve = make_staircase([0.2, 0.1, 0.0], [0.5, 0.1, 0.9], (2, 0, 1))
    total = np.zeros(3)
    for seg in curve.segments:
        total[seg.axis] += seg.length
    np.testing.assert_allclose(total, [0.3, 0.0, 0.9])


def test_segments_nondecreasing_and_connected():
    curve = make_staircase([0.1, 0.2], [0.9, 0.8], (1, 0))
    cursor = curve.start
    for seg in curve.segments:
        np.testing.assert_allclose(seg.start, cursor)
        assert np.all(seg.end >= seg.start)
        cursor = seg.end
    np.testing.assert_allclose(cursor, curve.end)


def test_non_increasing_endpoints_rejected():
    with pytest.raises(NonIncreasingEndpoints):
        make_staircase([0.5, 0.0], [0.2, 1.0])


def test_out_of_domain_rejected():
    with pytest.raises(OutOfDomain):
        make_staircase([-0.1, 0.0], [1.0, 1.0])
    with pytest.raises(OutOfDomain):
        make_staircase([0.0, 0.0], [1.5, 1.0], horizon=[1.0, 1.0])


def test_bad_axis_order_rejected():
    with pytest.raises(ValueError, match="permutation"):
        make_staircase([0.0, 0.0], [1.0, 1.0], (0, 0))


def test_constant_signal():
    sig = ControlSignal.constant(1, 0, 3)
    assert len(sig) == 3
    assert sig.pairs == ((1, 0), (1, 0), (1, 0))
