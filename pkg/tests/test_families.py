import numpy as np
import pytest

from multitime_games.families import Family

BLOCKS = (2, 1, 1, 1)  # (t, x, u, v) sizes used by most fixtures here


def test_constant_family():
    fam = Family.constant([[1.0], [2.0]], BLOCKS)
    t, x, u, v = np.array([0.3, 0.4]), np.array([5.0]), np.array([1.0]), np.array([-1.0])
    assert fam.evaluate(0, t=t, x=x, u=u, v=v) == pytest.approx([1.0])
    assert fam.evaluate(1, t=t, x=x, u=u, v=v) == pytest.approx([2.0])


def test_affine_family():
    fam = Family.affine_state([[[2.0]], [[0.0]]], offset=[[1.0], [3.0]], blocks=BLOCKS)
    out0 = fam.evaluate(0, t=[0, 0], x=[4.0], u=[0.0], v=[0.0])
    out1 = fam.evaluate(1, t=[0, 0], x=[4.0], u=[0.0], v=[0.0])
    assert out0 == pytest.approx([9.0])   # 2*4 + 1
    assert out1 == pytest.approx([3.0])


def test_bilinear_family_with_state_term():
    # x + u*v in direction 0, x - u*v in direction 1
    fam = Family.bilinear_controls(
        quad=[[[[1.0]]], [[[-1.0]]]],
        state_linear=[[[1.0]], [[1.0]]],
        blocks=BLOCKS,
    )
    args = dict(t=[0.0, 0.0], x=[0.5], u=[1.0], v=[-1.0])
    assert fam.evaluate(0, **args) == pytest.approx([0.5 - 1.0])
    assert fam.evaluate(1, **args) == pytest.approx([0.5 + 1.0])


def test_polynomial_family_cubic_and_batched():
    # 3*t1*x^2 + u*v, evaluated against a direct loop
    fam = Family.polynomial(
        [[[(3.0, (1, 0, 2, 0, 0)), (1.0, (0, 0, 0, 1, 1))]]],
        blocks=BLOCKS, outputs=1,
    )
    t, u, v = np.array([0.5, 0.0]), np.array([2.0]), np.array([-3.0])
    xs = np.linspace(-2, 2, 7).reshape(-1, 1)
    batched = fam.evaluate(0, t=t, x=xs, u=u, v=v)
    for x, got in zip(xs, batched):
        assert got[0] == pytest.approx(3.0 * 0.5 * x[0] ** 2 + 2.0 * -3.0)


def test_terminal_block_layout():
    fam = Family.polynomial([[[(0.25, (2,))]]], blocks=(0, 1, 0, 0), outputs=1)
    assert fam.evaluate(0, x=[4.0]) == pytest.approx([4.0])
    assert fam.evaluate(0, x=np.array([[1.0], [2.0]])) == pytest.approx([0.25, 1.0])


def test_degree_guard():
    with pytest.raises(ValueError, match="degree"):
        Family.polynomial([[[(1.0, (4, 0, 0, 0, 0))]]], blocks=BLOCKS, outputs=1)


def test_exponent_length_guard():
    with pytest.raises(ValueError, match="length"):
        Family.polynomial([[[(1.0, (1, 0))]]], blocks=BLOCKS, outputs=1)


def test_nonfinite_coefficient_rejected():
    with pytest.raises(ValueError, match="finite"):
        Family.constant([[np.inf], [0.0]], BLOCKS)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        Family.affine_state([[[1.0, 2.0]]], blocks=BLOCKS)  # n=2 vs block n=1


def test_to_dict_roundtrip():
    fam = Family.bilinear_controls(quad=[[[[2.0]]], [[[0.5]]]], blocks=BLOCKS)
    doc = fam.to_dict()
    terms = [
        [[(term["coeff"], tuple(term["powers"])) for term in comp] for comp in per_dir]
        for per_dir in doc["terms"]
    ]
    back = Family.polynomial(terms, blocks=BLOCKS, outputs=1)
    args = dict(t=[0.1, 0.9], x=[1.5], u=[-1.0], v=[1.0])
    for d in range(2):
        assert back.evaluate(d, **args) == pytest.approx(fam.evaluate(d, **args))
