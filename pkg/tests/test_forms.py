import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratcurves.forms import Form, NotHomogeneous, monomials
from ratcurves.gf import gf


def test_parse_and_repr():
    phi = Form.parse("x0*x3 - x1*x2", 4, 5)
    assert phi.terms == {(1, 0, 0, 1): 1, (0, 1, 1, 0): 4}
    assert Form.parse("x0^2 + 2*x1**2", 2, 5).terms == {(2, 0): 1, (0, 2): 2}
    assert "x0" in repr(phi)


def test_homogeneity_enforced():
    with pytest.raises(NotHomogeneous):
        Form(3, 2, 5, {(1, 0, 0): 1})
    with pytest.raises(NotHomogeneous):
        Form.parse("x0 + x1^2", 2, 5)


def test_json_round_trip():
    phi = Form.parse("x0*x1 - 3*x2^2", 3, 7)
    raw = phi.to_json()
    assert raw["nvars"] == 3 and raw["degree"] == 2
    assert Form.from_json(raw, 7) == phi


def test_monomial_count():
    assert len(monomials(4, 2)) == 10
    assert len(monomials(3, 3)) == 10


def test_arithmetic():
    x = [Form.variable(i, 3, 5) for i in range(3)]
    q = x[0] * x[1] - x[2] * x[2]
    assert (q - q).is_zero()
    assert (x[0] + x[1]) ** 2 == x[0] * x[0] + 2 * (x[0] * x[1]) + x[1] * x[1]
    assert (5 * q).is_zero()


def test_split_and_partial():
    phi = Form.parse("x0*x3 + 2*x3^2 + x1*x2", 4, 5)
    g = phi.split_last()
    assert [h.degree for h in g] == [2, 1, 0]
    assert g[1] == Form.parse("x0", 3, 5)
    assert phi.partial(3) == Form.parse("x0 + 4*x3", 4, 5)


@st.composite
def forms(draw, nvars=3, degree=3, p=7):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return Form.random(nvars, degree, p, np.random.default_rng(seed))


@settings(max_examples=50)
@given(forms(), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_evaluation_is_multiplicative(phi, pt):
    f = gf(7)
    psi = phi * Form.variable(0, 3, 7)
    assert psi(pt, f) == (phi(pt, f) * pt[0]) % 7


@settings(max_examples=30)
@given(forms(), st.integers(0, 2 ** 32 - 1))
def test_substitution_matches_evaluation(phi, seed):
    f = gf(7)
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, 7, (3, 3))
    images = [Form.linear(row.tolist(), 7) for row in mat]
    sub = phi.substitute(images)
    for pt in rng.integers(0, 7, (5, 3)):
        assert sub(pt, f) == phi((mat @ pt) % 7, f)


def test_evaluation_over_extension():
    f = gf(5, 2)
    phi = Form.parse("x0^2 - 2*x1^2", 2, 5)  # 2 is not a square mod 5
    pts = np.array([[a, 1] for a in range(25)])
    roots = pts[phi.evaluate(pts, f) == 0]
    assert len(roots) == 2
    assert gf(5).p == phi.p
    with pytest.raises(ValueError):
        phi.evaluate(pts, gf(7))
