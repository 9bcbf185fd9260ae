import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from twospec.errors import (
    InfinityNotEvaluable,
    NegativeLinearCoefficient,
    NonpositiveResidue,
    NotNormalForm,
    PoleEvaluation,
    UnorderedPoles,
)
from twospec.hn_functions import Polynomial, RationalBoundaryFunction as R, wronskian_part


@st.composite
def boundary_functions(draw, max_poles=3):
    d = draw(st.integers(0, max_poles))
    poles = sorted(draw(st.lists(st.floats(-20, 20), min_size=d, max_size=d, unique=True)))
    assume(all(b - a > 1e-2 for a, b in zip(poles, poles[1:])))
    residues = draw(st.lists(st.floats(0.05, 5), min_size=d, max_size=d))
    h0 = draw(st.sampled_from([0.0, 0.5, 1.0, 2.0]))
    h = draw(st.floats(-5, 5))
    assume(not (d and h0 == 0 and abs(h) < 1e-3))
    return R(h0=h0, h=h, poles=poles, residues=residues)


def _away_from_poles(f, x):
    return all(abs(x - p) > 1e-3 for p in f.poles)


# --- construction


def test_validation_errors():
    with pytest.raises(NonpositiveResidue):
        R(h=1, poles=[1], residues=[-1])
    with pytest.raises(UnorderedPoles):
        R(h=1, poles=[2, 1], residues=[1, 1])
    with pytest.raises(NegativeLinearCoefficient):
        R(h0=-1)
    with pytest.raises(NotNormalForm):
        R(poles=[1], residues=[1])


def test_error_message_names_class():
    with pytest.raises(NonpositiveResidue, match="^NonpositiveResidue"):
        R(h=1, poles=[1], residues=[0])


def test_serialization_round_trip():
    f = R(h0=0.5, h=1, poles=[1, 3], residues=[1, 2])
    assert R.from_dict(f.to_dict()) == f
    assert R.from_dict("infinity").is_infinity
    with pytest.raises(ValueError):
        R.from_dict({"h": 1, "extra": 0})


# --- fraction parts and index


def test_fraction_parts_examples():
    up, down = R().fraction_parts()
    assert up.coefficients == (0.0,) and down.coefficients == (1.0,)
    up, down = R(h=1, poles=[1], residues=[1]).fraction_parts()
    # (1 + 1/(1-x)) (1-x) = 2 - x
    assert up.coefficients == (2.0, -1.0)
    assert down.coefficients == (1.0, -1.0)
    up, down = R.infinity().fraction_parts()
    assert up.coefficients == (-1.0,) and down.is_zero


@pytest.mark.parametrize(
    "f, expected",
    [
        (R(), 0),
        (R(h=3), 0),
        (R(h0=1), 1),
        (R(h=1, poles=[1], residues=[1]), 2),
        (R(h0=1, poles=[1], residues=[1]), 3),
        (R.infinity(), -1),
    ],
)
def test_index(f, expected):
    assert f.index == expected


def test_h0_prime_scales_down_part():
    f = R(h0=2.0, h=0.0)
    up, down = f.fraction_parts()
    assert down.coefficients == (0.5,)
    assert up.coefficients == (0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(boundary_functions(), st.lists(st.floats(-30, 30), min_size=1, max_size=20))
def test_fraction_parts_consistency(f, xs):
    up, down = f.fraction_parts()
    for x in xs:
        if not _away_from_poles(f, x):
            continue
        lhs = f(x) * down(x)
        rhs = up(x)
        scale = max(1.0, abs(rhs), abs(f(x)) * abs(down(x)))
        assert abs(lhs - rhs) <= 1e-12 * scale


@settings(max_examples=40, deadline=None)
@given(boundary_functions(), st.floats(-25, 25))
def test_wronskian_part_matches_derivative(f, x):
    assume(_away_from_poles(f, x))
    down = f.down(x)
    expected = f.derivative(x) * down ** 2
    assert wronskian_part(f, x) == pytest.approx(expected, rel=1e-9, abs=1e-12)


# --- evaluation


def test_evaluation_examples():
    assert R(h0=1)(2.0) == 2.0
    # 1/(1 - x) alone is outside normal form; the constant 1 keeps it inside
    g = R(h=1, poles=[1], residues=[1])
    assert g(0.0) == 2.0
    assert g.derivative(0.0) == 1.0
    with pytest.raises(PoleEvaluation):
        g(1.0)
    with pytest.raises(InfinityNotEvaluable):
        R.infinity()(0.0)


@settings(max_examples=60, deadline=None)
@given(boundary_functions(), st.data())
def test_monotone_between_poles(f, data):
    assume(f.d >= 1)
    edges = [-1e3, *f.poles, 1e3]
    k = data.draw(st.integers(0, len(edges) - 2))
    lo, hi = edges[k], edges[k + 1]
    a, b = sorted(data.draw(st.lists(st.floats(0.01, 0.99), min_size=2, max_size=2, unique=True)))
    xa, xb = lo + a * (hi - lo), lo + b * (hi - lo)
    assume(_away_from_poles(f, xa) and _away_from_poles(f, xb) and xb - xa > 1e-6)
    assert f(xa) < f(xb)
    assert f.derivative(xa) > 0


@settings(max_examples=40, deadline=None)
@given(boundary_functions())
def test_parity_limits(f):
    T = 1e8
    if f.index % 2:
        assert f(T) > 1e6 and f(-T) < -1e6
    else:
        assert f(T) == pytest.approx(f.h, abs=1e-6)
        assert f(-T) == pytest.approx(f.h, abs=1e-6)


# --- shift


def test_shift_examples():
    g = R().shift(1.0)
    assert g.h == 1.0
    up, down = g.fraction_parts()
    assert up.coefficients == (1.0,) and down.coefficients == (1.0,)
    f = R(h=1, poles=[1], residues=[1])
    assert f.shift(1.0).h == 2.0
    assert f.shift(1.0).down == f.down
    assert R(h0=1).shift(5.0).index == 1
    with pytest.raises(NotNormalForm):
        f.shift(-1.0)
    with pytest.raises(ValueError, match="alpha must be nonzero"):
        f.shift(0.0)


@settings(max_examples=60, deadline=None)
@given(boundary_functions(), st.floats(-4, 4))
def test_shift_fraction_parts(f, alpha):
    assume(abs(alpha) > 1e-3 and not (f.d and f.h0 == 0 and abs(f.h + alpha) < 1e-3))
    g = f.shift(alpha)
    up, down = f.fraction_parts()
    gup, gdown = g.fraction_parts()
    assert gdown == down
    expected = up + down * alpha
    n = max(len(gup.coefficients), len(expected.coefficients))
    a = np.pad(gup.coefficients, (0, n - len(gup.coefficients)))
    b = np.pad(expected.coefficients, (0, n - len(expected.coefficients)))
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * np.abs(b).max())


# dyadic values keep the round trip free of rounding
dyadic = st.integers(-64, 64).map(lambda k: k / 8)


@given(h=dyadic, alpha=dyadic, h0=st.sampled_from([0.0, 1.0]))
def test_shift_round_trip_exact(h, alpha, h0):
    assume(alpha != 0 and h != 0 and h + alpha != 0)
    f = R(h0=h0, h=h, poles=[1.5], residues=[0.25])
    assert f.shift(alpha).shift(-alpha) == f


# --- polynomial helper


def test_polynomial_basics():
    p = Polynomial.from_roots([1.0, 2.0], 3.0)
    assert p(1.0) == 0 and p(2.0) == 0 and p(0.0) == 6.0
    np.testing.assert_allclose(p.roots(), [1.0, 2.0])
    assert Polynomial([0.0, 0.0]).is_zero and Polynomial([]).degree == 0
    assert p.monic().coefficients[-1] == 1.0
