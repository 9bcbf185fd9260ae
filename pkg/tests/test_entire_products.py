import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from twospec import direct_solver as ds
from twospec.direct_solver import BoundaryValueProblem, Potential
from twospec.entire_products import (
    build,
    fit_asymptotics,
    fit_gap,
    interlace_check,
    scaled_derivative,
)
from twospec.errors import AmbiguousGapOrder, CommonPoint, InconsistentAsymptotics, NoHalfIntegerFit
from twospec.hn_functions import RationalBoundaryFunction as R

from conftest import cached_solve, neumann_mu

n31 = np.arange(31.0)


def _ksin(lam):
    """``sqrt(x) sin(sqrt(x) pi)``, ``cos(sqrt(x) pi)`` and ``sin(sqrt(x) pi)/sqrt(x)`` on the real line."""
    k = np.sqrt(np.asarray(lam, dtype=complex))
    with np.errstate(invalid="ignore", divide="ignore"):
        sinc = np.where(k == 0, np.pi, np.sin(k * np.pi) / np.where(k == 0, 1, k))
    return (k * np.sin(k * np.pi)).real, np.cos(k * np.pi).real, sinc.real


def closed_phi(h, H):
    """Characteristic function for ``q = 0``, ``f = h`` and ``F = H`` (``None`` is infinity)."""
    def phi(lam):
        ks, c, sc = _ksin(lam)
        if H is None:
            return -c + h * sc
        return H * (c - h * sc) + ks + h * c
    return phi


def closed_zeros(phi, count):
    grid = np.linspace(-60, (count + 3) ** 2, 40000)
    vals = phi(grid)
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0][:count]
    return np.array([brentq(phi, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15) for i in idx])


# --- construction and evaluation


def test_neumann_product_values():
    G = build(n31 ** 2, 0.0)
    assert G(0.25) == pytest.approx(0.5, abs=1e-6)
    assert G(-1.0) == pytest.approx(-np.sinh(np.pi), rel=1e-4)
    assert G.derivative(1.0) == pytest.approx(-np.pi / 2, rel=1e-4)
    assert G.derivative(0.0) == pytest.approx(np.pi, rel=1e-4)


def test_dirichlet_product_value():
    G = build((n31 + 0.5) ** 2, -0.5)
    assert G(0.0) == pytest.approx(-1.0, abs=1e-6)


def test_inconsistent_asymptotics():
    with pytest.raises(InconsistentAsymptotics):
        build((n31 + 0.8) ** 2, 0.0)


@pytest.mark.parametrize("h, H, L", [(0.0, 0.0, 0.0), (0.7, -0.4, 0.0), (-0.5, None, -0.5), (1.3, None, -0.5)])
def test_product_matches_closed_form(h, H, L):
    phi = closed_phi(h, H)
    G = build(closed_zeros(phi, 41), L)
    zs = closed_zeros(phi, 8)
    pts = np.linspace(-5, 30, 20)
    pts = pts[np.min(np.abs(pts[:, None] - zs[None, :]), axis=1) > 0.05]
    np.testing.assert_allclose(G(pts), phi(pts), rtol=1e-4)


def test_product_matches_direct_solver():
    q = Potential.trig(0.4, [0.8, -0.3], [0.5])
    p = BoundaryValueProblem(q, R(h=0.3), R(h=-0.2))
    lam = ds.eigenvalues(p, count=41).eigenvalues
    G = build(lam, p.L)
    pts = np.linspace(-5, 30, 20)
    pts = pts[np.min(np.abs(pts[:, None] - lam[None, :]), axis=1) > 0.05]
    np.testing.assert_allclose(G(pts), ds.char_Phi(p, pts), rtol=2e-3)


@pytest.mark.parametrize("key", ["neumann", "pole_cos"])
def test_first_order_growth(key):
    phi, _ = cached_solve(key, 41)
    G = build(phi.eigenvalues, phi.L)
    for lam in (-1e2, -1e3):
        z = complex(lam)
        ref = z ** (phi.L + 0.5) * np.sin((np.sqrt(z) + phi.L) * np.pi)
        assert abs(ref.imag) < 1e-6 * abs(ref)
        assert G(lam) / ref.real == pytest.approx(1.0, rel=0.1)


def test_growth_dirichlet():
    G = build((n31 + 0.5) ** 2, -0.5)
    for lam in (-1e2, -1e3):
        assert G(lam) / -np.cosh(np.sqrt(-lam) * np.pi) == pytest.approx(1.0, rel=0.1)


@settings(max_examples=30, deadline=None)
@given(st.floats(-20, 400))
def test_derivative_matches_central_difference(lam):
    phi, _ = cached_solve("pole_cos", 41)
    G = build(phi.eigenvalues, phi.L)
    h = 1e-5 * max(1.0, abs(lam))
    num = (G(lam + h) - G(lam - h)) / (2 * h)
    assert G.derivative(lam) == pytest.approx(num, rel=1e-6, abs=1e-6 * abs(G(lam + h) - G(lam - h)) / h)


def test_derivative_at_zero_is_removable():
    G = build(n31 ** 2, 0.0)
    ds_ = G.derivative(n31[1:11] ** 2)
    np.testing.assert_allclose(ds_, (-1.0) ** n31[1:11] * np.pi / 2, rtol=1e-4)


def test_scaled_derivative():
    phi, _ = cached_solve("pole_cos", 41)
    G = build(phi.eigenvalues, phi.L)
    n = np.arange(10, 36)
    ratio = scaled_derivative(G, phi.eigenvalues[n], n)
    np.testing.assert_allclose(ratio, np.pi / 2, rtol=0.05)


# --- fits


def test_fit_asymptotics_examples():
    L, s, res = fit_asymptotics(n31 ** 2)
    assert (L, abs(s) < 1e-10, res < 1e-8) == (0.0, True, True)
    L, s, res = fit_asymptotics((n31 + 0.5) ** 2)
    assert L == -0.5 and abs(s) < 1e-10
    n = np.arange(1, 41.0)
    seq = np.concatenate([[-2.0], (n - 1 + 1 / (np.pi * n)) ** 2])
    L, s, res = fit_asymptotics(seq)
    assert L == 1.0
    assert s == pytest.approx(1.0, abs=1e-4)


def test_no_half_integer_fit():
    with pytest.raises(NoHalfIntegerFit):
        fit_asymptotics((np.arange(40.0) + 0.25) ** 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(-1, 6), st.floats(-3, 3))
def test_fit_asymptotics_synthetic(twoL, sigma):
    L = twoL / 2
    n = np.arange(0, 60.0)
    m = n - L
    with np.errstate(divide="ignore"):
        root = np.where(m > 0.5, m + sigma / (np.pi * np.maximum(m, 1)), np.nan)
    seq = root ** 2
    # low-index values are free; pick any ascending prefix
    bad = ~np.isfinite(seq)
    k = int(bad.sum())
    seq[:k] = -10.0 * (k - np.arange(k)) + min(seq[k] - 1, 0)
    seq = np.sort(seq)
    fL, fs, _ = fit_asymptotics(seq)
    assert fL == L
    assert fs == pytest.approx(sigma, abs=2e-3)


@pytest.mark.parametrize("r", [0, 1])
def test_fit_gap_synthetic(r):
    L = 0.0
    n = np.arange(0, 50.0)
    lam = (n + 0.01) ** 2
    m = np.maximum(n - L, 1.0)
    mu = (np.sqrt(lam) - 0.3 / m ** (2 * r + 1)) ** 2
    got_r, nu = fit_gap(lam, mu, L)
    assert got_r == r
    assert nu == pytest.approx(0.3, rel=1e-6)


def test_fit_gap_neumann():
    lam = np.arange(41.0) ** 2
    r, nu = fit_gap(lam, neumann_mu(41), 0.0)
    assert r == 0
    assert nu == pytest.approx(1 / np.pi, rel=0.02)


def test_fit_gap_ambiguous():
    n = np.arange(50.0)
    rng = np.random.default_rng(0)
    mu = (n - 0.2 * (1 + rng.uniform(-1, 1, 50)) / np.maximum(n, 1) ** 2) ** 2
    with pytest.raises(AmbiguousGapOrder):
        fit_gap(n ** 2, mu, 0.0)


# --- interlacing


def test_interlace_examples():
    assert interlace_check([0, 1, 4], [-1, 0.5, 2]) == (True, "b_first")
    with pytest.raises(CommonPoint):
        interlace_check([0, 1], [0, 2])
    assert interlace_check([0, 3, 4], [1, 2, 5]) == (False, None)


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=40, unique=True))
def test_interlace_alternating(values):
    v = np.sort(values)
    a, b = v[0::2], v[1::2]
    assert interlace_check(a, b) == (True, "a_first")
    assert interlace_check(b, a) == (True, "b_first")
