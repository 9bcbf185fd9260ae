r"""Entire functions rebuilt from their zeros, and asymptotic fits of spectra.

For zeros :math:`\eta_n` with :math:`\sqrt{\eta_n} \approx n - L`,

.. math::

    G(\lambda) = -\prod_{n<L} (\eta_n - \lambda) \prod_{n=L} \pi(\eta_n - \lambda)
                 \prod_{n>L} \frac{\eta_n - \lambda}{(n-L)^2}.

Only finitely many zeros are known.  Beyond the last one the zeros are
completed by the model :math:`\sqrt{\eta_n} = m + b_1/m + b_2/m^2 + b_3/m^3`
with :math:`m = n - L` and :math:`b_1 = \sigma/\pi`; the
completed tail is multiplied out explicitly up to a large cut-off and the
remainder is summed in closed form with Hurwitz zeta values, so a
truncation error of order :math:`1/N` never enters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .errors import (
    AmbiguousGapOrder,
    CommonPoint,
    InconsistentAsymptotics,
    NoHalfIntegerFit,
    SolverError,
    VanishingNu,
)

_TAIL_MIN = 4000
_TAIL_ZETA_TERMS = 14


def _is_half_integer(L: float) -> bool:
    return abs(2 * L - round(2 * L)) < 1e-12


@dataclass(frozen=True)
class ProductFunction:
    """Product over `base` zeros with a fitted tail ``(L, sigma, b2, b3)``.

    Call the instance to evaluate; :meth:`derivative` gives the exact
    derivative of the same completed product.
    """

    base: np.ndarray
    L: float
    sigma: float
    b2: float = 0.0
    b3: float = 0.0

    @property
    def N(self) -> int:
        return len(self.base) - 1

    def _factors(self):
        n = np.arange(len(self.base), dtype=float)
        c = np.where(n < self.L - 1e-12, 1.0, np.where(np.abs(n - self.L) < 1e-12, np.pi, 0.0))
        big = n > self.L + 1e-12
        c[big] = 1.0 / (n[big] - self.L) ** 2
        return c

    def _tail_zeros(self, lam_abs_max: float) -> tuple[np.ndarray, np.ndarray, float]:
        """Explicit synthetic tail: returns (zeros, m = n - L, first remaining m)."""
        m_cut = max(_TAIL_MIN, 10.0 * np.sqrt(lam_abs_max), self.N + 10)
        n = np.arange(self.N + 1, int(np.ceil(m_cut + self.L)) + 1, dtype=float)
        m = n - self.L
        b1 = self.sigma / np.pi
        eta = (m + b1 / m + self.b2 / m ** 2 + self.b3 / m ** 3) ** 2
        return eta, m, float(n[-1] + 1 - self.L)

    def _tail(self, lam: np.ndarray, with_derivative: bool):
        eta, m, q0 = self._tail_zeros(float(np.max(np.abs(lam), initial=0.0)))
        t = (eta[None, :] - lam[:, None]) / (m * m)[None, :]
        near = np.abs(eta[None, :] - lam[:, None]) <= 1e-8 * np.maximum(1.0, np.abs(lam[:, None]))
        if with_derivative and np.any(near):
            raise SolverError("evaluation at a synthetic tail zero")
        logabs = np.sum(np.log(np.abs(t)), axis=1)
        sign = np.prod(np.sign(t), axis=1)
        b1 = self.sigma / np.pi
        z = {s: zeta(s, q0) for s in (2, 3, 4)}
        rem = 2 * b1 * z[2] + 2 * self.b2 * z[3] + (2 * self.b3 - b1 * b1 + 2 * b1 * lam) * z[4]
        drem = 2 * b1 * z[4] + 0.0 * lam
        for j in range(1, _TAIL_ZETA_TERMS + 1):
            zj = zeta(2 * j, q0)
            rem = rem - lam ** j * zj / j
            drem = drem - lam ** (j - 1) * zj
        logabs = logabs + rem
        dlog = None
        if with_derivative:
            dlog = -np.sum(1.0 / (eta[None, :] - lam[:, None]), axis=1) + drem
        return logabs, sign, dlog

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=float)
        flat = lam.reshape(-1)
        diff = self.base[None, :] - flat[:, None]
        fin = diff * self._factors()[None, :]
        logabs, sign, _ = self._tail(flat, False)
        out = -np.prod(fin, axis=1) * sign * np.exp(logabs)
        return out.reshape(lam.shape)

    def derivative(self, lam):
        """Exact derivative; at a base zero the vanishing factor is removed."""
        lam = np.asarray(lam, dtype=float)
        flat = lam.reshape(-1)
        c = self._factors()
        diff = self.base[None, :] - flat[:, None]
        k = np.argmin(np.abs(diff), axis=1)
        rows = np.arange(len(flat))
        dk = diff[rows, k].copy()
        diff_wo = diff.copy()
        diff_wo[rows, k] = 1.0
        logabs, sign, dlog_tail = self._tail(flat, True)
        rest = -np.prod(diff_wo * c[None, :], axis=1) * sign * np.exp(logabs)
        inv = -1.0 / diff_wo
        inv[rows, k] = 0.0
        dlog_rest = inv.sum(axis=1) + dlog_tail
        out = -rest + dk * rest * dlog_rest
        return out.reshape(lam.shape)


def build(zeros, L: float, sigma: float | None = None, tail: tuple[float, float] | None = None) -> ProductFunction:
    """Product function from ascending zeros.

    The tail ``(sigma, b2, b3)`` is fitted from the data unless given.  With
    only `sigma` supplied the tail follows ``sqrt(eta_n) = n - L + sigma/(pi n)``
    to third order.
    """
    eta = np.asarray(zeros, dtype=float)
    if eta.ndim != 1 or len(eta) < 3:
        raise ValueError("at least 3 zeros are required")
    if np.any(np.diff(eta) <= 0):
        raise ValueError("zeros must be strictly ascending")
    if not _is_half_integer(L) or L < -0.5:
        raise ValueError(f"L must be an integer or half-integer >= -1/2, got {L}")
    N = len(eta) - 1
    if N <= L:
        raise InconsistentAsymptotics("not enough zeros beyond the index L")
    if eta[-1] < 0 or abs(np.sqrt(eta[-1]) - (N - L)) > 0.5:
        raise InconsistentAsymptotics(f"sqrt(eta_N) = {np.sqrt(max(eta[-1], 0)):.6g} vs N - L = {N - L}")
    if sigma is None and len(eta) >= 10:
        b1, b2, b3 = fit_tail(eta, L)
        return ProductFunction(eta, float(L), float(np.pi * b1), b2, b3)
    if sigma is None:
        sigma = float(np.pi * N * (np.sqrt(eta[-1]) - N + L))
    if tail is None:
        # sigma/(pi n) expanded in powers of 1/(n - L)
        tail = (-L * sigma / np.pi, L * L * sigma / np.pi)
    return ProductFunction(eta, float(L), float(sigma), float(tail[0]), float(tail[1]))


# ---------------------------------------------------------------------------
# asymptotic fits


def _top(values, fraction: float):
    n = np.arange(len(values), dtype=float)
    start = max(1, int(np.floor(len(values) * (1 - fraction))))
    return n[start:], np.asarray(values, dtype=float)[start:]


def _weighted_intercept(n, y, terms: int = 3):
    """Weighted (n^2) least squares of ``y`` on ``1, 1/n, ..., 1/n^(terms-1)``."""
    terms = min(terms, len(n) - 1) if len(n) > 1 else 1
    A = np.stack([n ** -k for k in range(terms)], axis=1)
    w = n  # square root of the n^2 weights
    coef, *_ = np.linalg.lstsq(A * w[:, None], y * w, rcond=None)
    return float(coef[0])


def _roots_of_top(zeros, fraction):
    n, lam = _top(zeros, fraction)
    if np.any(lam <= 0):
        raise InconsistentAsymptotics("nonpositive eigenvalues in the asymptotic range")
    return n, np.sqrt(lam)


def _fit_coefficients(n, y, terms):
    A = np.stack([n ** -k for k in range(terms)], axis=1)
    coef, *_ = np.linalg.lstsq(A * n[:, None], y * n, rcond=None)
    return coef


def fit_tail(zeros, L: float) -> tuple[float, float, float]:
    """Coefficients ``b1, b2, b3`` of ``sqrt(eta_n) - m`` in powers of ``1/m``, ``m = n - L``."""
    n, root = _roots_of_top(zeros, 1 / 3)
    m = n - L
    if np.any(m <= 0):
        raise InconsistentAsymptotics("asymptotic range must lie beyond n = L")
    coef = _fit_coefficients(m, m * (root - m), min(4, len(m) - 1))
    coef = np.concatenate([coef, np.zeros(3)])
    return float(coef[0]), float(coef[1]), float(coef[2])


def fit_sigma(zeros, L: float) -> tuple[float, float]:
    """``sigma`` and weighted RMS remainder of ``pi n (sqrt(lam_n) - n + L)``."""
    sigma = np.pi * fit_tail(zeros, L)[0]
    n, root = _roots_of_top(zeros, 1 / 3)
    y = np.pi * n * (root - n + L)
    w = n ** 2
    resid = float(np.sqrt(np.sum(w * (y - sigma) ** 2) / np.sum(w)))
    return sigma, resid


def fit_asymptotics(zeros) -> tuple[float, float, float]:
    """Fit ``sqrt(lam_n) = n - L + sigma/(pi n) + ...``.

    Returns ``(L, sigma, residual)``.  `L` is snapped to the nearest
    half-integer; the residual is the weighted RMS of what remains after
    removing `sigma`, an admissibility score that vanishes for exact data.
    """
    zeros = np.asarray(zeros, dtype=float)
    if len(zeros) < 10:
        raise ValueError("at least 10 values are needed for an asymptotic fit")
    n, root = _roots_of_top(zeros, 1 / 3)
    L_raw = _weighted_intercept(n, n - root)
    L = round(2 * L_raw) / 2
    if abs(L_raw - L) > 0.2:
        raise NoHalfIntegerFit(f"limit of n - sqrt(lam_n) is {L_raw:.4g}")
    sigma, resid = fit_sigma(zeros, L)
    return float(L), sigma, resid


def fit_gap(lambdas, mus, L: float) -> tuple[int, float]:
    """Order ``r`` and constant ``nu`` of ``sqrt(lam_n) - sqrt(mu_n) ~ nu (n-L)^(-2r-1)``.

    `r` minimises the coefficient of variation of the scaled gaps over the
    top half of the data.
    """
    lam = np.asarray(lambdas, dtype=float)
    mu = np.asarray(mus, dtype=float)
    m = min(len(lam), len(mu))
    n, rl = _roots_of_top(lam[:m], 1 / 2)
    _, rm = _roots_of_top(mu[:m], 1 / 2)
    gap = rl - rm
    best = None
    for r in (0, 1):
        v = gap * (n - L) ** (2 * r + 1)
        mean = float(np.mean(v))
        cv = float(np.std(v) / abs(mean)) if mean != 0 else np.inf
        if best is None or cv < best[0]:
            best = (cv, r, v)
    cv, r, v = best
    if not cv < 0.25:
        raise AmbiguousGapOrder(f"scaled gaps do not settle (coefficient of variation {cv:.3g})")
    nu = _weighted_intercept(n - L, v, terms=6)
    if abs(nu) < 1e-9:
        raise VanishingNu(f"nu = {nu:.3g}")
    return r, nu


def interlace_check(a, b) -> tuple[bool, str | None]:
    """Whether `a` and `b` strictly alternate, and which sequence comes first."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    common = np.intersect1d(a, b)
    if len(common):
        raise CommonPoint(f"value {float(common[0])!r} occurs in both sequences")
    vals = np.concatenate([a, b])
    owner = np.concatenate([np.zeros(len(a), int), np.ones(len(b), int)])
    order = owner[np.argsort(vals, kind="stable")]
    if len(order) == 0:
        return True, None
    first = "a_first" if order[0] == 0 else "b_first"
    ok = bool(np.all(order[1:] != order[:-1]))
    return (ok, first) if ok else (False, None)


def scaled_derivative(G: ProductFunction, points, n):
    """``(-1)^n (n-L)^(-2L) G'(points)``, which tends to pi/2."""
    n = np.asarray(n, dtype=float)
    return (-1.0) ** n * (n - G.L) ** (-2 * G.L) * G.derivative(points)
