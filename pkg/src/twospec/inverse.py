"""Two-spectra inverse pipeline.

Given the spectra ``lambda_n`` of ``P(q, f, F)`` and ``mu_n`` of
``P(q, f + alpha, F)``, rebuild both characteristic functions as products,
locate the real zeros ``tau_k`` of ``Phi - Psi``, choose a finite index set
to form ``p(lam) = prod(tau_{i_k} - lam)``, synthesise the norming constants
and recover the pole polynomial of ``f`` from the Hankel moment system.
Reconstruction of the potential itself from ``(lambda_n, gamma_n)`` is not
attempted here.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta

from . import direct_solver as ds
from .entire_products import (
    ProductFunction,
    build,
    fit_asymptotics,
    fit_gap,
    fit_sigma,
    interlace_check,
)
from .errors import (
    CardinalityExceeded,
    DirectionMismatch,
    ExceptionCase,
    InadmissibleData,
    IndefiniteHankel,
    InsufficientZerosFound,
    NoHalfIntegerFit,
    NonpositiveGamma,
    NotInterlacing,
    PoleTauMismatch,
    TailTooLarge,
)
from .hn_functions import Polynomial


@dataclass(frozen=True)
class TwoSpectraData:
    """Validated pair of spectra with their fitted asymptotic parameters."""

    lambdas: np.ndarray
    mus: np.ndarray
    L: float
    sigma: float
    sigma_mu: float
    nu: float
    r: int
    residual: float = 0.0

    @property
    def N(self) -> int:
        return len(self.lambdas) - 1

    @property
    def max_cardinality(self) -> int:
        return int(math.floor(self.L + (1 - self.r) / 2 + 1e-12))

    def swapped(self) -> "TwoSpectraData":
        """Exchange the sequences but keep ``nu`` (used to probe admissibility)."""
        return TwoSpectraData(self.mus, self.lambdas, self.L, self.sigma_mu, self.sigma, self.nu, self.r, self.residual)


@dataclass(frozen=True)
class InverseOutput:
    index_set: tuple[int, ...]
    taus: np.ndarray
    p: Polynomial
    gammas: np.ndarray
    alpha: float
    h0_prime: float
    d: int
    r: int
    L: float
    lambdas: np.ndarray
    asymptotic_ratios: np.ndarray
    asymptotics_ok: bool

    @property
    def recovered_down(self) -> Polynomial:
        return self.p * self.h0_prime


def validate_two_spectra(lambdas, mus) -> TwoSpectraData:
    """Check interlacing and asymptotics, and fit ``L, sigma, nu, r``."""
    lam = np.asarray(lambdas, dtype=float)
    mu = np.asarray(mus, dtype=float)
    if len(lam) != len(mu) or len(lam) < 10:
        raise ValueError("the spectra must have equal length of at least 10")
    if np.any(np.diff(lam) <= 0) or np.any(np.diff(mu) <= 0):
        raise ValueError("spectra must be strictly ascending")
    ok, order = interlace_check(lam, mu)
    if not ok:
        raise NotInterlacing("the two sequences do not alternate")
    L, sigma, resid = fit_asymptotics(lam)
    if L < -0.5:
        raise NoHalfIntegerFit(f"L = {L} is below -1/2")
    L_mu = fit_asymptotics(mu)[0]
    if L_mu != L:
        raise NotInterlacing(f"spectra have different shifts L = {L} and {L_mu}")
    sigma_mu = fit_sigma(mu, L)[0]
    r, nu = fit_gap(lam, mu, L)
    if L == -0.5 and r == 1:
        raise ExceptionCase("L = -1/2 together with r = 1")
    expected = "b_first" if nu > 0 else "a_first"
    if order != expected:
        raise DirectionMismatch(f"nu = {nu:.6g} but ordering is {order}")
    return TwoSpectraData(lam, mu, L, sigma, sigma_mu, nu, r, resid)


def products(data: TwoSpectraData) -> tuple[ProductFunction, ProductFunction]:
    return build(data.lambdas, data.L), build(data.mus, data.L)


# ---------------------------------------------------------------------------
# zeros of Phi - Psi


def _scan(g, lo: float, hi: float, knots: np.ndarray, per_cell: int = 8, depth: int = 6):
    knots = np.unique(np.concatenate([[lo, hi], knots[(knots > lo) & (knots < hi)]]))
    pts = [np.linspace(a, b, per_cell + 1)[:-1] for a, b in zip(knots[:-1], knots[1:])]
    x = np.concatenate(pts + [[hi]])
    y = g(x)
    brackets = []
    stack = [(x[i], x[i + 1], y[i], y[i + 1], 0) for i in range(len(x) - 1)]
    while stack:
        a, b, ya, yb, lev = stack.pop()
        if ya == 0.0:
            brackets.append((a, a))
            continue
        if np.sign(ya) != np.sign(yb) and yb != 0.0:
            brackets.append((a, b))
            continue
        if lev >= depth:
            continue
        mid = 0.5 * (a + b)
        ym = float(g(np.array([mid]))[0])
        if abs(ym) < 1e-3 * min(abs(ya), abs(yb)) or np.sign(ym) != np.sign(ya):
            stack.append((a, mid, ya, ym, lev + 1))
            stack.append((mid, b, ym, yb, lev + 1))
    return sorted(brackets)


def tau_scan(Phi: ProductFunction, Psi: ProductFunction, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """All zeros of ``Phi - Psi`` found in ``[lo, hi]`` (default: the data range)."""
    lam, mu = Phi.base, Psi.base
    if lo is None:
        lo = min(lam[0], mu[0]) - (lam[1] - lam[0])
    if hi is None:
        hi = lam[-1]

    def g(x):
        return Phi(x) - Psi(x)

    roots = []
    for a, b in _scan(g, lo, hi, np.concatenate([lam, mu])):
        if a == b:
            roots.append(a)
            continue
        roots.append(brentq(lambda t: float(g(np.array([t]))[0]), a, b, xtol=1e-14, rtol=1e-12, maxiter=200))
    return np.unique(np.asarray(roots, dtype=float))


def tau_zeros(Phi: ProductFunction, Psi: ProductFunction, K: int) -> np.ndarray:
    """The `K` smallest real zeros of ``Phi - Psi``."""
    if Phi.L != Psi.L:
        raise ValueError("both products must share L")
    if K < 1:
        raise ValueError("K must be positive")
    taus = tau_scan(Phi, Psi)
    if len(taus) < K:
        raise InsufficientZerosFound(f"found {len(taus)} zeros of Phi - Psi, {K} requested")
    return taus[:K]


# ---------------------------------------------------------------------------
# norming constants and the pole polynomial


def gamma_asymptotic_ratio(gammas, L: float, d: int, r: int) -> np.ndarray:
    """``gamma_n (2/pi) (n-L)^(-4d-2r)``, tending to 1 for admissible data."""
    n = np.arange(len(gammas), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.asarray(gammas) * (2 / np.pi) * np.abs(n - L) ** (-4 * d - 2 * r)


def synthesize_gammas(Phi: ProductFunction, Psi: ProductFunction, p: Polynomial, nu: float) -> np.ndarray:
    lam = Phi.base
    return np.pi * nu * p(lam) ** 2 * Phi.derivative(lam) / Psi(lam)


def recover_spectral_data(data: TwoSpectraData, index_set=()) -> InverseOutput:
    """Norming constants for the problem selected by `index_set`.

    The observable ``nu = alpha h0'^2 / pi`` does not separate ``alpha`` from
    ``h0'``; the output uses ``h0' = 1`` (``h0 = 0`` when ``r = 0``, ``h0 = 1``
    when ``r = 1``) and reports ``alpha = pi nu``.
    """
    idx = tuple(sorted(int(i) for i in index_set))
    if len(set(idx)) != len(idx) or any(i < 0 for i in idx):
        raise ValueError("indices must be distinct nonnegative integers")
    d = len(idx)
    if d > data.max_cardinality:
        raise CardinalityExceeded(f"d = {d} > L + (1 - r)/2 = {data.L + (1 - data.r) / 2}")
    Phi, Psi = products(data)
    taus = tau_zeros(Phi, Psi, max(idx) + 1) if d else _taus_best_effort(Phi, Psi)
    p = Polynomial.from_roots([taus[i] for i in idx])
    gammas = synthesize_gammas(Phi, Psi, p, data.nu)
    if np.any(gammas <= 0):
        bad = np.flatnonzero(gammas <= 0)
        raise NonpositiveGamma(f"gamma_{bad[0]} = {gammas[bad[0]]:.6g} ({len(bad)} nonpositive)")
    ratios = gamma_asymptotic_ratio(gammas, data.L, d, data.r)
    n_check = (3 * data.N) // 4
    ok = bool(abs(ratios[n_check] - 1) <= 0.05)
    return InverseOutput(
        idx, taus, p, gammas, math.pi * data.nu, 1.0, d, data.r, data.L,
        data.lambdas, ratios, ok,
    )


def _taus_best_effort(Phi, Psi):
    try:
        return tau_scan(Phi, Psi)
    except (ValueError, ArithmeticError):
        return np.array([])


def _tail_sum(n, terms, L: float, exponent: float, N: int):
    """Sum over ``n > N`` of a sequence behaving like ``(n-L)^exponent``.

    The top third of `terms` is fitted by ``(n-L)^e (c0 + c1/(n-L) + c2/(n-L)^2)``
    and the model is summed with Hurwitz zeta values.  Returns the estimate and
    the change against a two-term model, used as an error bound.
    """
    start = max(1, len(n) - max(len(n) // 3, 6))
    m = n[start:] - L
    y = terms[start:] * m ** (-exponent)
    q0 = N + 1 - L
    est = []
    for k in (2, 3):
        A = np.stack([m ** -j for j in range(k)], axis=1)
        coef, *_ = np.linalg.lstsq(A * m[:, None], y * m, rcond=None)
        est.append(sum(c * zeta(j - exponent, q0) for j, c in enumerate(coef)))
    return float(est[1]), float(abs(est[1] - est[0]))


def moment_sums(lambdas, gammas, count: int, L: float, d: int, r: int):
    """Tail-corrected ``s_k = sum lam_n^k / gamma_n`` for ``k < count``.

    Returns the sums and the accompanying tail error bounds.
    """
    lam = np.asarray(lambdas, dtype=float)
    g = np.asarray(gammas, dtype=float)
    n = np.arange(len(lam), dtype=float)
    s, bounds = [], []
    for k in range(count):
        terms = lam ** k / g
        tail, bound = _tail_sum(n, terms, L, 2 * k - 4 * d - 2 * r, len(lam) - 1)
        s.append(terms.sum() + tail)
        bounds.append(bound)
    return np.array(s), np.array(bounds)


def hankel_recover_down(lambdas, gammas, d: int, L: float, r: int, *, tol_hankel: float = 1e-4, full_output: bool = False):
    """Monic pole polynomial from the Hankel moment system.

    Solves ``sum_i p_i s_{i+k} = -s_{d+k}``, ``k < d``.  The Hankel matrix
    must be positive definite; the moment tails must be known to
    ``tol_hankel`` relative to each moment.
    """
    if d == 0:
        poly = Polynomial([1.0])
        info = {"moments": np.array([]), "min_eigenvalue": None, "tail_bounds": np.array([])}
        return (poly, info) if full_output else poly
    s, bounds = moment_sums(lambdas, gammas, 2 * d, L, d, r)
    rel = bounds / np.abs(s)
    if np.any(rel > tol_hankel):
        raise TailTooLarge(f"moment tail uncertainty {rel.max():.3g} exceeds {tol_hankel:g}")
    H = np.array([[s[i + j] for j in range(d)] for i in range(d)])
    eig_min = float(np.linalg.eigvalsh(H).min())
    if not eig_min > 0:
        raise IndefiniteHankel(f"smallest eigenvalue {eig_min:.3g}")
    rhs = -np.array([s[d + k] for k in range(d)])
    coef = np.linalg.solve(H, rhs)
    poly = Polynomial(list(coef) + [1.0])
    info = {"moments": s, "min_eigenvalue": eig_min, "tail_bounds": bounds}
    return (poly, info) if full_output else poly


def zero_sum_residuals(lambdas, gammas, down: Polynomial, L: float, r: int):
    """Tail-corrected ``sum lam_n^k f_down(lam_n) / gamma_n`` for ``k < d``."""
    lam = np.asarray(lambdas, dtype=float)
    g = np.asarray(gammas, dtype=float)
    d = down.degree
    n = np.arange(len(lam), dtype=float)
    out = []
    for k in range(d):
        terms = lam ** k * down(lam) / g
        tail, _ = _tail_sum(n, terms, L, 2 * k - 2 * d - 2 * r, len(lam) - 1)
        out.append(terms.sum() + tail)
    return np.array(out)


# ---------------------------------------------------------------------------
# correspondence and round trips


@dataclass
class Candidate:
    index_set: tuple[int, ...]
    output: InverseOutput | None
    note: str = ""


def enumerate_candidates(data: TwoSpectraData, K_max: int) -> tuple[list[InverseOutput], list[Candidate]]:
    """Try every index set below `K_max` within the cardinality bound.

    Returns the admissible outputs and the full attempt log (with the reason
    for each rejection).
    """
    attempts: list[Candidate] = []
    for size in range(data.max_cardinality + 1):
        for idx in itertools.combinations(range(K_max), size):
            try:
                out = recover_spectral_data(data, idx)
            except InadmissibleData as exc:
                attempts.append(Candidate(idx, None, str(exc)))
                continue
            except InsufficientZerosFound as exc:
                attempts.append(Candidate(idx, None, str(exc)))
                continue
            note = "" if out.asymptotics_ok else "gamma asymptotics off by more than 5%"
            attempts.append(Candidate(idx, out, note))
    good = [c.output for c in attempts if c.output is not None]
    g0 = [o.gammas[0] for o in good]
    for i, j in itertools.combinations(range(len(g0)), 2):
        if abs(g0[i] - g0[j]) <= 1e-12 * max(abs(g0[i]), abs(g0[j])):
            raise InadmissibleData(f"index sets {good[i].index_set} and {good[j].index_set} give the same gamma_0")
    return good, attempts


@dataclass
class RoundTripReport:
    N: int
    data: TwoSpectraData
    output: InverseOutput
    direct_gammas: np.ndarray
    recovered_down: Polynomial
    hankel_min_eigenvalue: float | None
    poles: np.ndarray
    gamma_rel_errors: np.ndarray
    pole_errors: np.ndarray
    tau_pole_errors: np.ndarray
    theory: dict
    fitted: dict
    zero_sums: np.ndarray = field(default_factory=lambda: np.array([]))

    @property
    def max_gamma_error(self) -> float:
        half = self.N // 2 + 1
        return float(np.max(self.gamma_rel_errors[:half]))

    @property
    def max_pole_error(self) -> float:
        return float(np.max(self.pole_errors, initial=0.0))


def match_poles(taus: np.ndarray, poles, tol: float = 1e-3) -> tuple[int, ...]:
    """Indices of the taus nearest to each pole; must be close and injective."""
    idx = []
    for h in poles:
        if len(taus) == 0:
            raise PoleTauMismatch(f"no zeros of Phi - Psi to match pole {h}")
        k = int(np.argmin(np.abs(taus - h)))
        if abs(taus[k] - h) > tol * (1 + abs(h)):
            raise PoleTauMismatch(f"pole {h} is {abs(taus[k] - h):.3g} from the nearest tau")
        idx.append(k)
    if len(set(idx)) != len(idx):
        raise PoleTauMismatch("two poles share one tau")
    return tuple(idx)


def roundtrip(problem: ds.BoundaryValueProblem, N: int, *, tol_hankel: float = 1e-4) -> RoundTripReport:
    """Direct spectra -> inverse pipeline -> comparison with the direct data."""
    if N < 20:
        raise ValueError("round trips need N >= 20")
    direct = ds.solve(problem, N + 1, "Phi")
    mus = ds.eigenvalues(problem, "Psi", N + 1).eigenvalues
    data = validate_two_spectra(direct.eigenvalues, mus)
    Phi, Psi = products(data)
    poles = np.asarray(problem.f.poles)
    hi = max(data.lambdas[-1], float(np.max(poles, initial=-np.inf)) + 1.0)
    taus = tau_scan(Phi, Psi, hi=hi) if len(poles) else np.array([])
    idx = match_poles(taus, poles)
    out = recover_spectral_data(data, idx)
    down, info = hankel_recover_down(data.lambdas, out.gammas, out.d, data.L, data.r, tol_hankel=tol_hankel, full_output=True)
    roots = down.roots()
    pole_err = np.abs(np.sort(np.real(roots)) - poles) if len(poles) else np.array([])
    tau_err = np.abs(taus[list(idx)] - poles) if len(poles) else np.array([])
    f = problem.f
    theory = {
        "L": problem.L,
        "nu": problem.alpha * f.h0_prime ** 2 / math.pi,
        "r": f.index - 2 * f.d,
        "sigma_difference": problem.alpha if f.index % 2 == 0 else 0.0,
    }
    fitted = {
        "L": data.L, "sigma": data.sigma, "sigma_mu": data.sigma_mu, "nu": data.nu, "r": data.r,
        "sigma_difference": data.sigma - data.sigma_mu,
    }
    zs = zero_sum_residuals(data.lambdas, direct.gammas, f.down, data.L, data.r)
    return RoundTripReport(
        N, data, out, direct.gammas, down, info["min_eigenvalue"], poles,
        np.abs(out.gammas / direct.gammas - 1), pole_err, tau_err, theory, fitted, zs,
    )
