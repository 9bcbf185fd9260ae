r"""Shooting solver for :math:`-y'' + q y = \lambda y` on :math:`[0, \pi]`.

The equation is written as the first-order system :math:`Y' = A(x) Y` with
:math:`Y = (y, y')` and propagated with the fourth-order two-point Gauss
Magnus method.  Each step is the exact exponential of a traceless
:math:`2 \times 2` matrix, so the error does not grow with :math:`\lambda`
in the oscillatory regime, and the method is exact for constant potentials.
All routines are vectorised over arrays of spectral parameters.

Eigenvalues are located with a Prufer phase: with
:math:`\theta = \operatorname{atan2}(s y, y')` the mismatch

.. math::

    D(\lambda) = \theta(\pi, \lambda) - \theta_F(\lambda)

is continuous and increasing, and the n-th eigenvalue solves
:math:`D(\lambda) = n\pi`.  Lifting of the initial and terminal angles across
poles of the boundary functions makes the count complete.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import (
    BracketingFailure,
    DegenerateNormalization,
    EigenvalueAtPoleOfF,
    EvaluationAtEigenvalue,
    NonfiniteState,
    NonpositiveGamma,
    StepSizeUnderflow,
)
from .hn_functions import RationalBoundaryFunction, fraction_parts, wronskian_part

_SQRT3 = math.sqrt(3.0)
_GAUSS = _SQRT3 / 6.0


# ---------------------------------------------------------------------------
# potentials


@dataclass(frozen=True)
class Potential:
    """Real potential on ``[0, pi]``.

    Use the constructors :meth:`zero`, :meth:`constant`, :meth:`trig` and
    :meth:`from_samples`.  Sampled potentials are interpolated piecewise
    linearly on a uniform grid; the analytic kinds are evaluated exactly.
    """

    kind: str
    params: tuple = ()
    samples: tuple[float, ...] = ()

    @classmethod
    def zero(cls) -> "Potential":
        return cls("zero")

    @classmethod
    def constant(cls, c: float) -> "Potential":
        return cls("constant", (float(c),))

    @classmethod
    def trig(cls, a0: float = 0.0, cos: Sequence[float] = (), sin: Sequence[float] = ()) -> "Potential":
        """``a0 + sum_k cos[k-1] cos(kx) + sin[k-1] sin(kx)``."""
        return cls("trig", (float(a0), tuple(map(float, cos)), tuple(map(float, sin))))

    @classmethod
    def from_samples(cls, values: Sequence[float]) -> "Potential":
        values = tuple(float(v) for v in values)
        if len(values) < 2:
            raise ValueError("a sampled potential needs at least 2 samples")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("potential samples must be finite")
        return cls("samples", (), values)

    @classmethod
    def from_function(cls, fn: Callable, n: int = 2049) -> "Potential":
        return cls.from_samples(fn(np.linspace(0.0, np.pi, n)))

    @property
    def cells(self) -> int:
        return len(self.samples) - 1 if self.kind == "samples" else 1

    @property
    def is_constant(self) -> bool:
        return self.kind in ("zero", "constant")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.params[0])
        if self.kind == "trig":
            a0, cs, ss = self.params
            out = np.full_like(x, a0)
            for k, a in enumerate(cs, start=1):
                out = out + a * np.cos(k * x)
            for k, b in enumerate(ss, start=1):
                out = out + b * np.sin(k * x)
            return out
        grid = np.linspace(0.0, np.pi, len(self.samples))
        return np.interp(x, grid, self.samples)

    def to_dict(self) -> dict:
        if self.kind == "zero":
            return {"kind": "zero"}
        if self.kind == "constant":
            return {"kind": "constant", "c": self.params[0]}
        if self.kind == "trig":
            a0, cs, ss = self.params
            return {"kind": "trig", "a0": a0, "cos": list(cs), "sin": list(ss)}
        return {"kind": "samples", "values": list(self.samples)}

    @classmethod
    def from_dict(cls, data: dict) -> "Potential":
        data = dict(data)
        kind = data.pop("kind", None)
        allowed = {"zero": set(), "constant": {"c"}, "trig": {"a0", "cos", "sin"}, "samples": {"values"}}
        if kind not in allowed:
            raise ValueError(f"unknown potential kind {kind!r}")
        if set(data) - allowed[kind]:
            raise ValueError(f"unknown potential keys {sorted(set(data) - allowed[kind])}")
        if kind == "zero":
            return cls.zero()
        if kind == "constant":
            return cls.constant(data["c"])
        if kind == "trig":
            return cls.trig(data.get("a0", 0.0), data.get("cos", ()), data.get("sin", ()))
        return cls.from_samples(data["values"])


# ---------------------------------------------------------------------------
# problems and spectral data


@dataclass(frozen=True)
class SolverOptions:
    tol_ode: float = 1e-10
    tol_eig: float = 1e-10
    min_steps: int = 2048
    max_steps: int = 2 ** 18


@dataclass(frozen=True)
class BoundaryValueProblem:
    """The pair of problems ``P(q, f, F)`` and ``P(q, f + alpha, F)``."""

    q: Potential
    f: RationalBoundaryFunction
    F: RationalBoundaryFunction
    alpha: float = 1.0
    options: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.f.is_infinity:
            raise ValueError("the left boundary function must be finite")
        if not math.isfinite(self.alpha) or self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        # shifted problem must stay in normal form
        self.f.shift(self.alpha)

    @property
    def shifted(self) -> "BoundaryValueProblem":
        """``P(q, f + alpha, F)`` with the shift reversed for its own companion."""
        return replace(self, f=self.f.shift(self.alpha), alpha=-self.alpha)

    @property
    def L(self) -> float:
        return (self.f.index + self.F.index) / 2


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues with optional coupling and norming constants."""

    eigenvalues: np.ndarray
    betas: np.ndarray | None = None
    gammas: np.ndarray | None = None
    L: float | None = None
    sigma: float | None = None
    source: Literal["direct", "synthesized"] = "direct"

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        object.__setattr__(self, "eigenvalues", ev)
        if np.any(np.diff(ev) <= 0):
            raise ValueError("eigenvalues must be strictly ascending")
        if self.betas is not None:
            b = np.asarray(self.betas, dtype=float)
            if np.any(b == 0):
                raise ValueError("coupling constants must be nonzero")
            object.__setattr__(self, "betas", b)
        if self.gammas is not None:
            g = np.asarray(self.gammas, dtype=float)
            if np.any(g <= 0):
                raise NonpositiveGamma(f"gammas = {g[g <= 0]}")
            object.__setattr__(self, "gammas", g)

    def __len__(self):
        return len(self.eigenvalues)


# ---------------------------------------------------------------------------
# Magnus propagation


def _steps_for(q: Potential, lam_max: float, opts: SolverOptions) -> int:
    """Uniform step count covering an eighth of the shortest local wavelength."""
    k = math.sqrt(max(abs(lam_max), 1.0))
    n = max(opts.min_steps, int(math.ceil(8.0 * k)))
    cells = q.cells
    # align with interpolation kinks, keep a multiple of 4 for Boole's rule
    unit = cells * 4 // math.gcd(cells, 4)
    n = -(-n // unit) * unit
    if n > opts.max_steps:
        raise StepSizeUnderflow(f"{n} steps needed for lambda = {lam_max:g}")
    return n


@dataclass(frozen=True)
class _Mesh:
    h: float
    qbar: np.ndarray  # mean of q at the two Gauss points, per step
    c: np.ndarray  # commutator coefficient sqrt(3)/12 h^2 (q1 - q2)

    @classmethod
    def build(cls, q: Potential, n: int, direction: str) -> "_Mesh":
        x = np.linspace(0.0, np.pi, n + 1)
        h = np.pi / n
        mid = 0.5 * (x[:-1] + x[1:])
        q1 = q(mid - _GAUSS * h)
        q2 = q(mid + _GAUSS * h)
        if direction == "backward":
            # travel order is reversed: first Gauss point is the right one
            q1, q2 = q2[::-1], q1[::-1]
            h = -h
        return cls(h, 0.5 * (q1 + q2), _SQRT3 / 12.0 * h * h * (q1 - q2))


def _cosh_sinhc(omega):
    """``cosh(sqrt(w))`` and ``sinh(sqrt(w))/sqrt(w)`` for real or complex `w`."""
    if np.iscomplexobj(omega):
        z = np.sqrt(omega)
        small = np.abs(z) < 1e-8
        zs = np.where(small, 1.0, z)
        return np.cosh(z), np.where(small, 1.0 + omega / 6.0, np.sinh(zs) / zs)
    r = np.sqrt(np.abs(omega))
    pos = omega >= 0
    small = r < 1e-8
    rs = np.where(small, 1.0, r)
    with np.errstate(over="ignore"):
        ch = np.where(pos, np.cosh(r), np.cos(r))
        sh = np.where(pos, np.sinh(rs) / rs, np.sin(rs) / rs)
    sh = np.where(small, 1.0 + omega / 6.0, sh)
    return ch, sh


@dataclass
class _Run:
    y: np.ndarray
    dy: np.ndarray
    log_scale: np.ndarray
    theta: np.ndarray | None = None
    trajectory: np.ndarray | None = None  # y at every node, unnormalised units
    h: float = 0.0


def _propagate(mesh: _Mesh, lam, y0, dy0, *, scale=None, track_angle=False, keep=False) -> _Run:
    lam = np.asarray(lam)
    shape = lam.shape
    lam = lam.reshape(-1)
    dtype = np.result_type(lam, y0, dy0, float)
    y = np.broadcast_to(np.asarray(y0, dtype=dtype), shape).reshape(-1).copy()
    dy = np.broadcast_to(np.asarray(dy0, dtype=dtype), shape).reshape(-1).copy()
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(y)) and np.all(np.isfinite(dy))):
        raise NonfiniteState("nonfinite initial data or spectral parameter")
    h = mesh.h
    abar = mesh.qbar[:, None] - lam[None, :]
    c = mesh.c[:, None]
    omega = c * c + h * h * abar
    ch, sh = _cosh_sinhc(omega)
    a11 = ch + sh * c
    a22 = ch - sh * c
    a12 = sh * h
    a21 = sh * h * abar
    del abar, omega, ch
    nsteps = len(mesh.qbar)
    log_scale = np.zeros(len(y))
    s = None if scale is None else np.broadcast_to(np.asarray(scale, float), shape).reshape(-1)
    theta = None
    if track_angle:
        ang = np.arctan2(s * y.real, dy.real)
        theta = np.zeros(len(y))
    traj = None
    if keep:
        traj = np.empty((nsteps + 1, len(y)), dtype=dtype)
        scales = np.zeros((nsteps + 1, len(y)))
        traj[0] = y
    for j in range(nsteps):
        y, dy = a11[j] * y + a12[j] * dy, a21[j] * y + a22[j] * dy
        if track_angle:
            new = np.arctan2(s * y, dy)
            theta += np.remainder(new - ang + np.pi, 2 * np.pi) - np.pi
            ang = new
        if j % 16 == 15 or keep:
            m = np.maximum(np.abs(y), np.abs(dy))
            big = m > 1e100
            if np.any(big):
                m = np.where(big, m, 1.0)
                y = y / m
                dy = dy / m
                log_scale += np.log(m)
        if keep:
            traj[j + 1] = y
            scales[j + 1] = log_scale
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(dy))):
        raise NonfiniteState("state overflowed during integration")
    run = _Run(y.reshape(shape), dy.reshape(shape), log_scale.reshape(shape), h=abs(h))
    if track_angle:
        run.theta = theta.reshape(shape)
    if keep:
        run.trajectory = traj * np.exp(scales - log_scale[None, :])
        run.trajectory = run.trajectory.reshape((nsteps + 1,) + shape)
    return run


def integrate(
    q: Potential,
    lam,
    y0,
    dy0,
    direction: Literal["forward", "backward"] = "forward",
    *,
    tol_ode: float = 1e-10,
    n_steps: int | None = None,
):
    """Solve for ``(y, y')`` at the far endpoint.

    Forward integration starts at 0 and ends at pi, backward the reverse.  The
    step count is chosen by doubling until two successive results agree to
    `tol_ode` relative, unless `n_steps` is given.  Vectorised over `lam`.
    """
    opts = SolverOptions(tol_ode=tol_ode)
    lam_arr = np.asarray(lam)
    if n_steps is None:
        n = _steps_for(q, float(np.max(np.abs(lam_arr))), opts)
        prev = _endpoint(q, n, lam, y0, dy0, direction)
        if q.is_constant:
            return prev
        while True:
            n *= 2
            if n > opts.max_steps:
                raise StepSizeUnderflow(f"no convergence to tol_ode = {tol_ode:g}")
            cur = _endpoint(q, n, lam, y0, dy0, direction)
            ref = np.maximum(np.hypot(np.abs(cur[0]), np.abs(cur[1])), 1e-300)
            err = np.hypot(np.abs(cur[0] - prev[0]), np.abs(cur[1] - prev[1])) / ref
            if np.all(err <= tol_ode):
                return cur
            prev = cur
    return _endpoint(q, n_steps, lam, y0, dy0, direction)


def _endpoint(q, n, lam, y0, dy0, direction):
    run = _propagate(_Mesh.build(q, n, direction), lam, y0, dy0)
    with np.errstate(over="raise"):
        try:
            g = np.exp(run.log_scale)
        except FloatingPointError:
            raise NonfiniteState("solution magnitude exceeds floating point range")
    return run.y * g, run.dy * g


# ---------------------------------------------------------------------------
# characteristic functions


# cancellation factor above which the opposite shooting direction is tried
_CANCEL_LIMIT = 1e3
# relative size below which a projection remainder is rounding noise
_PROJECTION_NOISE = 1e-12


def _combine(a, b, log_scale):
    """``(a + b) exp(log_scale)`` and its cancellation factor."""
    val = a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(val != 0, (np.abs(a) + np.abs(b)) / np.abs(val), np.inf)
    return val * np.exp(log_scale), cond


class _Shooter:
    """Caches meshes for repeated evaluation on one problem."""

    def __init__(self, problem: BoundaryValueProblem, lam_max: float = 0.0, companions=()):
        self.problem = problem
        self.f_up, self.f_down = fraction_parts(problem.f)
        self.references = [(self.f_up, self.f_down)] + [fraction_parts(g) for g in companions]
        self.F_up, self.F_down = fraction_parts(problem.F)
        self.n = _steps_for(problem.q, lam_max, problem.options)
        self._meshes: dict[str, _Mesh] = {}

    def mesh(self, direction: str) -> _Mesh:
        if direction not in self._meshes:
            self._meshes[direction] = _Mesh.build(self.problem.q, self.n, direction)
        return self._meshes[direction]

    def ensure(self, lam):
        need = _steps_for(self.problem.q, float(np.max(np.abs(lam), initial=0.0)), self.problem.options)
        if need > self.n:
            self.n = need
            self._meshes.clear()

    def forward(self, lam, **kw) -> _Run:
        self.ensure(lam)
        return _propagate(self.mesh("forward"), lam, self.f_down(lam), -self.f_up(lam), **kw)

    def backward(self, lam, **kw) -> _Run:
        self.ensure(lam)
        return _propagate(self.mesh("backward"), lam, self.F_down(lam), self.F_up(lam), **kw)

    def phi_char(self, lam):
        """Phi from whichever shooting direction cancels less."""
        lam = np.asarray(lam)
        val, cond = self._forward_char(lam)
        bad = np.atleast_1d(cond > _CANCEL_LIMIT)
        if not np.any(bad):
            return val
        flat = np.atleast_1d(lam)[bad]
        bval, bcond = self._backward_char(flat)
        out = np.array(np.atleast_1d(val), dtype=np.result_type(val, bval))
        use = bcond < np.atleast_1d(cond)[bad]
        out[np.flatnonzero(bad)[use]] = bval[use]
        return out.reshape(np.shape(val))

    def phi_char_backward(self, lam):
        """Cross form from a plain backward run (independent of `forward`)."""
        lam = np.asarray(lam)
        run = self.backward(lam)
        a, b = self.f_down(lam) * run.dy, self.f_up(lam) * run.y
        return _combine(a, b, run.log_scale)[0]

    def chi_at_zero(self, lam):
        """``(chi(0), chi'(0))`` for real `lam`, stable in both growth regimes.

        When a forward solution grows, the backward run of ``chi`` decays and
        loses digits.  There the terminal data are split into a multiple of
        that forward solution, whose initial values are known exactly, and a
        remainder whose backward run grows.  Every left boundary function in
        ``self.references`` supplies a candidate; the one leaving the smallest
        remainder wins.
        """
        lam = np.asarray(lam, dtype=float)
        Fd, Fu = self.F_down(lam), self.F_up(lam)
        s = np.sqrt(np.maximum(np.abs(lam), 1.0))
        a1, a2 = s * Fd, Fu
        an = np.hypot(a1, a2)
        back = self.backward(lam)
        chi = back.y * np.exp(back.log_scale)
        dchi = back.dy * np.exp(back.log_scale)
        best = np.full(lam.shape, np.inf)
        for up, down in self.references:
            fd, fu = down(lam), up(lam)
            fw = _propagate(self.mesh("forward"), lam, fd, -fu)
            nb = np.hypot(s * fw.y, fw.dy)
            b1, b2 = s * fw.y / nb, fw.dy / nb
            growth = np.log(nb) + fw.log_scale - np.log(np.hypot(s * fd, fu))
            k = s * Fd * b1 + Fu * b2
            r1, r2 = a1 - k * b1, a2 - k * b2
            rel = np.hypot(r1, r2) / an
            # a remainder at rounding level is indistinguishable from zero
            noise = rel < _PROJECTION_NOISE
            r1, r2 = np.where(noise, 0.0, r1), np.where(noise, 0.0, r2)
            use = (growth > 0) & (rel < best)
            if not np.any(use):
                continue
            rest = _propagate(self.mesh("backward"), lam, r1 / s, r2)
            c = k / nb * np.exp(-fw.log_scale)
            zs = np.exp(rest.log_scale)
            chi = np.where(use, c * fd + rest.y * zs, chi)
            dchi = np.where(use, -c * fu + rest.dy * zs, dchi)
            best = np.where(use, rel, best)
        return chi, dchi

    def _forward_char(self, lam):
        run = self.forward(lam)
        a, b = self.F_up(lam) * run.y, self.F_down(lam) * run.dy
        return _combine(a, -b, run.log_scale)

    def _backward_char(self, lam):
        if np.iscomplexobj(lam):
            run = self.backward(lam)
            a, b = self.f_down(lam) * run.dy, self.f_up(lam) * run.y
            return _combine(a, b, run.log_scale)
        chi, dchi = self.chi_at_zero(lam)
        return _combine(self.f_down(lam) * dchi, self.f_up(lam) * chi, 0.0)

    def mismatch(self, lam):
        """Prufer mismatch ``D(lam)``; eigenvalue n solves ``D = n pi``."""
        lam = np.asarray(lam, dtype=float)
        s = np.sqrt(np.maximum(lam, 1.0))
        fd, fu = self.f_down(lam), self.f_up(lam)
        theta0 = np.arctan2(s * fd, -fu)
        theta0 = np.pi - np.remainder(np.pi - theta0, np.pi)  # in (0, pi]
        for pole in self.problem.f.poles:
            theta0 = theta0 + np.pi * (lam > pole)
        run = self.forward(lam, scale=s, track_angle=True)
        theta_pi = theta0 + run.theta
        if self.problem.F.is_infinity:
            theta_F = np.full_like(lam, np.pi)
        else:
            Fd, Fu = self.F_down(lam), self.F_up(lam)
            theta_F = np.remainder(np.arctan2(s * Fd, Fu), np.pi)
            for pole in self.problem.F.poles:
                theta_F = theta_F - np.pi * (lam > pole)
        return theta_pi - theta_F


def char_Phi(problem: BoundaryValueProblem, lam):
    """Characteristic function of ``P(q, f, F)``.

    Forward shooting, switching to the backward cross form at points where
    the forward combination loses more than three digits to cancellation.
    """
    lam = np.asarray(lam)
    lam_max = float(np.max(np.abs(lam), initial=0.0))
    return _Shooter(problem, lam_max, companions=(problem.f.shift(problem.alpha),)).phi_char(lam)


def char_Psi(problem: BoundaryValueProblem, lam):
    """Characteristic function of ``P(q, f + alpha, F)``."""
    lam = np.asarray(lam)
    lam_max = float(np.max(np.abs(lam), initial=0.0))
    return _Shooter(problem.shifted, lam_max, companions=(problem.f,)).phi_char(lam)


def char_Phi_backward(problem: BoundaryValueProblem, lam):
    """``f_down chi'(0) + f_up chi(0)``, an independent route to Phi."""
    lam = np.asarray(lam)
    return _Shooter(problem, float(np.max(np.abs(lam), initial=0.0))).phi_char_backward(lam)


def char_derivative(problem: BoundaryValueProblem, lam, which: str = "Phi"):
    """Central difference derivative with step ``1e-5 max(1, |lam|)``."""
    lam = np.asarray(lam, dtype=float)
    target = problem if which == "Phi" else problem.shifted
    h = 1e-5 * np.maximum(1.0, np.abs(lam))
    sh = _Shooter(target, float(np.max(np.abs(lam) + h, initial=0.0)))
    return (sh.phi_char(lam + h) - sh.phi_char(lam - h)) / (2 * h)


# ---------------------------------------------------------------------------
# eigenvalues


def _illinois(fun, lo, hi, flo, fhi, tol, maxiter=200):
    """Vectorised bracketed root refinement (Illinois regula falsi).

    ``fun(x, idx)`` evaluates the entries `idx` still in play; the brackets
    must satisfy ``flo < 0 <= fhi``.
    """
    lo, hi, flo, fhi = (np.array(a, dtype=float) for a in (lo, hi, flo, fhi))
    side = np.zeros(lo.shape, dtype=int)
    for it in range(maxiter):
        done = (hi - lo) <= tol * np.maximum(1.0, np.abs(lo))
        if np.all(done):
            break
        with np.errstate(invalid="ignore", divide="ignore"):
            x = (lo * fhi - hi * flo) / (fhi - flo)
        # every fourth pass bisects so that progress is guaranteed
        bad = ~np.isfinite(x) | (x <= lo) | (x >= hi) | (it % 4 == 3)
        x = np.where(bad, 0.5 * (lo + hi), x)
        act = np.flatnonzero(~done)
        fx = np.zeros_like(x)
        fx[act] = fun(x[act], act)
        mask = np.zeros(len(x), dtype=bool)
        mask[act] = True
        left = mask & (fx < 0)
        right = mask & (fx >= 0)
        lo = np.where(left, x, lo)
        fhi = np.where(left & (side == -1), 0.5 * fhi, fhi)
        flo = np.where(left, fx, flo)
        hi = np.where(right, x, hi)
        flo = np.where(right & (side == 1), 0.5 * flo, flo)
        fhi = np.where(right, fx, fhi)
        side = np.where(left, -1, np.where(right, 1, side))
    else:
        raise BracketingFailure("root refinement did not converge")
    return np.where(np.abs(flo) < np.abs(fhi), lo, hi)


# refinement goes well past tol_eig: gap asymptotics need near machine precision
_REFINE_TOL = 1e-14


def _spectrum(sh: _Shooter, count: int) -> np.ndarray:
    L = sh.problem.L
    target = np.pi * np.arange(count)

    lo = -1.0
    while sh.mismatch(np.array([lo]))[0] >= 0:
        lo *= 10.0
        if lo < -1e12:
            raise BracketingFailure("no lower bound for the spectrum")

    r = np.arange(0.0, count + abs(L) + 3, 0.25)
    grid = np.unique(np.concatenate([lo * np.logspace(-4, 0, 9), r ** 2]))
    d = sh.mismatch(grid)
    while d[-1] < target[-1] + 0.5 * np.pi:
        ext = max(grid[-1], 1.0) * np.array([1.25, 1.5, 2.0])
        grid = np.concatenate([grid, ext])
        d = np.concatenate([d, sh.mismatch(ext)])
        if grid[-1] > 1e10:
            raise BracketingFailure("no upper bound for the requested eigenvalues")
    d = np.maximum.accumulate(d)
    j = np.searchsorted(d, target, side="right")
    if np.any(j <= 0) or np.any(j >= len(grid)):
        raise BracketingFailure("could not bracket every eigenvalue")
    a, b = grid[j - 1], grid[j]
    return _illinois(
        lambda x, idx: sh.mismatch(x) - target[idx],
        a, b, d[j - 1] - target, d[j] - target,
        min(_REFINE_TOL, sh.problem.options.tol_eig),
    )


def _check_poles_of_f(problem: BoundaryValueProblem, lam: np.ndarray) -> None:
    for pole in problem.f.poles:
        hit = np.abs(lam - pole) <= 1e-8 * max(1.0, abs(pole))
        if np.any(hit):
            raise EigenvalueAtPoleOfF(f"eigenvalue {float(lam[hit][0])!r} at pole {pole} of f")


def eigenvalues(problem: BoundaryValueProblem, which: Literal["Phi", "Psi"] = "Phi", count: int = 10) -> SpectralData:
    """The `count` smallest eigenvalues of ``P(q, f, F)`` or ``P(q, f + alpha, F)``.

    Completeness follows from the Prufer count; both spectra must avoid the
    poles of ``f`` (they share them).
    """
    if count < 1:
        raise ValueError("count must be positive")
    target = problem if which == "Phi" else problem.shifted
    sh = _Shooter(target, (count + abs(problem.L) + 3) ** 2)
    lam = _spectrum(sh, count)
    _check_poles_of_f(problem, lam)
    return SpectralData(lam, L=problem.L)


def coupling_beta(problem: BoundaryValueProblem, lam):
    """``beta_n = chi(0, lam_n) / f_down(lam_n)`` at eigenvalues of Phi."""
    lam = np.asarray(lam, dtype=float)
    sh = _Shooter(problem, float(np.max(np.abs(lam), initial=0.0)))
    fd = sh.f_down(lam)
    scale = max(1.0, float(np.max(np.abs(sh.f_up(lam)), initial=1.0)))
    if np.any(np.abs(fd) <= 1e-12 * scale):
        raise DegenerateNormalization("f_down vanishes at an eigenvalue")
    return sh.chi_at_zero(lam)[0] / fd


def _boole(y: np.ndarray, h: float) -> np.ndarray:
    """Composite Boole rule along axis 0 (node count 4m + 1)."""
    w = np.empty(len(y))
    w[1::4] = 32.0
    w[2::4] = 12.0
    w[3::4] = 32.0
    w[0::4] = 14.0
    w[0] = w[-1] = 7.0
    return (2.0 * h / 45.0) * np.tensordot(w, y, axes=(0, 0))


def norm_integral(problem: BoundaryValueProblem, lam):
    """``int_0^pi phi(x, lam)^2 dx``."""
    lam = np.asarray(lam, dtype=float)
    sh = _Shooter(problem, float(np.max(np.abs(lam), initial=0.0)))
    run = sh.forward(lam, keep=True)
    return _boole(run.trajectory ** 2, run.h) * np.exp(2 * run.log_scale)


def norming_constants(problem: BoundaryValueProblem, spectral: SpectralData) -> SpectralData:
    """Attach ``beta_n`` and ``gamma_n`` to eigenvalues of ``P(q, f, F)``."""
    lam = spectral.eigenvalues
    beta = spectral.betas if spectral.betas is not None else coupling_beta(problem, lam)
    F_term = 0.0 if problem.F.is_infinity else wronskian_part(problem.F, lam)
    gamma = norm_integral(problem, lam) + wronskian_part(problem.f, lam) + F_term / beta ** 2
    if np.any(gamma <= 0):
        raise NonpositiveGamma(f"norming constant {float(gamma[gamma <= 0][0])!r}")
    return replace(spectral, betas=beta, gammas=gamma)


def solve(problem: BoundaryValueProblem, count: int, which: Literal["Phi", "Psi"] = "Phi") -> SpectralData:
    """Eigenvalues, coupling constants and norming constants in one call."""
    spec = eigenvalues(problem, which, count)
    target = problem if which == "Phi" else problem.shifted
    return norming_constants(target, spec)


def weyl_m(problem: BoundaryValueProblem, lam):
    """``m(lam) = -Psi(lam) / Phi(lam)``; accepts complex `lam`."""
    lam = np.asarray(lam)
    phi = char_Phi(problem, lam)
    psi = char_Psi(problem, lam)
    ref = np.maximum(np.abs(psi), 1e-300)
    if np.any(np.abs(phi) <= 1e-14 * ref):
        raise EvaluationAtEigenvalue("Phi vanishes at the evaluation point")
    return -psi / phi
