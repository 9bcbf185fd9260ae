r"""Rational Herglotz-Nevanlinna boundary functions.

A boundary function has the form

.. math::

    f(\lambda) = h_0 \lambda + h + \sum_{k=1}^d \frac{\delta_k}{h_k - \lambda},

with :math:`h_0 \ge 0`, :math:`\delta_k > 0` and strictly increasing poles,
or is the formal value :math:`f = \infty` (a Dirichlet condition).  It is
stored alongside its fraction form :math:`f = f_\uparrow / f_\downarrow`
with :math:`f_\downarrow = h_0' \prod_k (h_k - \lambda)`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    InfinityNotEvaluable,
    NegativeLinearCoefficient,
    NonpositiveResidue,
    NotNormalForm,
    PoleEvaluation,
    UnorderedPoles,
)

POLE_GUARD = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with coefficients in ascending degree.

    The zero polynomial is stored as ``(0.0,)`` and has degree 0.
    """

    coefficients: tuple[float, ...]

    def __init__(self, coefficients: Sequence[float]):
        c = [float(v) for v in coefficients] or [0.0]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def from_roots(cls, roots: Sequence[float], scale: float = 1.0) -> "Polynomial":
        """``scale * prod(r - x)`` over the given roots."""
        c = np.array([float(scale)])
        for r in roots:
            c = P.polymul(c, [r, -1.0])
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return self.coefficients == (0.0,)

    def __call__(self, x):
        return P.polyval(x, self.coefficients)

    def deriv(self) -> "Polynomial":
        return Polynomial(P.polyder(self.coefficients))

    def roots(self) -> np.ndarray:
        r = P.polyroots(self.coefficients) if self.degree else np.array([])
        if np.iscomplexobj(r) and np.all(np.abs(r.imag) <= 1e-12 * (1 + np.abs(r.real))):
            r = r.real
        return np.sort(r)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(P.polyadd(self.coefficients, other.coefficients))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return Polynomial(P.polymul(self.coefficients, other.coefficients))
        return Polynomial(np.asarray(self.coefficients) * float(other))

    __rmul__ = __mul__

    def monic(self) -> "Polynomial":
        return Polynomial(np.asarray(self.coefficients) / self.coefficients[-1])


@dataclass(frozen=True)
class RationalBoundaryFunction:
    """Coefficient function of a boundary condition.

    Parameters
    ----------
    h0 : float
        Linear coefficient, nonnegative.
    h : float
        Constant term.
    poles, residues : sequence of float
        Strictly increasing poles and their positive residues.
    is_infinity : bool
        Represents ``f = inf``; all other fields are ignored.

    Construction validates the invariants, so every instance is usable.
    """

    h0: float = 0.0
    h: float = 0.0
    poles: tuple[float, ...] = field(default=())
    residues: tuple[float, ...] = field(default=())
    is_infinity: bool = False

    def __post_init__(self):
        object.__setattr__(self, "h0", float(self.h0))
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "poles", tuple(float(p) for p in self.poles))
        object.__setattr__(self, "residues", tuple(float(r) for r in self.residues))
        validate(self)

    @classmethod
    def infinity(cls) -> "RationalBoundaryFunction":
        return cls(is_infinity=True)

    @property
    def d(self) -> int:
        return 0 if self.is_infinity else len(self.poles)

    @property
    def h0_prime(self) -> float:
        return 1.0 / self.h0 if self.h0 > 0 else 1.0

    @property
    def is_constant(self) -> bool:
        return not self.is_infinity and self.h0 == 0 and self.d == 0

    def fraction_parts(self) -> tuple[Polynomial, Polynomial]:
        return fraction_parts(self)

    @property
    def up(self) -> Polynomial:
        return fraction_parts(self)[0]

    @property
    def down(self) -> Polynomial:
        return fraction_parts(self)[1]

    @property
    def index(self) -> int:
        return index(self)

    def __call__(self, lam):
        return evaluate(self, lam)

    def derivative(self, lam):
        return evaluate_derivative(self, lam)

    def shift(self, alpha: float) -> "RationalBoundaryFunction":
        return shift(self, alpha)

    def to_dict(self):
        if self.is_infinity:
            return "infinity"
        return {
            "h0": self.h0,
            "h": self.h,
            "poles": list(self.poles),
            "residues": list(self.residues),
        }

    @classmethod
    def from_dict(cls, data) -> "RationalBoundaryFunction":
        if isinstance(data, str):
            if data.strip().lower() in ("infinity", "inf"):
                return cls.infinity()
            raise ValueError(f"unknown boundary function literal {data!r}")
        unknown = set(data) - {"h0", "h", "poles", "residues"}
        if unknown:
            raise ValueError(f"unknown boundary function keys {sorted(unknown)}")
        poles = data.get("poles", [])
        residues = data.get("residues", [])
        if len(poles) != len(residues):
            raise ValueError("poles and residues must have equal length")
        return cls(
            h0=data.get("h0", 0.0), h=data.get("h", 0.0), poles=poles, residues=residues
        )


def validate(f: RationalBoundaryFunction) -> None:
    """Raise if `f` violates the Herglotz-Nevanlinna or normal-form constraints."""
    if f.is_infinity:
        return
    if len(f.poles) != len(f.residues):
        raise ValueError("poles and residues must have equal length")
    values = (f.h0, f.h) + f.poles + f.residues
    if not all(np.isfinite(values)):
        raise ValueError("boundary function coefficients must be finite")
    if f.h0 < 0:
        raise NegativeLinearCoefficient(f"h0 = {f.h0}")
    if any(r <= 0 for r in f.residues):
        raise NonpositiveResidue(f"residues = {list(f.residues)}")
    if any(b <= a for a, b in zip(f.poles, f.poles[1:])):
        raise UnorderedPoles(f"poles = {list(f.poles)}")
    if f.poles and f.h0 == 0 and f.h == 0:
        raise NotNormalForm("h0 = h = 0 with d >= 1 gives an index of 2d - 1")


def fraction_parts(f: RationalBoundaryFunction) -> tuple[Polynomial, Polynomial]:
    """Return ``(f_up, f_down)`` with ``f = f_up / f_down``."""
    if f.is_infinity:
        return Polynomial([-1.0]), Polynomial([0.0])
    s = f.h0_prime
    down = Polynomial.from_roots(f.poles, s)
    up = Polynomial([f.h, f.h0]) * down
    for k, (pole, res) in enumerate(zip(f.poles, f.residues)):
        others = f.poles[:k] + f.poles[k + 1:]
        up = up + Polynomial.from_roots(others, s * res)
    return up, down


def index(f: RationalBoundaryFunction) -> int:
    if f.is_infinity:
        return -1
    up, down = fraction_parts(f)
    return up.degree + down.degree


def _check_poles(f: RationalBoundaryFunction, lam) -> None:
    if f.is_infinity:
        raise InfinityNotEvaluable("f = inf has no finite values")
    lam = np.asarray(lam)
    for pole in f.poles:
        if np.any(np.abs(lam - pole) <= POLE_GUARD * max(1.0, abs(pole))):
            raise PoleEvaluation(f"evaluation at pole {pole}")


def evaluate(f: RationalBoundaryFunction, lam):
    """Value ``h0*lam + h + sum(delta_k / (h_k - lam))``."""
    _check_poles(f, lam)
    lam = np.asarray(lam)
    out = f.h0 * lam + f.h
    for pole, res in zip(f.poles, f.residues):
        out = out + res / (pole - lam)
    return out


def evaluate_derivative(f: RationalBoundaryFunction, lam):
    _check_poles(f, lam)
    lam = np.asarray(lam)
    out = f.h0 + 0.0 * lam
    for pole, res in zip(f.poles, f.residues):
        out = out + res / (pole - lam) ** 2
    return out


def shift(f: RationalBoundaryFunction, alpha: float) -> RationalBoundaryFunction:
    """Return ``f + alpha``; poles and residues are unchanged."""
    if f.is_infinity:
        raise InfinityNotEvaluable("cannot shift f = inf")
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    return RationalBoundaryFunction(f.h0, f.h + alpha, f.poles, f.residues)


def wronskian_part(f: RationalBoundaryFunction, lam):
    """``f_up' f_down - f_up f_down'`` at `lam`; zero for ``f = inf``.

    Equals ``f'(lam) f_down(lam)**2`` away from poles but stays finite at them.
    """
    up, down = fraction_parts(f)
    lam = np.asarray(lam)
    return up.deriv()(lam) * down(lam) - up(lam) * down.deriv()(lam)
