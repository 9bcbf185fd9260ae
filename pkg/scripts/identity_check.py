"""Check the characteristic-function identities on random problems.

For each eigenvalue of Phi the three relations
``Phi' = beta gamma``, ``Psi = alpha beta f_down**2`` and
``gamma = alpha f_down**2 Phi' / Psi`` are evaluated independently.

    python scripts/identity_check.py --problems 8 --count 20
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from twospec import BoundaryValueProblem, Potential, char_Psi, solve
from twospec import RationalBoundaryFunction as R
from twospec.direct_solver import char_derivative


@dataclass
class Config:
    problems: int = 8
    count: int = 20
    seed: int = 0


def random_function(rng: np.random.Generator, index: int, lo: float) -> R:
    if index == -1:
        return R.infinity()
    d = index // 2
    h0 = float(rng.uniform(0.5, 2)) if index % 2 else 0.0
    poles = np.sort(lo + np.cumsum(rng.uniform(1.5, 4.0, d)))
    h = float(rng.choice([-1, 1]) * rng.uniform(2.0, 3.0)) if d else float(rng.uniform(-1, 1))
    return R(h0=h0, h=h, poles=poles, residues=rng.uniform(0.3, 1.5, d))


def random_problem(rng: np.random.Generator) -> BoundaryValueProblem:
    q = Potential.trig(rng.uniform(-1, 1), rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2))
    f = random_function(rng, int(rng.integers(0, 4)), -3.0)
    F = random_function(rng, int(rng.integers(-1, 3)), 1.0)
    return BoundaryValueProblem(q, f, F, float(rng.choice([-1, 1]) * rng.uniform(0.5, 1.5)))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problems", type=int, default=Config.problems)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args(argv)))
    rng = np.random.default_rng(cfg.seed)
    print(f"{'ind f':>5s} {'ind F':>5s} {'alpha':>7s} {'dPhi':>9s} {'Psi':>9s} {'gamma':>9s}")
    for _ in range(cfg.problems):
        p = random_problem(rng)
        spec = solve(p, cfg.count)
        lam = spec.eigenvalues
        fd = p.f.down(lam)
        dphi = char_derivative(p, lam)
        psi = char_Psi(p, lam)
        e1 = np.max(np.abs(dphi / (spec.betas * spec.gammas) - 1))
        e2 = np.max(np.abs(psi / (p.alpha * spec.betas * fd ** 2) - 1))
        e3 = np.max(np.abs(p.alpha * fd ** 2 * dphi / psi / spec.gammas - 1))
        print(f"{p.f.index:5d} {p.F.index:5d} {p.alpha:7.3f} {e1:9.1e} {e2:9.1e} {e3:9.1e}")


if __name__ == "__main__":
    main()
