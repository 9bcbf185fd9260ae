"""Enumerate the admissible index sets for a two-spectra pair.

Builds the pair from the direct problem with ``f = 1 + 1/(1 - x)``,
``F = 0`` and ``q = 0``, then lists each choice of zeros of ``Phi - Psi``
together with the recovered ``gamma_0`` and the asymptotic check.

    python scripts/candidates.py --n 40 --kmax 3
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from twospec import BoundaryValueProblem, Potential, eigenvalues, enumerate_candidates, validate_two_spectra
from twospec import RationalBoundaryFunction as R


@dataclass
class Config:
    n: int = 40
    kmax: int = 3


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    ap.add_argument("--kmax", type=int, default=Config.kmax)
    cfg = Config(**vars(ap.parse_args(argv)))
    p = BoundaryValueProblem(Potential.zero(), R(h=1, poles=[1], residues=[1]), R())
    lam = eigenvalues(p, "Phi", cfg.n + 1).eigenvalues
    mu = eigenvalues(p, "Psi", cfg.n + 1).eigenvalues
    data = validate_two_spectra(lam, mu)
    print(f"L = {data.L}, r = {data.r}, nu = {data.nu:.6f}, at most {data.max_cardinality} zeros per set")
    good, attempts = enumerate_candidates(data, cfg.kmax)
    for c in attempts:
        if c.output is None:
            print(f"  {str(c.index_set):10s} rejected: {c.note}")
            continue
        o = c.output
        print(f"  {str(c.index_set):10s} taus {o.taus[list(c.index_set)] if c.index_set else []} "
              f"gamma_0 {o.gammas[0]:.8f} ratio_30 {o.asymptotic_ratios[30]:.4f} ok {o.asymptotics_ok}")
    print(f"{len(good)} admissible of {len(attempts)}")


if __name__ == "__main__":
    main()
