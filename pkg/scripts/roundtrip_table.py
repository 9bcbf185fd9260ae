"""Direct -> inverse round trips for a few reference problems.

Prints recovered norming-constant errors, recovered pole errors and the
fitted versus predicted asymptotic parameters.

    python scripts/roundtrip_table.py --n 40
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from twospec import BoundaryValueProblem, Potential, roundtrip
from twospec import RationalBoundaryFunction as R


@dataclass
class Config:
    n: int = 40


def problems() -> dict[str, BoundaryValueProblem]:
    cos2 = Potential.trig(cos=[0.0, 1.0])
    return {
        "neumann q=0": BoundaryValueProblem(Potential.zero(), R(), R()),
        "robin q=cos2x": BoundaryValueProblem(cos2, R(h=0.5), R(h=-0.3), 0.7),
        "pole q=0": BoundaryValueProblem(Potential.zero(), R(h=1, poles=[1], residues=[1]), R()),
        "pole q=cos2x": BoundaryValueProblem(cos2, R(h=1, poles=[1], residues=[1]), R()),
        "two poles": BoundaryValueProblem(cos2, R(h=1, poles=[2.2, 6.5], residues=[1.0, 0.7]), R(h=1.0)),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=Config.n)
    cfg = Config(**vars(ap.parse_args(argv)))
    print(f"{'problem':16s} {'gamma err':>10s} {'pole err':>10s} {'L':>4s} {'r':>3s} "
          f"{'nu fit':>10s} {'nu true':>10s} {'time':>6s}")
    for name, p in problems().items():
        t0 = time.perf_counter()
        rep = roundtrip(p, cfg.n)
        dt = time.perf_counter() - t0
        print(f"{name:16s} {rep.max_gamma_error:10.2e} {rep.max_pole_error:10.2e} "
              f"{rep.fitted['L']:4.1f} {rep.fitted['r']:3d} {rep.fitted['nu']:10.6f} "
              f"{rep.theory['nu']:10.6f} {dt:5.1f}s")
        if len(rep.poles):
            print(f"{'':16s} poles {np.round(rep.poles, 8)} recovered {np.round(np.sort(rep.recovered_down.roots().real), 8)}")


if __name__ == "__main__":
    main()
