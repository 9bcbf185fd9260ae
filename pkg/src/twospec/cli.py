"""Command-line front end.

Subcommands::

    twospec direct PROBLEM.json --n 30 --out spectra.csv
    twospec invert lambdas.csv [mus.csv] --indices 0,2 --out report.json
    twospec roundtrip PROBLEM.json --n 40
    twospec fit lambdas.csv [mus.csv]
    twospec products lambdas.csv --at=-1,0.5,3

Problem files are JSON with a ``schema`` version field and strict keys.
Exit codes: 0 ok, 2 input error, 3 solver error, 4 inadmissible data.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import direct_solver as ds
from . import inverse as inv
from .entire_products import build, fit_asymptotics, fit_gap
from .errors import InadmissibleData, InputError, SolverError, SpectralError
from .hn_functions import RationalBoundaryFunction

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_INADMISSIBLE = 0, 2, 3, 4

_TOP_KEYS = {"schema", "potential", "f", "F", "alpha", "solver"}
_SOLVER_KEYS = {"n_eigs", "tol_ode", "tol_eig"}


class ParseError(ValueError):
    """Malformed problem file or spectrum CSV."""


@dataclass(frozen=True)
class ProblemFile:
    problem: ds.BoundaryValueProblem
    n_eigs: int | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemFile":
        if not isinstance(data, dict):
            raise ParseError("problem file must hold a JSON object")
        unknown = set(data) - _TOP_KEYS
        if unknown:
            raise ParseError(f"unknown keys {sorted(unknown)}")
        if data.get("schema") != SCHEMA_VERSION:
            raise ParseError(f"schema must be {SCHEMA_VERSION}, got {data.get('schema')!r}")
        for key in ("potential", "f", "F"):
            if key not in data:
                raise ParseError(f"missing key {key!r}")
        solver = data.get("solver", {})
        if set(solver) - _SOLVER_KEYS:
            raise ParseError(f"unknown solver keys {sorted(set(solver) - _SOLVER_KEYS)}")
        opts = ds.SolverOptions(
            **{k: float(solver[k]) for k in ("tol_ode", "tol_eig") if k in solver}
        )
        problem = ds.BoundaryValueProblem(
            q=ds.Potential.from_dict(data["potential"]),
            f=RationalBoundaryFunction.from_dict(data["f"]),
            F=RationalBoundaryFunction.from_dict(data["F"]),
            alpha=float(data.get("alpha", 1.0)),
            options=opts,
        )
        n_eigs = solver.get("n_eigs")
        return cls(problem, None if n_eigs is None else int(n_eigs))

    def to_dict(self) -> dict:
        p = self.problem
        solver = {"tol_ode": p.options.tol_ode, "tol_eig": p.options.tol_eig}
        if self.n_eigs is not None:
            solver["n_eigs"] = self.n_eigs
        return {
            "schema": SCHEMA_VERSION,
            "potential": p.q.to_dict(),
            "f": p.f.to_dict(),
            "F": p.F.to_dict(),
            "alpha": p.alpha,
            "solver": solver,
        }


def load_problem(path) -> ProblemFile:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read problem file: {exc}") from exc
    return ProblemFile.from_dict(data)


# ---------------------------------------------------------------------------
# CSV


def _fmt(x: float) -> str:
    return "%.17g" % x


def spectra_csv(phi: ds.SpectralData, psi: ds.SpectralData) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "lambda", "beta", "gamma", "mu", "beta_mu", "gamma_mu"])
    for n in range(len(phi)):
        row = [phi.eigenvalues[n], phi.betas[n], phi.gammas[n], psi.eigenvalues[n], psi.betas[n], psi.gammas[n]]
        w.writerow([n] + [_fmt(v) for v in row])
    return buf.getvalue()


def read_spectra(path) -> dict[str, np.ndarray]:
    """Columns of a spectrum CSV: ``n,value`` or the output of ``direct``."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path} has no data rows")
    cols = set(rows[0])
    if "n" not in cols:
        raise ParseError(f"{path} lacks an 'n' column")
    try:
        n = np.array([int(r["n"]) for r in rows])
        out = {c: np.array([float(r[c]) for r in rows]) for c in cols - {"n"}}
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not np.array_equal(n, np.arange(len(n))):
        raise ParseError(f"{path}: n must run 0, 1, 2, ...")
    for c, v in out.items():
        if c in ("value", "lambda", "mu") and np.any(np.diff(v) <= 0):
            raise ParseError(f"{path}: column {c!r} must be strictly ascending")
    return out


def _sequence(cols: dict, preferred: str) -> np.ndarray:
    for key in (preferred, "value"):
        if key in cols:
            return cols[key]
    raise ParseError(f"no {preferred!r} or 'value' column")


def load_pair(lambda_csv, mu_csv=None) -> tuple[np.ndarray, np.ndarray]:
    a = read_spectra(lambda_csv)
    if mu_csv is None:
        if "lambda" not in a or "mu" not in a:
            raise ParseError("a single CSV must contain both 'lambda' and 'mu' columns")
        lam, mu = a["lambda"], a["mu"]
    else:
        lam, mu = _sequence(a, "lambda"), _sequence(read_spectra(mu_csv), "mu")
    if len(lam) != len(mu):
        raise ParseError(f"spectra differ in length ({len(lam)} vs {len(mu)})")
    return lam, mu


# ---------------------------------------------------------------------------
# reports


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


def dump_report(report: dict) -> str:
    """Deterministic JSON; floats use the shortest round-trip form, non-finite ones become null."""
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def inverse_report(data: inv.TwoSpectraData, out: inv.InverseOutput, hankel: dict) -> dict:
    return {
        "fit": {"L": data.L, "sigma": data.sigma, "sigma_mu": data.sigma_mu, "nu": data.nu, "r": data.r,
                "residual": data.residual},
        "index_set": list(out.index_set),
        "taus": out.taus,
        "p": list(out.p.coefficients),
        "gammas": out.gammas,
        "alpha": out.alpha,
        "h0_prime": out.h0_prime,
        "d": out.d,
        "recovered_down": list(out.recovered_down.coefficients),
        "hankel": hankel,
        "checks": {
            "interlacing": True,
            "exception_case": False,
            "cardinality": True,
            "gammas_positive": bool(np.all(out.gammas > 0)),
            "gamma_asymptotics": bool(out.asymptotics_ok),
            "asymptotic_ratios": out.asymptotic_ratios,
        },
    }


def _hankel_block(data, out) -> dict:
    down, info = inv.hankel_recover_down(data.lambdas, out.gammas, out.d, data.L, data.r, full_output=True)
    return {
        "down": list(down.coefficients),
        "roots": list(np.real(down.roots())) if down.degree else [],
        "moments": info["moments"],
        "tail_bounds": info["tail_bounds"],
        "min_eigenvalue": info["min_eigenvalue"],
    }


# ---------------------------------------------------------------------------
# subcommands


def _with_tol(pf: ProblemFile, tol_eig: float | None) -> ds.BoundaryValueProblem:
    p = pf.problem
    if tol_eig is None:
        return p
    return replace(p, options=replace(p.options, tol_eig=tol_eig))


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run_direct(path, n: int | None = None, out=None, tol_eig: float | None = None) -> int:
    pf = load_problem(path)
    p = _with_tol(pf, tol_eig)
    count = (n if n is not None else (pf.n_eigs if pf.n_eigs is not None else 20)) + 1
    phi = ds.solve(p, count, "Phi")
    psi = ds.solve(p, count, "Psi")
    _emit(spectra_csv(phi, psi), out)
    return EXIT_OK


def run_invert(lambda_csv, mu_csv=None, index_set=(), out=None, kmax: int | None = None) -> int:
    lam, mu = load_pair(lambda_csv, mu_csv)
    data = inv.validate_two_spectra(lam, mu)
    if kmax is not None:
        good, attempts = inv.enumerate_candidates(data, kmax)
        report = {
            "fit": {"L": data.L, "sigma": data.sigma, "nu": data.nu, "r": data.r},
            "candidates": [
                {"index_set": list(c.index_set), "admissible": c.output is not None and not c.note,
                 "note": c.note,
                 "gamma0": None if c.output is None else c.output.gammas[0]}
                for c in attempts
            ],
        }
        _emit(dump_report(report), out)
        return EXIT_OK if any(o.asymptotics_ok for o in good) else EXIT_INADMISSIBLE
    res = inv.recover_spectral_data(data, tuple(index_set))
    report = inverse_report(data, res, _hankel_block(data, res))
    _emit(dump_report(report), out)
    return EXIT_OK if res.asymptotics_ok else EXIT_INADMISSIBLE


@dataclass(frozen=True)
class RoundTripTolerances:
    gamma: float = 1e-4
    pole: float = 1e-4
    nu_relative: float = 0.02


def roundtrip_table(rep: inv.RoundTripReport, tol: RoundTripTolerances = RoundTripTolerances()) -> tuple[str, bool]:
    th, fi = rep.theory, rep.fitted
    rows = [
        ("max gamma error (n <= N/2)", rep.max_gamma_error, tol.gamma),
        ("max pole error", rep.max_pole_error, tol.pole),
        ("nu relative error", abs(fi["nu"] / th["nu"] - 1), tol.nu_relative),
        ("L mismatch", abs(fi["L"] - th["L"]), 0.0),
        ("r mismatch", abs(fi["r"] - th["r"]), 0.0),
    ]
    lines = [f"{'quantity':<28} {'value':>24} {'tolerance':>10}  status"]
    ok = True
    for name, val, t in rows:
        good = val <= t
        ok &= good
        lines.append(f"{name:<28} {_fmt(val):>24} {t:>10.3g}  {'ok' if good else 'FAIL'}")
    lines.append(f"fitted L={_fmt(fi['L'])} sigma={_fmt(fi['sigma'])} nu={_fmt(fi['nu'])} r={fi['r']}")
    lines.append(f"theory L={_fmt(th['L'])} nu={_fmt(th['nu'])} r={th['r']}")
    if rep.hankel_min_eigenvalue is not None:
        lines.append(f"hankel min eigenvalue {_fmt(rep.hankel_min_eigenvalue)}")
    return "\n".join(lines) + "\n", ok


def run_roundtrip(path, n: int = 40, tol_eig: float | None = None, out=None) -> int:
    pf = load_problem(path)
    rep = inv.roundtrip(_with_tol(pf, tol_eig), n)
    text, ok = roundtrip_table(rep)
    _emit(text, out)
    return EXIT_OK if ok else EXIT_SOLVER


def run_fit(lambda_csv, mu_csv=None, out=None) -> int:
    lam = _sequence(read_spectra(lambda_csv), "lambda")
    L, sigma, resid = fit_asymptotics(lam)
    report = {"L": L, "sigma": sigma, "residual": resid}
    if mu_csv is not None:
        lam, mu = load_pair(lambda_csv, mu_csv)
        report["r"], report["nu"] = fit_gap(lam, mu, L)
    _emit(dump_report(report), out)
    return EXIT_OK


def run_products(spectrum_csv, at, L: float | None = None, out=None) -> int:
    zeros = _sequence(read_spectra(spectrum_csv), "lambda")
    if L is None:
        L = fit_asymptotics(zeros)[0]
    G = build(zeros, L)
    pts = np.asarray(at, dtype=float)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "value"])
    for x, v in zip(pts, np.atleast_1d(G(pts))):
        w.writerow([_fmt(x), _fmt(v)])
    _emit(buf.getvalue(), out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    vals = tuple(int(t) for t in text.split(","))
    if any(v < 0 for v in vals) or list(vals) != sorted(set(vals)):
        raise argparse.ArgumentTypeError("indices must be ascending nonnegative integers")
    return vals


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twospec", description="Two-spectra problems with rational boundary conditions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("direct", help="eigenvalues and norming constants of both problems")
    p.add_argument("problem")
    p.add_argument("--n", type=int, default=None, help="largest eigenvalue index")
    p.add_argument("--out")
    p.add_argument("--tol-eig", type=float)

    p = sub.add_parser("invert", help="recover spectral data from two spectra")
    p.add_argument("lambdas")
    p.add_argument("mus", nargs="?")
    p.add_argument("--indices", type=_int_list, default=())
    p.add_argument("--kmax", type=int, help="enumerate all index sets below KMAX instead")
    p.add_argument("--out")

    p = sub.add_parser("roundtrip", help="direct solve, invert and compare")
    p.add_argument("problem")
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--tol-eig", type=float)
    p.add_argument("--out")

    p = sub.add_parser("fit", help="fit the asymptotic parameters of one or two spectra")
    p.add_argument("lambdas")
    p.add_argument("mus", nargs="?")
    p.add_argument("--out")

    p = sub.add_parser("products", help="evaluate the product built from a spectrum")
    p.add_argument("spectrum")
    p.add_argument("--at", type=_float_list, required=True, help="comma-separated points")
    p.add_argument("--L", type=float)
    p.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "direct":
            return run_direct(args.problem, args.n, args.out, args.tol_eig)
        if args.command == "invert":
            return run_invert(args.lambdas, args.mus, args.indices, args.out, args.kmax)
        if args.command == "roundtrip":
            return run_roundtrip(args.problem, args.n, args.tol_eig, args.out)
        if args.command == "fit":
            return run_fit(args.lambdas, args.mus, args.out)
        return run_products(args.spectrum, args.at, args.L, args.out)
    except (InputError, ParseError, ValueError) as exc:
        code, msg = EXIT_INPUT, exc
    except InadmissibleData as exc:
        code, msg = EXIT_INADMISSIBLE, exc
    except (SolverError, SpectralError) as exc:
        code, msg = EXIT_SOLVER, exc
    name = type(msg).__name__
    text = str(msg)
    print(text if text.startswith(name) or isinstance(msg, SpectralError) else f"{name}: {text}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
