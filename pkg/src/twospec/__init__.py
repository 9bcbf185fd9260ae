"""Direct and two-spectra inverse problems for Schrodinger operators with
rational Herglotz-Nevanlinna boundary conditions."""
from .direct_solver import (
    BoundaryValueProblem,
    Potential,
    SolverOptions,
    SpectralData,
    char_Phi,
    char_Psi,
    eigenvalues,
    norming_constants,
    solve,
    weyl_m,
)
from .entire_products import ProductFunction, build, fit_asymptotics, fit_gap, interlace_check
from .hn_functions import Polynomial, RationalBoundaryFunction
from .inverse import (
    InverseOutput,
    TwoSpectraData,
    enumerate_candidates,
    hankel_recover_down,
    recover_spectral_data,
    roundtrip,
    tau_zeros,
    validate_two_spectra,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryValueProblem", "Potential", "SolverOptions", "SpectralData",
    "char_Phi", "char_Psi", "eigenvalues", "norming_constants", "solve", "weyl_m",
    "ProductFunction", "build", "fit_asymptotics", "fit_gap", "interlace_check",
    "Polynomial", "RationalBoundaryFunction",
    "InverseOutput", "TwoSpectraData", "enumerate_candidates", "hankel_recover_down",
    "recover_spectral_data", "roundtrip", "tau_zeros", "validate_two_spectra",
]
