"""Heat and Poisson kernels on the constant-curvature model spaces.

The package evaluates the radial heat kernel and the Poisson (harmonic
extension) kernel on Euclidean space, the round sphere and hyperbolic
space in every dimension, through several independent representations:
closed forms, dimension-raising recursions, descent integrals, theta
series, subordination and shifted-contour integrals.  The representations
cross-validate each other; :func:`ckernels.analysis.run_suite` packages
the checks.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .analysis import (
    ValidationReport,
    compare,
    evaluate,
    fit_spectral_shift,
    heat_mass,
    pde_residual,
    poisson_mass,
    representation_names,
    run_suite,
    semigroup_check,
    spectral_shift,
    subordinate,
    subordination_sweep,
)
from .errors import ContourError, ConvergenceError, DomainError, SingularPointError
from .geometry import KernelQuery, Space, radial_laplacian, space_from_name
from .jets import Jet, raise_jet, raise_operator, raise_origin_jet
from .quadrature import (
    ContourSpec,
    QuadResult,
    contour_spec,
    integrate_adaptive,
    integrate_contour,
    integrate_sqrt_endpoint,
    integrate_to_infinity,
)

__all__ = [
    "__version__",
    "ContourError",
    "ContourSpec",
    "ConvergenceError",
    "DomainError",
    "Jet",
    "KernelQuery",
    "QuadResult",
    "SingularPointError",
    "Space",
    "ValidationReport",
    "compare",
    "contour_spec",
    "evaluate",
    "fit_spectral_shift",
    "heat_mass",
    "integrate_adaptive",
    "integrate_contour",
    "integrate_sqrt_endpoint",
    "integrate_to_infinity",
    "pde_residual",
    "poisson_mass",
    "radial_laplacian",
    "raise_jet",
    "raise_operator",
    "raise_origin_jet",
    "representation_names",
    "run_suite",
    "semigroup_check",
    "space_from_name",
    "spectral_shift",
    "subordinate",
    "subordination_sweep",
]
