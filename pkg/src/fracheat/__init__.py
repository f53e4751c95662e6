"""Heat-content energies of sets under the fractional heat semigroup.

E_t^s(E) = int_E int_{E^c} P^s(x - y, t) dx dy, its small-time behaviour and
the perimeter functionals it converges to.
"""

from ._accel import backend_name
from ._errors import ConfigurationError, DomainError, FracHeatError, NumericalError
from .asymptotics import (
    GammaLimitEstimate,
    constant_disambiguation,
    fit_gamma_limit,
    gamma_limit_experiment,
    oscillation_experiment,
    riesz_isoperimetric_check,
    run_sweep,
)
from .energy import (
    EnergyCurve,
    energy_direct_quad_half,
    energy_from_spectrum,
    energy_identity_check,
    halfspace_rate,
    scaling_function,
    slab_energy_exact,
)
from .kernel import FractionalOrder, KernelSpec, kernel_mass, marginal_1d, radial_profile
from .perimeter import (
    PerimeterValue,
    frac_perimeter_direct,
    frac_perimeter_spectral,
    frac_perimeter_subordination,
    perimeter_grid,
)
from .shapes import Checkerboard, Disk, Polygon, Rectangle, Slab, geometry, radial_spectrum, rasterize, square
from .specialfn import ConstantsTable, beta_fn, cns_constant, gamma_fn
from .spectral import (
    IndicatorField,
    ScalarField,
    SpectralField,
    TorusGrid,
    evolve_semigroup,
    forward_transform,
    hs_norm_squared,
    inverse_transform,
    sobolev_seminorm,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "ConfigurationError",
    "DomainError",
    "FracHeatError",
    "NumericalError",
    "GammaLimitEstimate",
    "constant_disambiguation",
    "fit_gamma_limit",
    "gamma_limit_experiment",
    "oscillation_experiment",
    "riesz_isoperimetric_check",
    "run_sweep",
    "EnergyCurve",
    "energy_direct_quad_half",
    "energy_from_spectrum",
    "energy_identity_check",
    "halfspace_rate",
    "scaling_function",
    "slab_energy_exact",
    "FractionalOrder",
    "KernelSpec",
    "kernel_mass",
    "marginal_1d",
    "radial_profile",
    "PerimeterValue",
    "frac_perimeter_direct",
    "frac_perimeter_spectral",
    "frac_perimeter_subordination",
    "perimeter_grid",
    "Checkerboard",
    "Disk",
    "Polygon",
    "Rectangle",
    "Slab",
    "geometry",
    "radial_spectrum",
    "rasterize",
    "square",
    "ConstantsTable",
    "beta_fn",
    "cns_constant",
    "gamma_fn",
    "IndicatorField",
    "ScalarField",
    "SpectralField",
    "TorusGrid",
    "evolve_semigroup",
    "forward_transform",
    "hs_norm_squared",
    "inverse_transform",
    "sobolev_seminorm",
]
