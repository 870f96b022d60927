"""Information transfer capacity (ITC) and anti-core analysis of XX spin chains."""
from .chain import ChainSpec, Hamiltonian1, build_hamiltonian, center_index
from .errors import ChainError, ConvergenceError, CrossCheckError
from .spectral import (
    SpectralDecomposition,
    SpectrumSource,
    analytic_spectrum,
    numeric_spectrum,
    spectrum,
)
from .itc import ITCMatrix, inertia, itc_matrix, p_max, p_t, pmax_sine, row_sum_check
from .asymptotics import (
    Frame,
    ParityClass,
    ReducedPair,
    diameter_constants,
    doubly_infinite_pmax,
    reduce_pair,
    semi_infinite_pmax_closed,
    semi_infinite_pmax_series,
    zeta_identity_check,
)
from .geometry import (
    diameter,
    find_anticore,
    four_point_delta,
    geometry_report,
    path_product_bound_check,
)
from .biassweep import decoupling_report, scaling_constant_estimate, sweep

__version__ = "0.1.0"
