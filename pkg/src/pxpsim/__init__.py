"""Dynamics of the PXP chain in the Rydberg-blockaded subspace, with
local-fidelity and spectral diagnostics and a deterministic CLI runner."""

__version__ = "0.1.0"

from .basis import BlockadedBasis, BipartitionMap, enumerate_basis, fib
from .errors import (
    CapacityError,
    DomainError,
    NumericalError,
    PxpError,
    RangeError,
    SelectionError,
    ShapeError,
    UnsupportedConfigurationError,
    ValidationError,
)
from .hamiltonian import DENSE_LIMIT, SparseHamiltonian, build_pxp
from .observables import (
    BlockDensityMatrix,
    QubitDensityMatrix,
    TimeSeries,
    avg_local_fidelity,
    block_rdm,
    cesaro_average,
    entanglement_entropy,
    global_fidelity,
    local_fidelities,
    magnetization,
    max_trace_distance,
    product_local_fidelity,
    running_std,
    running_std_conventional,
    single_site_rdm,
    site_magnetizations,
    site_rdm_stack,
    trace_distance,
    uhlmann_fidelity,
)
from .propagator import (
    EigenDecomposition,
    ExactPropagator,
    TimeGrid,
    diagonalize,
    evolve_exact,
    evolve_krylov,
    extremal_eigenpair,
)
from .spectral import (
    OverlapSpectrum,
    ScarSet,
    dominant_overlap,
    identify_scars,
    longtime_average,
    overlaps,
    scar_bound,
    survival_amplitude,
)
from .states import StateSpec, StateVector, make_state, overlap, parse_theta

__all__ = [
    "BlockadedBasis",
    "BipartitionMap",
    "BlockDensityMatrix",
    "CapacityError",
    "DENSE_LIMIT",
    "DomainError",
    "EigenDecomposition",
    "ExactPropagator",
    "NumericalError",
    "OverlapSpectrum",
    "PxpError",
    "QubitDensityMatrix",
    "RangeError",
    "ScarSet",
    "SelectionError",
    "ShapeError",
    "SparseHamiltonian",
    "StateSpec",
    "StateVector",
    "TimeGrid",
    "TimeSeries",
    "UnsupportedConfigurationError",
    "ValidationError",
    "avg_local_fidelity",
    "block_rdm",
    "build_pxp",
    "cesaro_average",
    "diagonalize",
    "dominant_overlap",
    "entanglement_entropy",
    "enumerate_basis",
    "evolve_exact",
    "evolve_krylov",
    "extremal_eigenpair",
    "fib",
    "global_fidelity",
    "identify_scars",
    "local_fidelities",
    "longtime_average",
    "magnetization",
    "make_state",
    "max_trace_distance",
    "overlap",
    "overlaps",
    "parse_theta",
    "product_local_fidelity",
    "running_std",
    "running_std_conventional",
    "scar_bound",
    "single_site_rdm",
    "site_magnetizations",
    "site_rdm_stack",
    "survival_amplitude",
    "trace_distance",
    "uhlmann_fidelity",
]
