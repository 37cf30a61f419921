"""Finite-epsilon scalar propagator and Gaussian measurement corridors on small lattices."""

from .lattice import (
    ClassicalField,
    ComplexKernel,
    FieldConfiguration,
    LatticeSpec,
    ModelParams,
    SourceField,
    build_kernel,
    build_laplacian,
    build_lattice,
)
from .gaussian import (
    GaussianEvaluation,
    PropagatorValue,
    SourceShift,
    evaluate,
    fd_derivative,
    log_partition,
    two_point,
    wick_n_point,
)
from .equivalence import (
    CorridorParams,
    MenskyWeight,
    complete_square,
    equivalence_check,
    mensky_log_partition,
    shifted_log_partition,
    source_from_classical,
)

__version__ = "0.1.0"
