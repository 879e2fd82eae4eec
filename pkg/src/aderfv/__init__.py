"""Fifth-order one-stage ADER finite-volume solver with Hermite-WENO
reconstruction for 1D/2D hyperbolic conservation laws."""

from .equations import Burgers, Euler1D, Euler2D, NonPhysicalState, SolverError
from .driver import BoundarySpec, ConservedField, SolverConfig, advance_step, compute_dt, run
from .reconstruction import WeightConfig

__all__ = [
    "Burgers",
    "Euler1D",
    "Euler2D",
    "NonPhysicalState",
    "SolverError",
    "BoundarySpec",
    "ConservedField",
    "SolverConfig",
    "WeightConfig",
    "advance_step",
    "compute_dt",
    "run",
]

__version__ = "0.1.0"
