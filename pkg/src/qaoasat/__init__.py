"""QAOA statevector experiments on random MAX-k-SAT.

Measures reachability deficits (best attainable energy minus the true
minimum) as a function of clause density and circuit depth, for the
transverse-field and plus-projector drivers, plus an analytic two-amplitude
model of single-target search.
"""

__version__ = "0.1.0"

from .errors import DimacsError, ResourceLimitError
from .grover import (
    TwoLevelState,
    grover_energy,
    grover_minimize,
    grover_pstar,
    initial_state,
    search_objective,
    step,
)
from .instances import (
    Literal,
    SatInstance,
    brute_force_min_violations,
    generate_instance,
    parse_dimacs,
    write_dimacs,
)
from .objective import DiagonalObjective, embed, expectation
from .optimizer import OptimConfig, OptimResult, critical_depth, minimize
from .simulator import Driver, Params, ansatz, apply_driver, apply_phase, ground_overlap, plus_state

__all__ = [
    "DiagonalObjective",
    "DimacsError",
    "Driver",
    "Literal",
    "OptimConfig",
    "OptimResult",
    "Params",
    "ResourceLimitError",
    "SatInstance",
    "TwoLevelState",
    "ansatz",
    "apply_driver",
    "apply_phase",
    "brute_force_min_violations",
    "critical_depth",
    "embed",
    "expectation",
    "generate_instance",
    "ground_overlap",
    "grover_energy",
    "grover_minimize",
    "grover_pstar",
    "initial_state",
    "minimize",
    "parse_dimacs",
    "plus_state",
    "search_objective",
    "step",
    "write_dimacs",
]
