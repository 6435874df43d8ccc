"""
bincompletion
Exact bin-oriented branch-and-bound for bin packing, multiple knapsack,
bin covering and min-cost covering
"""

__version__ = "1.0.0"
__author__ = "bincompletion contributors"

from .config import SolverSettings, get_config
from .core import objective_of, validate_layout, validate_solution
from .exceptions import BinCompletionError
from .instances import GenSpec, generate_instance, read_instance, write_instance
from .models import (
    BinAssignment,
    Instance,
    Item,
    ProblemKind,
    PruningPolicy,
    Solution,
    SolverConfig,
    SolveReport,
    SolveStatus,
)
from .solvers import solve

__all__ = [
    "BinAssignment",
    "BinCompletionError",
    "GenSpec",
    "Instance",
    "Item",
    "ProblemKind",
    "PruningPolicy",
    "Solution",
    "SolveReport",
    "SolveStatus",
    "SolverConfig",
    "SolverSettings",
    "generate_instance",
    "get_config",
    "objective_of",
    "read_instance",
    "solve",
    "validate_layout",
    "validate_solution",
    "write_instance",
]
