"""
Solvers: bin completion per problem kind, the item-oriented baseline and the
exhaustive oracle behind one ``solve`` entry point.
"""

from typing import Dict, Literal, Optional, Type

from ..models import Instance, ProblemKind, SolverConfig, SolveReport
from .base import BinCompletionSearch, SearchBase, SearchNode
from .bincovering import BinCoveringSearch, solve_bincovering
from .binpacking import BinPackingSearch, solve_binpacking
from .exhaustive import ExhaustiveSearch, solve_exhaustive
from .item_oriented import ItemOrientedSearch, solve_item_oriented
from .mccp import MccpSearch, solve_mccp
from .mkp import MkpSearch, solve_mkp

BIN_COMPLETION: Dict[ProblemKind, Type[BinCompletionSearch]] = {
    ProblemKind.BINPACKING: BinPackingSearch,
    ProblemKind.MKP: MkpSearch,
    ProblemKind.BINCOVERING: BinCoveringSearch,
    ProblemKind.MCCP: MccpSearch,
}

SolverName = Literal["bc", "item", "oracle"]


def solve(
    instance: Instance,
    config: Optional[SolverConfig] = None,
    solver: SolverName = "bc",
    oracle_max_items: int = 16,
) -> SolveReport:
    """
    Solve an instance.

    Args:
        instance: Problem instance of any kind
        config: Search configuration (defaults apply when None)
        solver: "bc" (bin completion), "item" (item-oriented baseline) or
                "oracle" (exhaustive enumeration)
        oracle_max_items: Largest instance the oracle accepts

    Returns:
        SolveReport with the best solution found and its status

    Raises:
        OracleLimitError: oracle requested on a too-large instance
        ValueError: unknown solver name
    """
    if solver == "bc":
        return BIN_COMPLETION[instance.kind](instance, config).run()
    if solver == "item":
        return solve_item_oriented(instance, config)
    if solver == "oracle":
        return solve_exhaustive(instance, config, oracle_max_items)
    raise ValueError(f"Unknown solver: {solver}")


__all__ = [
    "BIN_COMPLETION",
    "BinCompletionSearch",
    "BinCoveringSearch",
    "BinPackingSearch",
    "ExhaustiveSearch",
    "ItemOrientedSearch",
    "MccpSearch",
    "MkpSearch",
    "SearchBase",
    "SearchNode",
    "solve",
    "solve_bincovering",
    "solve_binpacking",
    "solve_exhaustive",
    "solve_item_oriented",
    "solve_mccp",
    "solve_mkp",
]
