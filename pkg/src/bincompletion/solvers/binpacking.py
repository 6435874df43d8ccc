"""
Bin completion for bin packing
"""

from typing import Optional, Tuple

import structlog

from ..bounds import best_fit_decreasing, binpacking_lower_bound
from ..gen import GenCursor, Side
from ..models import (
    BinAssignment,
    Instance,
    ProblemKind,
    Solution,
    SolverConfig,
    SolveReport,
    SolveStatus,
)
from .base import BinCompletionSearch, Branching, SearchNode

logger = structlog.get_logger(__name__)


class BinPackingSearch(BinCompletionSearch):
    """
    Each node fills one bin with an undominated maximal assignment holding the
    largest remaining item; the incumbent starts from best-fit decreasing.
    """

    solver_name = "bc-binpacking"
    kind = ProblemKind.BINPACKING
    side = Side.PACKING

    def __init__(self, instance: Instance, config: Optional[SolverConfig] = None):
        super().__init__(instance, config)
        self.capacity = instance.containers[0]

    def precheck(self) -> Optional[SolveStatus]:
        if any(it.weight > self.capacity for it in self.items):
            logger.info("Item exceeds capacity", capacity=self.capacity)
            return SolveStatus.INFEASIBLE
        return None

    def initial_incumbent(self) -> None:
        heuristic = best_fit_decreasing(self.items, self.capacity)
        self.offer(heuristic.objective, lambda: heuristic)

    def root(self) -> SearchNode:
        return SearchNode(remaining=tuple(range(len(self.items))))

    def is_leaf(self, node: SearchNode) -> bool:
        return not node.remaining

    def leaf_objective(self, node: SearchNode) -> Optional[int]:
        return node.score

    def bound(self, node: SearchNode) -> Optional[int]:
        lower = binpacking_lower_bound(self.solution_items(node.remaining), self.capacity)
        if node.score == 0 and self.incumbent == lower:
            logger.debug("Root closed by lower bound", bound=lower)
        return node.score + lower

    def branch(self, node: SearchNode) -> Branching:
        seed = node.remaining[0]
        cursor = GenCursor(
            Side.PACKING,
            self.capacity,
            self.solution_items(node.remaining),
            required=self.items[seed].id,
        )
        return Branching(
            bin_index=node.score,
            bound=self.capacity,
            cursor=cursor,
            pool=node.remaining,
            seed=(seed,),
        )

    def child(self, node: SearchNode, branching: Branching, assignment: Tuple[int, ...]) -> SearchNode:
        used = set(assignment)
        return SearchNode(
            remaining=tuple(p for p in node.remaining if p not in used),
            committed=node.committed + ((branching.bin_index, assignment),),
            score=node.score + 1,
        )

    def build_solution(self, node: SearchNode) -> Solution:
        return Solution(
            assignments=tuple(
                BinAssignment.of(self.solution_items(a)) for _, a in node.committed
            ),
            objective=node.score,
        )


def solve_binpacking(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    return BinPackingSearch(instance, config).run()
