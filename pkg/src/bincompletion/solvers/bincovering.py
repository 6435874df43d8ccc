"""
Bin completion for bin covering
"""

from typing import Optional, Tuple

from ..bounds import covering_greedy_lower, covering_upper_bound
from ..gen import GenCursor, Side
from ..models import (
    BinAssignment,
    Instance,
    ProblemKind,
    Solution,
    SolverConfig,
    SolveReport,
)
from .base import BinCompletionSearch, Branching, SearchNode


class BinCoveringSearch(BinCompletionSearch):
    """
    Each node covers one more bin with a minimal assignment holding the
    largest remaining item. Once the remaining weight cannot reach the quota
    the node is a leaf and its items go to overflow.
    """

    solver_name = "bc-bincovering"
    kind = ProblemKind.BINCOVERING
    side = Side.COVERING

    def __init__(self, instance: Instance, config: Optional[SolverConfig] = None):
        super().__init__(instance, config)
        self.quota = instance.containers[0]

    def _remaining_weight(self, node: SearchNode) -> int:
        return sum(self.items[p].weight for p in node.remaining)

    def initial_incumbent(self) -> None:
        heuristic = covering_greedy_lower(self.items, self.quota)
        self.offer(heuristic.objective, lambda: heuristic)

    def root(self) -> SearchNode:
        return SearchNode(remaining=tuple(range(len(self.items))))

    def is_leaf(self, node: SearchNode) -> bool:
        return self._remaining_weight(node) < self.quota

    def leaf_objective(self, node: SearchNode) -> Optional[int]:
        return node.score

    def bound(self, node: SearchNode) -> Optional[int]:
        return node.score + covering_upper_bound(self.solution_items(node.remaining), self.quota)

    def branch(self, node: SearchNode) -> Branching:
        seed = node.remaining[0]
        cursor = GenCursor(
            Side.COVERING,
            self.quota,
            self.solution_items(node.remaining),
            required=self.items[seed].id,
        )
        return Branching(
            bin_index=node.score,
            bound=self.quota,
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
            overflow=BinAssignment.of(self.solution_items(node.remaining)),
            objective=node.score,
        )


def solve_bincovering(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    return BinCoveringSearch(instance, config).run()
