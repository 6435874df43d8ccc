"""
Bin completion for the min-cost covering problem
"""

from typing import Optional, Tuple

from ..bounds import mccp_l2_bound
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


class MccpSearch(BinCompletionSearch):
    """Covers the bin with the smallest quota first; every bin must be covered."""

    solver_name = "bc-mccp"
    kind = ProblemKind.MCCP
    side = Side.COVERING

    def root(self) -> SearchNode:
        return SearchNode(
            remaining=tuple(range(len(self.items))),
            open_bins=tuple(range(self.instance.m)),
        )

    def is_leaf(self, node: SearchNode) -> bool:
        return not node.open_bins

    def leaf_objective(self, node: SearchNode) -> Optional[int]:
        return node.score

    def bound(self, node: SearchNode) -> Optional[int]:
        quotas = [self.instance.containers[b] for b in node.open_bins]
        relaxed = mccp_l2_bound(self.solution_items(node.remaining), quotas)
        return None if relaxed is None else node.score + relaxed

    def choose_bin(self, node: SearchNode) -> int:
        containers = self.instance.containers
        return min(node.open_bins, key=lambda b: (containers[b], b))

    def branch(self, node: SearchNode) -> Branching:
        bin_index = self.choose_bin(node)
        quota = self.instance.containers[bin_index]
        cursor = GenCursor(Side.COVERING, quota, self.solution_items(node.remaining))
        return Branching(bin_index=bin_index, bound=quota, cursor=cursor, pool=node.remaining)

    def child(self, node: SearchNode, branching: Branching, assignment: Tuple[int, ...]) -> SearchNode:
        used = set(assignment)
        return SearchNode(
            remaining=tuple(p for p in node.remaining if p not in used),
            open_bins=tuple(b for b in node.open_bins if b != branching.bin_index),
            committed=node.committed + ((branching.bin_index, assignment),),
            score=node.score + sum(self.items[p].value for p in assignment),
        )

    def build_solution(self, node: SearchNode) -> Solution:
        per_bin = {b: a for b, a in node.committed}
        return Solution(
            assignments=tuple(
                BinAssignment.of(self.solution_items(per_bin.get(b, ())))
                for b in range(self.instance.m)
            ),
            objective=node.score,
        )


def solve_mccp(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    return MccpSearch(instance, config).run()
