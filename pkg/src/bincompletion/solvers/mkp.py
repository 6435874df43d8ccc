"""
Bin completion for the 0-1 multiple knapsack problem
"""

from typing import List, Optional, Tuple

import numpy as np

from ..bounds import smkp_upper_bound
from ..gen import GenCursor, Side
from ..models import (
    BinAssignment,
    Instance,
    Item,
    ProblemKind,
    Solution,
    SolverConfig,
    SolveReport,
)
from .base import BinCompletionSearch, Branching, SearchNode


class MkpSearch(BinCompletionSearch):
    """
    Fills the bin with the least capacity first, trying every undominated
    maximal assignment for it; the node bound is the surrogate (aggregate
    capacity) knapsack over the remaining items and bins.
    """

    solver_name = "bc-mkp"
    kind = ProblemKind.MKP
    side = Side.PACKING

    def __init__(self, instance: Instance, config: Optional[SolverConfig] = None):
        super().__init__(instance, config)
        rng = np.random.Generator(np.random.PCG64(self.config.rng_seed))
        # random tie-break among equal capacities, fixed for the whole run
        self.rank: List[int] = [int(r) for r in rng.permutation(instance.m)]

    def initial_incumbent(self) -> None:
        empty = Solution(
            assignments=tuple(BinAssignment() for _ in range(self.instance.m)),
            objective=0,
        )
        self.offer(0, lambda: empty)

    def root(self) -> SearchNode:
        return SearchNode(
            remaining=tuple(range(len(self.items))),
            open_bins=tuple(range(self.instance.m)),
        )

    def is_leaf(self, node: SearchNode) -> bool:
        return not node.open_bins or not node.remaining

    def leaf_objective(self, node: SearchNode) -> Optional[int]:
        return node.score

    def bound(self, node: SearchNode) -> Optional[int]:
        capacities = [self.instance.containers[b] for b in node.open_bins]
        return node.score + smkp_upper_bound(self.solution_items(node.remaining), capacities)

    def choose_bin(self, node: SearchNode) -> int:
        containers = self.instance.containers
        return min(node.open_bins, key=lambda b: (containers[b], self.rank[b], b))

    def branch(self, node: SearchNode) -> Branching:
        bin_index = self.choose_bin(node)
        capacity = self.instance.containers[bin_index]
        pool = tuple(p for p in node.remaining if self.items[p].weight <= capacity)
        cursor = GenCursor(Side.PACKING, capacity, self.solution_items(pool))
        return Branching(bin_index=bin_index, bound=capacity, cursor=cursor, pool=pool)

    def reduce(self, node: SearchNode) -> List[Item]:
        """Reduction hook run on every child; removes nothing."""
        return []

    def child(self, node: SearchNode, branching: Branching, assignment: Tuple[int, ...]) -> SearchNode:
        used = set(assignment)
        nxt = SearchNode(
            remaining=tuple(p for p in node.remaining if p not in used),
            open_bins=tuple(b for b in node.open_bins if b != branching.bin_index),
            committed=node.committed + ((branching.bin_index, assignment),),
            score=node.score + sum(self.items[p].value for p in assignment),
        )
        self.reduce(nxt)
        return nxt

    def build_solution(self, node: SearchNode) -> Solution:
        per_bin = {b: a for b, a in node.committed}
        return Solution(
            assignments=tuple(
                BinAssignment.of(self.solution_items(per_bin.get(b, ())))
                for b in range(self.instance.m)
            ),
            objective=node.score,
        )


def solve_mkp(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    return MkpSearch(instance, config).run()
