"""
Exhaustive oracle

Enumerates every item-to-bin (or discard) map and keeps the best feasible
one. The only pruning is a trivial counting cutoff per kind, so results do not
depend on the bounds module. Meant for small instances and for testing.
"""

from typing import List, Optional

from ..exceptions import OracleLimitError
from ..models import (
    BinAssignment,
    Instance,
    Item,
    ProblemKind,
    Solution,
    SolverConfig,
    SolveReport,
    SolveStatus,
)
from .base import SearchBase

DEFAULT_MAX_ITEMS = 16


class ExhaustiveSearch(SearchBase):
    solver_name = "oracle"

    def __init__(
        self,
        instance: Instance,
        config: Optional[SolverConfig] = None,
        max_items: int = DEFAULT_MAX_ITEMS,
    ):
        if instance.n > max_items:
            raise OracleLimitError(
                f"Exhaustive oracle accepts at most {max_items} items, got {instance.n}",
                n_items=instance.n,
                limit=max_items,
            )
        super().__init__(instance, config)
        self.values_left = [0] * (len(self.items) + 1)
        self.weights_left = [0] * (len(self.items) + 1)
        for k in range(len(self.items) - 1, -1, -1):
            self.values_left[k] = self.values_left[k + 1] + self.items[k].value
            self.weights_left[k] = self.weights_left[k + 1] + self.items[k].weight

    def precheck(self) -> Optional[SolveStatus]:
        if self.instance.kind is ProblemKind.BINPACKING:
            if any(it.weight > self.instance.containers[0] for it in self.items):
                return SolveStatus.INFEASIBLE
        return None

    def search(self) -> None:
        kind = self.instance.kind
        if kind is ProblemKind.BINPACKING:
            self._pack([], 0)
        elif kind is ProblemKind.BINCOVERING:
            self._cover([], [], 0)
        else:
            self._subset([[] for _ in self.instance.containers], 0)

    def _loads(self, bins: List[List[Item]]) -> List[int]:
        return [sum(it.weight for it in b) for b in bins]

    def _pack(self, bins: List[List[Item]], k: int) -> None:
        self._tick()
        if self.incumbent is not None and len(bins) >= self.incumbent:
            return
        if k == len(self.items):
            self.offer(len(bins), lambda: Solution(
                assignments=tuple(BinAssignment.of(b) for b in bins),
                objective=len(bins),
            ))
            return
        c = self.instance.containers[0]
        it = self.items[k]
        for b, load in enumerate(self._loads(bins)):
            if load + it.weight <= c:
                bins[b].append(it)
                self._pack(bins, k + 1)
                bins[b].pop()
        bins.append([it])
        self._pack(bins, k + 1)
        bins.pop()

    def _cover(self, bins: List[List[Item]], overflow: List[Item], k: int) -> None:
        self._tick()
        q = self.instance.containers[0]
        loads = self._loads(bins)
        done = sum(1 for load in loads if load >= q)
        if self.incumbent is not None:
            # every further covered bin needs q weight from open bins or unplaced items
            pending = sum(load for load in loads if load < q) + self.weights_left[k]
            if done + pending // q <= self.incumbent:
                return
        if k == len(self.items):
            covered = [b for b, load in zip(bins, loads) if load >= q]
            spill = list(overflow) + [it for b, load in zip(bins, loads) if load < q for it in b]
            self.offer(done, lambda: Solution(
                assignments=tuple(BinAssignment.of(b) for b in covered),
                overflow=BinAssignment.of(spill),
                objective=done,
            ))
            return
        it = self.items[k]
        for b, load in enumerate(loads):
            if load < q:
                bins[b].append(it)
                self._cover(bins, overflow, k + 1)
                bins[b].pop()
        bins.append([it])
        self._cover(bins, overflow, k + 1)
        bins.pop()
        overflow.append(it)
        self._cover(bins, overflow, k + 1)
        overflow.pop()

    def _subset(self, bins: List[List[Item]], k: int) -> None:
        """MKP and MCCP: each item goes to one bin or stays out."""
        self._tick()
        kind = self.instance.kind
        containers = self.instance.containers
        loads = self._loads(bins)
        value = sum(it.value for b in bins for it in b)

        if kind is ProblemKind.MKP:
            if self.incumbent is not None and value + self.values_left[k] <= self.incumbent:
                return
            if k == len(self.items):
                self.offer(value, lambda: self._subset_solution(bins, value))
                return
        else:
            if self.incumbent is not None and value >= self.incumbent:
                return
            if all(load >= q for load, q in zip(loads, containers)):
                self.offer(value, lambda: self._subset_solution(bins, value))
                return
            if k == len(self.items):
                return

        it = self.items[k]
        for b, load in enumerate(loads):
            if kind is ProblemKind.MKP and load + it.weight > containers[b]:
                continue
            if kind is ProblemKind.MCCP and load >= containers[b]:
                continue
            bins[b].append(it)
            self._subset(bins, k + 1)
            bins[b].pop()
        self._subset(bins, k + 1)

    def _subset_solution(self, bins: List[List[Item]], value: int) -> Solution:
        return Solution(
            assignments=tuple(BinAssignment.of(b) for b in bins),
            objective=value,
        )


def solve_exhaustive(
    instance: Instance,
    config: Optional[SolverConfig] = None,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> SolveReport:
    """
    Exact optimum by complete enumeration.

    Raises:
        OracleLimitError: when the instance has more than ``max_items`` items
    """
    return ExhaustiveSearch(instance, config, max_items).run()
