"""
Item-oriented branch-and-bound baseline

Each level decides the bin of one item. No dominance or nogood pruning; the
bounds module supplies the pruning bounds.
"""

from typing import Callable, List, Optional, Tuple

from ..bounds import (
    best_fit_decreasing,
    covering_greedy_lower,
    mccp_l2_bound,
    mtm_greedy_bound,
    smkp_upper_bound,
)
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

Layout = Tuple[Tuple[int, ...], ...]


class ItemOrientedSearch(SearchBase):
    """
    Depth-first search over item placements.

    ``on_generate`` (optional) receives the depth and, for every branch of a
    node, the resulting bin layout as tuples of item weights.
    """

    solver_name = "item"

    def __init__(self, instance: Instance, config: Optional[SolverConfig] = None):
        super().__init__(instance, config)
        self.on_generate: Optional[Callable[[int, List[Layout]], None]] = None
        if instance.kind is ProblemKind.MKP:
            # non-increasing profit per unit weight
            self.items = sorted(
                self.items, key=lambda it: (-it.value / it.weight, -it.weight, it.id)
            )
        self.suffix_weight = [0] * (len(self.items) + 1)
        for k in range(len(self.items) - 1, -1, -1):
            self.suffix_weight[k] = self.suffix_weight[k + 1] + self.items[k].weight

    def precheck(self) -> Optional[SolveStatus]:
        if self.instance.kind is ProblemKind.BINPACKING:
            capacity = self.instance.containers[0]
            if any(it.weight > capacity for it in self.items):
                return SolveStatus.INFEASIBLE
        return None

    def initial_incumbent(self) -> None:
        kind = self.instance.kind
        c = self.instance.containers
        if kind is ProblemKind.BINPACKING:
            heuristic = best_fit_decreasing(self.items, c[0])
        elif kind is ProblemKind.BINCOVERING:
            heuristic = covering_greedy_lower(self.items, c[0])
        elif kind is ProblemKind.MKP:
            heuristic = Solution(assignments=tuple(BinAssignment() for _ in c), objective=0)
        else:
            return
        self.offer(heuristic.objective, lambda: heuristic)

    def search(self) -> None:
        kind = self.instance.kind
        if kind is ProblemKind.BINPACKING:
            self._pack([], [], 0)
        elif kind is ProblemKind.BINCOVERING:
            self._cover([], [], [], [], 0, 0)
        elif kind is ProblemKind.MKP:
            residual = list(self.instance.containers)
            self._knap([[] for _ in residual], residual, 0, 0)
        else:
            deficit = list(self.instance.containers)
            self._mccp([[] for _ in deficit], deficit, 0, 0)

    def _report(self, depth: int, layouts: Callable[[], List[Layout]]) -> None:
        if self.on_generate is not None:
            self.on_generate(depth, layouts())

    def _weights(self, bins: List[List[Item]]) -> Layout:
        return tuple(tuple(it.weight for it in b) for b in bins)

    # bin packing
    def _pack(self, bins: List[List[Item]], loads: List[int], k: int) -> None:
        self._tick()
        c = self.instance.containers[0]
        if k == len(self.items):
            self.offer(len(bins), lambda: Solution(
                assignments=tuple(BinAssignment.of(b) for b in bins),
                objective=len(bins),
            ))
            return
        free = sum(c - load for load in loads)
        overflow = max(0, self.suffix_weight[k] - free)
        if not self.may_improve(len(bins) + -(-overflow // c)):
            return

        it = self.items[k]
        targets = []
        seen = set()
        for b, load in enumerate(loads):
            if load + it.weight <= c and load not in seen:
                seen.add(load)
                targets.append(b)
        targets.append(len(bins))

        def layouts() -> List[Layout]:
            out = []
            for b in targets:
                trial = [list(x) for x in bins] + ([[]] if b == len(bins) else [])
                trial[b].append(it)
                out.append(self._weights(trial))
            return out

        self._report(k, layouts)
        for b in targets:
            if b == len(bins):
                bins.append([it])
                loads.append(it.weight)
                self._pack(bins, loads, k + 1)
                bins.pop()
                loads.pop()
            else:
                bins[b].append(it)
                loads[b] += it.weight
                self._pack(bins, loads, k + 1)
                bins[b].pop()
                loads[b] -= it.weight

    # bin covering
    def _cover(
        self,
        covered: List[List[Item]],
        open_bins: List[List[Item]],
        loads: List[int],
        overflow: List[Item],
        k: int,
        open_load: int,
    ) -> None:
        self._tick()
        q = self.instance.containers[0]
        if k == len(self.items):
            leftovers = list(overflow) + [it for b in open_bins for it in b]
            self.offer(len(covered), lambda: Solution(
                assignments=tuple(BinAssignment.of(b) for b in covered),
                overflow=BinAssignment.of(leftovers),
                objective=len(covered),
            ))
            return
        if not self.may_improve(len(covered) + (self.suffix_weight[k] + open_load) // q):
            return

        it = self.items[k]
        seen = set()
        for b, load in enumerate(loads):
            if load in seen:
                continue
            seen.add(load)
            if load + it.weight >= q:
                bin_items = open_bins.pop(b)
                loads.pop(b)
                covered.append(bin_items + [it])
                self._cover(covered, open_bins, loads, overflow, k + 1, open_load - load)
                covered.pop()
                open_bins.insert(b, bin_items)
                loads.insert(b, load)
            else:
                open_bins[b].append(it)
                loads[b] += it.weight
                self._cover(covered, open_bins, loads, overflow, k + 1, open_load + it.weight)
                open_bins[b].pop()
                loads[b] -= it.weight

        # fresh bin
        if it.weight >= q:
            covered.append([it])
            self._cover(covered, open_bins, loads, overflow, k + 1, open_load)
            covered.pop()
        else:
            open_bins.append([it])
            loads.append(it.weight)
            self._cover(covered, open_bins, loads, overflow, k + 1, open_load + it.weight)
            open_bins.pop()
            loads.pop()

        overflow.append(it)
        self._cover(covered, open_bins, loads, overflow, k + 1, open_load)
        overflow.pop()

    # multiple knapsack
    def _knap(self, bins: List[List[Item]], residual: List[int], k: int, profit: int) -> None:
        self._tick()
        if k == len(self.items):
            self.offer(profit, lambda: self._knap_solution(bins, None))
            return

        rest = self.items[k:]
        upper = profit + smkp_upper_bound(rest, residual)
        if not self.may_improve(upper):
            return
        # bound-and-bound: a greedy completion that attains the bound closes the node
        greedy = mtm_greedy_bound(rest, residual)
        self.offer(profit + greedy.objective, lambda: self._knap_solution(bins, greedy))
        if profit + greedy.objective == upper:
            return

        it = self.items[k]
        targets = []
        seen = set()
        for b in sorted(range(len(residual)), key=lambda b: (residual[b], b)):
            if it.weight <= residual[b] and residual[b] not in seen:
                seen.add(residual[b])
                targets.append(b)
        for b in targets:
            bins[b].append(it)
            residual[b] -= it.weight
            self._knap(bins, residual, k + 1, profit + it.value)
            bins[b].pop()
            residual[b] += it.weight
        self._knap(bins, residual, k + 1, profit)

    def _knap_solution(self, bins: List[List[Item]], greedy: Optional[Solution]) -> Solution:
        assignments = []
        for b, items in enumerate(bins):
            extra = list(greedy.assignments[b].items) if greedy is not None else []
            assignments.append(BinAssignment.of(items + extra))
        return Solution(
            assignments=tuple(assignments),
            objective=sum(a.value_sum for a in assignments),
        )

    # min-cost covering
    def _mccp(self, bins: List[List[Item]], deficit: List[int], k: int, cost: int) -> None:
        self._tick()
        if all(d <= 0 for d in deficit):
            self.offer(cost, lambda: Solution(
                assignments=tuple(BinAssignment.of(b) for b in bins),
                objective=cost,
            ))
            return
        if k == len(self.items):
            return
        relaxed = mccp_l2_bound(self.items[k:], [d for d in deficit if d > 0])
        if relaxed is None or not self.may_improve(cost + relaxed):
            return

        it = self.items[k]
        seen = set()
        for b, d in enumerate(deficit):
            if d <= 0 or d in seen:
                continue
            seen.add(d)
            bins[b].append(it)
            deficit[b] -= it.weight
            self._mccp(bins, deficit, k + 1, cost + it.value)
            bins[b].pop()
            deficit[b] += it.weight
        self._mccp(bins, deficit, k + 1, cost)


def solve_item_oriented(instance: Instance, config: Optional[SolverConfig] = None) -> SolveReport:
    return ItemOrientedSearch(instance, config).run()
