"""
Single-container subsolvers and per-problem bounds
"""

from bisect import bisect_right
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .models import BinAssignment, Item, Solution, canonical_order


class KnapsackResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    best_value: int
    selection: Tuple[int, ...] = ()


class CoverResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    cost: int
    selection: Tuple[int, ...] = ()


def _knapsack(weights: Sequence[int], values: Sequence[int], capacity: int) -> Tuple[int, List[int]]:
    """
    Exact 0-1 knapsack by depth-first branch-and-bound.

    Items are explored in non-increasing efficiency order; a branch is cut when
    its fractional (linear relaxation) bound cannot beat the best value found.
    Returns the optimum and the indices of one optimal selection.
    """
    order = [
        j for j in range(len(weights))
        if weights[j] <= capacity and values[j] > 0
    ]
    if capacity <= 0 or not order:
        return 0, []
    order.sort(key=lambda j: (-values[j] / weights[j], -weights[j], j))
    w = [weights[j] for j in order]
    v = [values[j] for j in order]
    n = len(order)

    if sum(w) <= capacity:
        return sum(v), sorted(order)

    prefix_w = [0] * (n + 1)
    prefix_v = [0] * (n + 1)
    for k in range(n):
        prefix_w[k + 1] = prefix_w[k] + w[k]
        prefix_v[k + 1] = prefix_v[k] + v[k]

    def fractional(i: int, cap: int) -> int:
        # largest k with prefix_w[k] - prefix_w[i] <= cap
        k = bisect_right(prefix_w, prefix_w[i] + cap) - 1
        bound = prefix_v[k] - prefix_v[i]
        if k < n:
            room = cap - (prefix_w[k] - prefix_w[i])
            bound += room * v[k] // w[k]
        return bound

    best_value = 0
    best_take: List[int] = []
    take: List[int] = []

    def search(i: int, cap: int, value: int) -> None:
        nonlocal best_value, best_take
        if value > best_value:
            best_value = value
            best_take = list(take)
        if i == n or value + fractional(i, cap) <= best_value:
            return
        if w[i] <= cap:
            take.append(i)
            search(i + 1, cap - w[i], value + v[i])
            take.pop()
        search(i + 1, cap, value)

    search(0, capacity, 0)
    return best_value, sorted(order[k] for k in best_take)


def knapsack_max(items: Sequence[Item], capacity: int) -> KnapsackResult:
    """
    Exact optimum of the 0-1 knapsack over ``items``.

    Args:
        items: candidate items (value = profit)
        capacity: knapsack capacity, >= 0

    Returns:
        Optimal value and the ids of an optimal selection
    """
    items = list(items)
    value, chosen = _knapsack([it.weight for it in items], [it.value for it in items], capacity)
    return KnapsackResult(best_value=value, selection=tuple(sorted(items[j].id for j in chosen)))


def smkp_upper_bound(items: Sequence[Item], capacities: Sequence[int]) -> int:
    """Surrogate relaxation: one knapsack with the aggregate capacity."""
    items = list(items)
    value, _ = _knapsack([it.weight for it in items], [it.value for it in items], sum(capacities))
    return value


def mtm_greedy_bound(items: Sequence[Item], capacities: Sequence[int]) -> Solution:
    """
    Fill the containers one at a time, each optimally from the items still unused.

    The result is a feasible MKP solution indexed by container, so its
    objective is a lower bound on the optimum.
    """
    remaining = list(items)
    assignments = []
    for capacity in capacities:
        value, chosen = _knapsack(
            [it.weight for it in remaining], [it.value for it in remaining], capacity
        )
        picked = set(chosen)
        assignments.append(BinAssignment.of(remaining[j] for j in chosen))
        remaining = [it for j, it in enumerate(remaining) if j not in picked]
    return Solution(
        assignments=tuple(assignments),
        objective=sum(a.value_sum for a in assignments),
    )


def min_cost_cover(
    items: Sequence[Item],
    quota: int,
    method: Literal["bb", "dp"] = "bb",
) -> Optional[CoverResult]:
    """
    Cheapest selection whose weight reaches ``quota`` (value = cost).

    ``bb`` solves the complementary knapsack: drop the most expensive items
    whose total weight fits in the surplus ``sum(w) - quota``. ``dp`` runs a
    dynamic program over the outstanding requirement and is meant for
    quotas up to about 10**6.

    Returns:
        CoverResult, or None when the items cannot reach the quota
    """
    items = list(items)
    total = sum(it.weight for it in items)
    if total < quota:
        return None
    if method == "dp":
        return _min_cost_cover_dp(items, quota)

    surplus = total - quota
    dropped_value, dropped = _knapsack(
        [it.weight for it in items], [it.value for it in items], surplus
    )
    dropped_set = set(dropped)
    selection = tuple(sorted(it.id for j, it in enumerate(items) if j not in dropped_set))
    return CoverResult(
        cost=sum(it.value for it in items) - dropped_value,
        selection=selection,
    )


def _min_cost_cover_dp(items: List[Item], quota: int) -> CoverResult:
    # cost[t] = cheapest way to bring at least t weight
    unreachable = np.iinfo(np.int64).max // 4
    cost = np.full(quota + 1, unreachable, dtype=np.int64)
    cost[0] = 0
    need = np.arange(quota + 1)
    taken = np.zeros((len(items), quota + 1), dtype=bool)

    for j, it in enumerate(items):
        via = cost[np.maximum(need - it.weight, 0)] + it.value
        taken[j] = via < cost
        cost = np.minimum(cost, via)

    selection = []
    t = quota
    for j in range(len(items) - 1, -1, -1):
        if t > 0 and taken[j, t]:
            selection.append(items[j].id)
            t = max(t - items[j].weight, 0)
    return CoverResult(cost=int(cost[quota]), selection=tuple(sorted(selection)))


def mccp_l2_bound(items: Sequence[Item], quotas: Sequence[int]) -> Optional[int]:
    """
    Sum of independent per-bin min-cost covers over all items.

    Relaxes the single-use constraint, so it never exceeds the MCCP optimum.
    None when some bin cannot be covered even on its own.
    """
    items = list(items)
    per_quota = {}
    bound = 0
    for quota in quotas:
        if quota not in per_quota:
            per_quota[quota] = min_cost_cover(items, quota)
        result = per_quota[quota]
        if result is None:
            return None
        bound += result.cost
    return bound


def covering_upper_bound(items: Sequence[Item], quota: int) -> int:
    return sum(it.weight for it in items) // quota


def covering_greedy_lower(items: Sequence[Item], quota: int) -> Solution:
    """
    Fill bins largest item first until each reaches the quota.

    The bin still open when the items run out goes to the overflow assignment.
    """
    covered = []
    current: List[Item] = []
    load = 0
    for it in canonical_order(items):
        current.append(it)
        load += it.weight
        if load >= quota:
            covered.append(BinAssignment.of(current))
            current, load = [], 0
    return Solution(
        assignments=tuple(covered),
        overflow=BinAssignment.of(current),
        objective=len(covered),
    )


def binpacking_lower_bound(items: Sequence[Item], capacity: int) -> int:
    """
    Martello-Toth L2 lower bound on the number of bins.

    For each threshold ``a`` in {0} and the distinct weights <= c/2, items are
    split into N1 (w > c - a), N2 (c/2 < w <= c - a) and N3 (a <= w <= c/2);
    the space left in N2 bins is credited against the weight of N3.
    """
    weights = [it.weight for it in items]
    return _l2(weights, capacity)


def _l2(weights: Sequence[int], capacity: int) -> int:
    if not weights:
        return 0
    c = capacity
    best = -(-sum(weights) // c)
    thresholds = {0} | {w for w in weights if 2 * w <= c}
    for a in thresholds:
        n1 = n2 = 0
        free2 = 0
        sum3 = 0
        for w in weights:
            if w > c - a:
                n1 += 1
            elif 2 * w > c:
                n2 += 1
                free2 += c - w
            elif w >= a:
                sum3 += w
        bound = n1 + n2 + max(0, -(-(sum3 - free2) // c))
        if bound > best:
            best = bound
    return best


def best_fit_decreasing(items: Sequence[Item], capacity: int) -> Solution:
    """Largest item first, each into the feasible bin with least residual capacity."""
    bins: List[List[Item]] = []
    residual: List[int] = []
    for it in canonical_order(items):
        target = -1
        for k, room in enumerate(residual):
            if it.weight <= room and (target < 0 or room < residual[target]):
                target = k
        if target < 0:
            bins.append([it])
            residual.append(capacity - it.weight)
        else:
            bins[target].append(it)
            residual[target] -= it.weight
    return Solution(
        assignments=tuple(BinAssignment.of(b) for b in bins),
        objective=len(bins),
    )
