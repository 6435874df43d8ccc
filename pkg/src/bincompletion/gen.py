"""
Incremental generation of undominated bin assignments

A cursor walks the binary include/exclude tree over a weight-ordered pool,
largest item first, include branch before exclude branch. Packing cursors emit
maximal assignments that survive the exclusion test; covering cursors emit
minimal assignments that survive a single-swap screen. Emission is lazy, so a
search node can consume its children ``h`` at a time.
"""

from bisect import bisect_left, bisect_right
from enum import Enum
from itertools import islice
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .models import BinAssignment, Item, Key, canonical_order

Positions = Tuple[int, ...]


class Side(str, Enum):
    PACKING = "packing"
    COVERING = "covering"


class SubsetSum(NamedTuple):
    """An included subset: its weight sum, value sum and, for a single item, that item's key."""

    weight: int
    value: int = 0
    key: Optional[Key] = None


def _excluded_key(x: Union[int, Key, Item]) -> Key:
    if isinstance(x, Item):
        return x.key
    if isinstance(x, tuple):
        return x
    return (x, 0)


def exclusion_test_packing(
    t: int,
    included_subset_sums: Iterable[Union[int, SubsetSum]],
    excluded: Sequence[Union[int, Key, Item]],
    c: int,
) -> bool:
    """
    True when the assignment is dominated by a single-item swap.

    Dominated iff some included subset sum ``s`` and excluded weight ``x``
    satisfy ``s <= x`` and ``t - s + x <= c``. With values, the excluded item
    must also be worth at least the subset, and an excluded item with the same
    key as a single-item subset is no swap at all.
    """
    keys = sorted(_excluded_key(x) for x in excluded)
    if not keys:
        return False
    weights = [w for w, _ in keys]
    for entry in included_subset_sums:
        sub = entry if isinstance(entry, SubsetSum) else SubsetSum(entry)
        lo = bisect_left(weights, sub.weight)
        hi = bisect_right(weights, c - t + sub.weight)
        for key in keys[lo:hi]:
            if key[1] < sub.value or key == sub.key:
                continue
            return True
    return False


def undominated_covering_filter(
    candidate: BinAssignment,
    pool: Iterable[Item],
    quota: int,
    required: Optional[int] = None,
) -> bool:
    """
    Single-swap screen for covering candidates (True = keep).

    Rejects the candidate when one member ``a`` (other than the required
    item) can be traded for a lighter excluded item ``x`` that is no more
    expensive while the bin stays covered.
    """
    member_ids = set(candidate.item_ids)
    excluded = [it for it in pool if it.id not in member_ids]
    for a in candidate.items:
        if a.id == required:
            continue
        for x in excluded:
            if (
                x.weight < a.weight
                and candidate.weight_sum - a.weight + x.weight >= quota
                and x.value <= a.value
            ):
                return False
    return True


class GenCursor:
    """
    Resumable generator of bin assignments for one bin.

    Emissions are tuples of positions into ``pool`` (canonical order).
    ``next_batch`` returns them as BinAssignments.
    """

    def __init__(
        self,
        side: Side,
        bound: int,
        pool: Sequence[Item],
        required: Optional[int] = None,
    ):
        self.side = Side(side)
        self.bound = bound
        self.pool: Tuple[Item, ...] = tuple(canonical_order(pool))
        self.emitted = 0
        self.max_depth = 0
        self.exhausted = False

        self._weights = [it.weight for it in self.pool]
        self._values = [it.value for it in self.pool]
        keys = [it.key for it in self.pool]

        # last earlier position with an identical (weight, value) key
        self._prev_same: List[int] = []
        last_seen = {}
        for pos, key in enumerate(keys):
            self._prev_same.append(last_seen.get(key, -1))
            last_seen[key] = pos
        self._keys = keys

        self._required: Optional[int] = None
        if required is not None:
            positions = [p for p, it in enumerate(self.pool) if it.id == required]
            if not positions:
                raise ValueError(f"required item {required} is not in the pool")
            pos = positions[0]
            # an equal-key twin earlier in the pool stands in for the required item
            while self._prev_same[pos] >= 0:
                pos = self._prev_same[pos]
            self._required = pos

        self.is_empty = self._detect_empty()
        if self.is_empty:
            self._iterator: Iterator[Positions] = iter(())
        elif self.side is Side.PACKING:
            self._iterator = self._packing()
        else:
            self._iterator = self._covering()

    @classmethod
    def from_assignments(cls, assignments: Sequence[Sequence[Item]]) -> "GenCursor":
        """Cursor over a precomputed list of assignments, emitted in list order."""
        by_id = {}
        for assignment in assignments:
            for it in assignment:
                by_id[it.id] = it
        cursor = cls(Side.PACKING, 0, list(by_id.values()))
        index = {it.id: pos for pos, it in enumerate(cursor.pool)}
        emissions = [
            tuple(sorted(index[it.id] for it in assignment))
            for assignment in assignments
        ]
        cursor.is_empty = not emissions
        cursor._iterator = iter(emissions)
        return cursor

    @property
    def required(self) -> Optional[Item]:
        return None if self._required is None else self.pool[self._required]

    def _detect_empty(self) -> bool:
        r = self._required
        if self.side is Side.PACKING:
            return r is not None and self._weights[r] > self.bound
        return sum(self._weights) < self.bound

    def next_positions(self, h: Optional[int]) -> List[Positions]:
        """Up to ``h`` further emissions (all remaining when h is None)."""
        if self.exhausted:
            return []
        if h is None:
            batch = list(self._iterator)
        else:
            batch = list(islice(self._iterator, h))
        if h is None or len(batch) < h:
            self.exhausted = True
        self.emitted += len(batch)
        return batch

    def next_batch(self, h: Optional[int]) -> List[BinAssignment]:
        return [self.assignment(p) for p in self.next_positions(h)]

    def assignment(self, positions: Positions) -> BinAssignment:
        return BinAssignment.of(self.pool[p] for p in positions)

    def __iter__(self) -> Iterator[BinAssignment]:
        return iter(self.next_batch(None))

    # traversal
    def _order(self) -> Tuple[List[int], List[int]]:
        order = [p for p in range(len(self.pool)) if p != self._required]
        suffix = [0] * (len(order) + 1)
        for k in range(len(order) - 1, -1, -1):
            suffix[k] = suffix[k + 1] + self._weights[order[k]]
        return order, suffix

    def _packing(self) -> Iterator[Positions]:
        w = self._weights
        prev_same = self._prev_same
        order, suffix = self._order()
        capacity = self.bound
        included = [False] * len(self.pool)
        chosen: List[int] = []

        residual = capacity
        if self._required is not None:
            included[self._required] = True
            residual -= w[self._required]

        def walk(k: int, residual: int, min_excluded: float) -> Iterator[Positions]:
            if k > self.max_depth:
                self.max_depth = k
            # every completion would leave room for an excluded item
            if min_excluded <= residual - suffix[k]:
                return
            if k == len(order):
                if not self._packing_dominated(included, chosen, residual):
                    yield tuple(p for p in range(len(self.pool)) if included[p])
                return
            p = order[k]
            if w[p] <= residual and (prev_same[p] < 0 or included[prev_same[p]]):
                included[p] = True
                chosen.append(p)
                yield from walk(k + 1, residual - w[p], min_excluded)
                chosen.pop()
                included[p] = False
            yield from walk(k + 1, residual, min(min_excluded, w[p]))

        yield from walk(0, residual, float("inf"))

    def _packing_dominated(self, included: List[bool], chosen: List[int], residual: int) -> bool:
        """Exclusion test over subsets of the non-required included items."""
        excluded = [self._keys[p] for p in range(len(self.pool)) if not included[p]]
        if not excluded or not chosen:
            return False
        limit = max(w for w, _ in excluded)
        sums = self._subset_sums(chosen, limit)
        return exclusion_test_packing(self.bound - residual, sums, excluded, self.bound)

    def _subset_sums(self, chosen: List[int], limit: int) -> Iterator[SubsetSum]:
        """Lazily enumerate subsets of ``chosen`` whose weight stays within ``limit``."""
        w, v, keys = self._weights, self._values, self._keys
        members = sorted(chosen, key=lambda p: w[p])

        def walk(start: int, s: int, value: int, size: int) -> Iterator[SubsetSum]:
            for j in range(start, len(members)):
                p = members[j]
                s2 = s + w[p]
                if s2 > limit:
                    # members are weight-ordered, later ones only grow the sum
                    break
                yield SubsetSum(s2, value + v[p], keys[p] if size == 0 else None)
                yield from walk(j + 1, s2, value + v[p], size + 1)

        return walk(0, 0, 0, 0)

    def _covering(self) -> Iterator[Positions]:
        w = self._weights
        prev_same = self._prev_same
        order, suffix = self._order()
        quota = self.bound
        included = [False] * len(self.pool)
        required_weight = None

        total = 0
        if self._required is not None:
            included[self._required] = True
            total = w[self._required]
            required_weight = total
            if total >= quota:
                yield (self._required,)
                return

        def walk(k: int, total: int) -> Iterator[Positions]:
            if k > self.max_depth:
                self.max_depth = k
            if total + suffix[k] < quota:
                return
            p = order[k]
            if prev_same[p] < 0 or included[prev_same[p]]:
                crossed = total + w[p]
                included[p] = True
                if crossed >= quota:
                    smallest = w[p] if required_weight is None else min(w[p], required_weight)
                    if crossed - smallest < quota and self._covering_kept(included):
                        yield tuple(q for q in range(len(self.pool)) if included[q])
                else:
                    yield from walk(k + 1, crossed)
                included[p] = False
            yield from walk(k + 1, total)

        yield from walk(0, total)

    def _covering_kept(self, included: List[bool]) -> bool:
        candidate = self.assignment(tuple(p for p in range(len(self.pool)) if included[p]))
        required = self.required
        return undominated_covering_filter(
            candidate, self.pool, self.bound, required=None if required is None else required.id,
        )


def open_cursor(
    side: Side,
    bound: int,
    pool: Sequence[Item],
    required: Optional[int] = None,
) -> GenCursor:
    """
    Open a cursor positioned before the first assignment.

    Args:
        side: packing (maximal assignments) or covering (minimal assignments)
        bound: bin capacity or quota
        pool: candidate items
        required: id of an item every emitted assignment must contain

    Returns:
        Cursor; ``is_empty`` is set when nothing can be emitted
    """
    return GenCursor(side, bound, pool, required)


def next_batch(cursor: GenCursor, h: Optional[int]) -> List[BinAssignment]:
    return cursor.next_batch(h)
