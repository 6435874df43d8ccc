"""
Shared search machinery for the solvers

``SearchBase`` owns what every solver needs: node counting, limit polling,
the incumbent and the final report. ``BinCompletionSearch`` adds the
bin-oriented depth-first driver: one bin per level, children generated by a
cursor ``h`` at a time, ordered, filtered by nogoods and explored in turn.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from time import perf_counter
from typing import Callable, ClassVar, List, Optional, Sequence, Tuple

import structlog

from ..exceptions import KindMismatchError, SearchLimitReached
from ..gen import GenCursor, Positions, Side
from ..models import (
    Instance,
    Item,
    Key,
    ProblemKind,
    PruningPolicy,
    Solution,
    SolverConfig,
    SolveReport,
    SolveStatus,
    ValueOrdering,
)
from ..nogood import NogoodRecord, NogoodStack, apply_pruning, compact_stack

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class SearchNode:
    """
    Immutable search state.

    Item references are positions into the solver's canonical item list;
    ``remaining`` is kept in canonical (non-increasing weight) order.
    """

    remaining: Tuple[int, ...]
    open_bins: Tuple[int, ...] = ()
    committed: Tuple[Tuple[int, Tuple[int, ...]], ...] = ()
    overflow: Tuple[int, ...] = ()
    score: int = 0


@dataclass
class Branching:
    """The bin a node fills next and the cursor producing its candidates."""

    bin_index: int
    bound: int
    cursor: GenCursor
    pool: Tuple[int, ...]
    seed: Tuple[int, ...] = ()


class SearchBase(ABC):
    """Node accounting, limits and incumbent handling shared by every search."""

    solver_name: ClassVar[str] = "search"
    kind: ClassVar[Optional[ProblemKind]] = None

    def __init__(self, instance: Instance, config: Optional[SolverConfig] = None):
        if self.kind is not None and instance.kind is not self.kind:
            raise KindMismatchError(self.kind.value, instance.kind.value)
        self.instance = instance
        self.config = config or SolverConfig()
        self.sense = instance.kind.sense
        self.items: List[Item] = instance.sorted_items()
        self.keys: List[Key] = [it.key for it in self.items]

        self.nodes = 0
        self.incumbent: Optional[int] = None
        self.incumbent_solution: Optional[Solution] = None
        self.incumbent_trace: List[int] = []
        self._started = 0.0

    # limits and incumbent
    def _tick(self) -> None:
        """Count one node and poll the limits at the node boundary."""
        elapsed = perf_counter() - self._started
        if elapsed > self.config.time_limit:
            raise SearchLimitReached("time", nodes=self.nodes, elapsed=elapsed)
        if self.config.node_limit is not None and self.nodes >= self.config.node_limit:
            raise SearchLimitReached("node", nodes=self.nodes, elapsed=elapsed)
        self.nodes += 1

    def improves(self, objective: int) -> bool:
        if self.incumbent is None:
            return True
        if self.sense == "min":
            return objective < self.incumbent
        return objective > self.incumbent

    def may_improve(self, bound: Optional[int]) -> bool:
        """Strict-improvement test of an optimistic bound; None means no solution below."""
        if bound is None:
            return False
        return self.improves(bound)

    def offer(self, objective: int, build: Callable[[], Solution]) -> bool:
        """Install a new incumbent when it strictly improves."""
        if not self.improves(objective):
            return False
        self.incumbent = objective
        self.incumbent_solution = build()
        self.incumbent_trace.append(objective)
        logger.debug("Incumbent improved", solver=self.solver_name, objective=objective, nodes=self.nodes)
        return True

    def solution_items(self, positions: Sequence[int]) -> List[Item]:
        return [self.items[p] for p in positions]

    # template
    def precheck(self) -> Optional[SolveStatus]:
        """Status to report without searching (e.g. an item larger than every bin)."""
        return None

    def initial_incumbent(self) -> None:
        """Seed the incumbent with a heuristic solution."""

    @abstractmethod
    def search(self) -> None:
        """Run the search from the root, updating the incumbent."""

    def run(self) -> SolveReport:
        self._started = perf_counter()
        logger.info(
            "Solve started",
            solver=self.solver_name,
            kind=self.instance.kind.value,
            n=self.instance.n,
            m=self.instance.m,
            pruning=self.config.pruning.value,
        )

        status = self.precheck()
        if status is None:
            status = SolveStatus.OPTIMAL
            try:
                self.initial_incumbent()
                self.search()
            except SearchLimitReached as e:
                status = SolveStatus.TIME_LIMIT if e.limit_kind == "time" else SolveStatus.NODE_LIMIT
            if status is SolveStatus.OPTIMAL and self.incumbent_solution is None:
                status = SolveStatus.INFEASIBLE

        elapsed = perf_counter() - self._started
        report = SolveReport(
            solution=self.incumbent_solution,
            objective=self.incumbent,
            nodes=self.nodes,
            elapsed=elapsed,
            status=status,
            incumbent_trace=list(self.incumbent_trace),
            solver=self.solver_name,
            config=self.config,
        )
        logger.info(
            "Solve finished",
            solver=self.solver_name,
            status=status.value,
            objective=self.incumbent,
            nodes=self.nodes,
            elapsed=round(elapsed, 6),
        )
        return report


def ordering_key(ordering: ValueOrdering) -> Optional[Callable[[Sequence[Item]], tuple]]:
    """Sort key over a child's items; None keeps generation order."""
    ids = lambda its: tuple(it.id for it in its)  # noqa: E731
    if ordering is ValueOrdering.MIN_CARD_MAX_WEIGHT:
        return lambda its: (len(its), -sum(it.weight for it in its), ids(its))
    if ordering is ValueOrdering.MIN_CARD_MAX_PROFIT:
        return lambda its: (len(its), -sum(it.value for it in its), ids(its))
    if ordering is ValueOrdering.MIN_CARD_MIN_SUM:
        return lambda its: (len(its), sum(it.weight for it in its), ids(its))
    if ordering is ValueOrdering.MIN_WEIGHT:
        return lambda its: (sum(it.weight for it in its), ids(its))
    return None


class BinCompletionSearch(SearchBase):
    """
    Bin-oriented depth-first branch-and-bound.

    Subclasses describe the problem: the root node, when a node is a leaf,
    its optimistic bound, which bin to fill next and how a child node looks.
    The driver handles batching, ordering, nogood records and pruning.
    """

    side: ClassVar[Side] = Side.PACKING

    def __init__(self, instance: Instance, config: Optional[SolverConfig] = None):
        super().__init__(instance, config)
        kind = instance.kind
        self.pruning = self.config.pruning
        self.h = self.config.batch_width(kind)
        self.dominance_kind = self.config.dominance_for(kind)
        self._sort_key = ordering_key(self.config.ordering_for(kind))
        self.on_generate: Optional[Callable[[SearchNode, List[Tuple[Item, ...]]], None]] = None
        self.max_depth = 0
        self.max_stack_depth = 0

    # problem hooks
    @abstractmethod
    def root(self) -> SearchNode:
        ...

    @abstractmethod
    def is_leaf(self, node: SearchNode) -> bool:
        ...

    @abstractmethod
    def bound(self, node: SearchNode) -> Optional[int]:
        """Optimistic objective of any completion of ``node`` (None = no completion)."""

    @abstractmethod
    def leaf_objective(self, node: SearchNode) -> Optional[int]:
        """Objective of a leaf, or None when the leaf is not a solution."""

    @abstractmethod
    def branch(self, node: SearchNode) -> Branching:
        ...

    @abstractmethod
    def child(self, node: SearchNode, branching: Branching, assignment: Tuple[int, ...]) -> SearchNode:
        ...

    @abstractmethod
    def build_solution(self, node: SearchNode) -> Solution:
        ...

    # driver
    def search(self) -> None:
        self._expand(self.root(), NogoodStack(), 0)

    def _policy_at(self, depth: int) -> PruningPolicy:
        limit = self.config.ndp_depth_limit
        if self.pruning is PruningPolicy.NDP and limit is not None and depth > limit:
            return PruningPolicy.NP
        return self.pruning

    def _expand(self, node: SearchNode, stack: NogoodStack, depth: int) -> None:
        self._tick()
        if depth > self.max_depth:
            self.max_depth = depth
        if stack.depth > self.max_stack_depth:
            self.max_stack_depth = stack.depth

        if self.is_leaf(node):
            objective = self.leaf_objective(node)
            if objective is not None:
                self.offer(objective, lambda: self.build_solution(node))
            return
        node_bound = self.bound(node)
        if not self.may_improve(node_bound):
            return

        policy = self._policy_at(depth)
        branching = self.branch(node)
        if policy is PruningPolicy.NP:
            stack = compact_stack(stack, [self.keys[p] for p in node.remaining], policy)

        cursor = branching.cursor
        seed_keys = tuple(self.keys[p] for p in branching.seed)
        explored: List[Tuple[Key, ...]] = []

        while True:
            batch = cursor.next_positions(self.h)
            if not batch:
                break
            children = [tuple(branching.pool[p] for p in positions) for positions in batch]
            if self._sort_key is not None:
                children.sort(key=lambda c: self._sort_key(self.solution_items(c)))
            if self.on_generate is not None:
                self.on_generate(node, [tuple(self.solution_items(c)) for c in children])

            for assignment in children:
                remainder = self._remainder(assignment, branching.seed)
                if policy is not PruningPolicy.NONE and apply_pruning(
                    [self.keys[p] for p in assignment],
                    stack,
                    policy,
                    branching.bound,
                    self.dominance_kind,
                    seed_keys,
                ):
                    explored.append(remainder)
                    continue

                frame = []
                if self.pruning is not PruningPolicy.NONE:
                    frame = [
                        NogoodRecord(
                            prior=prior,
                            taken=remainder,
                            host_bound=branching.bound,
                            host_seed=seed_keys,
                            side=self.side,
                        )
                        for prior in explored
                    ]
                stack.push(frame)
                try:
                    self._expand(self.child(node, branching, assignment), stack, depth + 1)
                finally:
                    stack.pop()
                explored.append(remainder)

                # the incumbent may have caught up with this node's bound
                if not self.may_improve(node_bound):
                    return

    def _remainder(self, assignment: Sequence[int], seed: Sequence[int]) -> Tuple[Key, ...]:
        seeds = set(seed)
        return tuple(sorted((self.keys[p] for p in assignment if p not in seeds), reverse=True))
