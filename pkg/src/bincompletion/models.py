"""
Data models for bincompletion
Pydantic models for problem instances, bin assignments, solutions and solver runs
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import InstanceValidationError


Key = Tuple[int, int]
"""(weight, value) pair; dominance and nogood logic compare items by key only."""


class ProblemKind(str, Enum):
    """The four one-dimensional multicontainer problems."""

    BINPACKING = "binpacking"
    MKP = "mkp"
    BINCOVERING = "bincovering"
    MCCP = "mccp"

    @property
    def is_packing(self) -> bool:
        return self in (ProblemKind.BINPACKING, ProblemKind.MKP)

    @property
    def is_uniform(self) -> bool:
        """Uniform kinds carry one container value replicated on demand."""
        return self in (ProblemKind.BINPACKING, ProblemKind.BINCOVERING)

    @property
    def sense(self) -> Literal["min", "max"]:
        if self in (ProblemKind.BINPACKING, ProblemKind.MCCP):
            return "min"
        return "max"


class DominanceKind(str, Enum):
    """Selects one of the five bin-assignment dominance criteria."""

    CMT_PACKING = "cmt-packing"
    MT_PACKING = "mt-packing"
    COVERING = "covering"
    MKP_PACKING = "mkp-packing"
    MCCP_COVERING = "mccp-covering"


DEFAULT_DOMINANCE: Dict[ProblemKind, DominanceKind] = {
    ProblemKind.BINPACKING: DominanceKind.MT_PACKING,
    ProblemKind.MKP: DominanceKind.MKP_PACKING,
    ProblemKind.BINCOVERING: DominanceKind.COVERING,
    ProblemKind.MCCP: DominanceKind.MCCP_COVERING,
}


class PruningPolicy(str, Enum):
    NONE = "none"
    NP = "np"
    NDP = "ndp"


class ValueOrdering(str, Enum):
    """Order in which a node's generated children are explored."""

    MIN_CARD_MAX_PROFIT = "min-card-max-profit"
    MIN_WEIGHT = "min-weight"
    MIN_CARD_MIN_SUM = "min-card-min-sum"
    MIN_CARD_MAX_WEIGHT = "min-card-max-weight"
    GENERATION_ORDER = "generation-order"


DEFAULT_ORDERING: Dict[ProblemKind, ValueOrdering] = {
    ProblemKind.BINPACKING: ValueOrdering.MIN_CARD_MAX_WEIGHT,
    ProblemKind.MKP: ValueOrdering.MIN_CARD_MAX_PROFIT,
    ProblemKind.BINCOVERING: ValueOrdering.MIN_CARD_MIN_SUM,
    ProblemKind.MCCP: ValueOrdering.MIN_WEIGHT,
}


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    TIME_LIMIT = "time-limit"
    NODE_LIMIT = "node-limit"
    INFEASIBLE = "infeasible"


# Problem data
class Item(BaseModel):
    """One discrete object: weight plus profit (MKP) or cost (MCCP)."""

    model_config = ConfigDict(frozen=True)

    id: int = Field(..., ge=0)
    weight: int = Field(..., ge=1)
    value: int = Field(default=0, ge=0)

    @property
    def key(self) -> Key:
        return (self.weight, self.value)


def canonical_order(items) -> List[Item]:
    """Non-increasing weight, id as tiebreaker."""
    return sorted(items, key=lambda it: (-it.weight, it.id))


class Instance(BaseModel):
    """A problem kind, its container capacities or quotas, and the items."""

    model_config = ConfigDict(frozen=True)

    kind: ProblemKind
    containers: Tuple[int, ...]
    items: Tuple[Item, ...]

    @field_validator("items")
    @classmethod
    def order_items_by_id(cls, v):
        return tuple(sorted(v, key=lambda it: it.id))

    @model_validator(mode="after")
    def check_invariants(self):
        errors: Dict[str, List[str]] = {}

        if not self.containers:
            errors.setdefault("containers", []).append("at least one container value is required")
        if any(c < 1 for c in self.containers):
            errors.setdefault("containers", []).append("container values must be >= 1")
        if self.kind.is_uniform and len(self.containers) != 1:
            errors.setdefault("containers", []).append(
                f"{self.kind.value} carries exactly one container value, got {len(self.containers)}"
            )

        ids = [it.id for it in self.items]
        if ids != list(range(len(ids))):
            errors.setdefault("items", []).append("item ids must be unique and contiguous from 0")
        if self.kind.is_uniform and any(it.value != 0 for it in self.items):
            errors.setdefault("items", []).append(f"{self.kind.value} items carry no value")

        if errors:
            raise InstanceValidationError(
                "Invalid instance",
                field_errors=errors,
                validation_context=self.kind.value,
            )
        return self

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def m(self) -> int:
        return len(self.containers)

    @property
    def is_packing(self) -> bool:
        return self.kind.is_packing

    @property
    def total_weight(self) -> int:
        return sum(it.weight for it in self.items)

    def capacity_of(self, bin_index: int) -> int:
        """Capacity (packing) or quota (covering) of a bin."""
        if self.kind.is_uniform:
            return self.containers[0]
        return self.containers[bin_index]

    def sorted_items(self) -> List[Item]:
        return canonical_order(self.items)

    def item(self, item_id: int) -> Item:
        return self.items[item_id]


class BinAssignment(BaseModel):
    """The complete set of items placed in one bin, with cached sums."""

    model_config = ConfigDict(frozen=True)

    items: Tuple[Item, ...] = ()
    weight_sum: int = 0
    value_sum: int = 0

    @model_validator(mode="before")
    @classmethod
    def fill_sums(cls, data: Any) -> Any:
        if isinstance(data, dict):
            items = canonical_order(
                it if isinstance(it, Item) else Item.model_validate(it)
                for it in data.get("items", ())
            )
            data = dict(data)
            data["items"] = tuple(items)
            data.setdefault("weight_sum", sum(it.weight for it in items))
            data.setdefault("value_sum", sum(it.value for it in items))
        return data

    @model_validator(mode="after")
    def check_sums(self):
        ids = [it.id for it in self.items]
        if len(set(ids)) != len(ids):
            raise InstanceValidationError(
                "Bin assignment repeats an item",
                field_errors={"items": [f"duplicate ids in {ids}"]},
                validation_context="bin_assignment",
            )
        if self.weight_sum != sum(it.weight for it in self.items):
            raise InstanceValidationError(
                "weight_sum does not match member weights",
                field_errors={"weight_sum": [str(self.weight_sum)]},
                validation_context="bin_assignment",
            )
        if self.value_sum != sum(it.value for it in self.items):
            raise InstanceValidationError(
                "value_sum does not match member values",
                field_errors={"value_sum": [str(self.value_sum)]},
                validation_context="bin_assignment",
            )
        return self

    @classmethod
    def of(cls, items) -> "BinAssignment":
        return cls(items=tuple(items))

    @property
    def item_ids(self) -> Tuple[int, ...]:
        return tuple(it.id for it in self.items)

    @property
    def keys(self) -> Tuple[Key, ...]:
        return tuple(it.key for it in self.items)

    def __len__(self) -> int:
        return len(self.items)


class Solution(BaseModel):
    """
    Bin assignments plus objective.

    MKP and MCCP solutions are indexed by bin (one assignment per container).
    Bin packing lists the used bins; bin covering lists the covered bins and
    keeps every other item in ``overflow``.
    """

    model_config = ConfigDict(frozen=True)

    assignments: Tuple[BinAssignment, ...] = ()
    overflow: BinAssignment = Field(default_factory=BinAssignment)
    objective: int = 0


class SolutionLayout(BaseModel):
    """Item ids per bin exactly as a solution file lists them, repeats included."""

    model_config = ConfigDict(frozen=True)

    bins: Tuple[Tuple[int, ...], ...] = ()
    overflow: Tuple[int, ...] = ()
    objective: Optional[int] = None


class Violation(BaseModel):
    code: str
    message: str
    details: Dict[str, Any] = Field(default_factory=dict)


class ValidationVerdict(BaseModel):
    """Every violated constraint of a solution; empty means valid."""

    violations: List[Violation] = Field(default_factory=list)
    recomputed_objective: int = 0

    @property
    def valid(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]


# Solver runs
class SolverConfig(BaseModel):
    """Per-run search configuration."""

    model_config = ConfigDict(frozen=True)

    pruning: PruningPolicy = PruningPolicy.NDP
    value_ordering: Optional[ValueOrdering] = Field(
        default=None,
        description="Child ordering; None selects the kind's default",
    )
    h: Union[int, Literal["unbounded"], None] = Field(
        default=None,
        description="Children generated per batch; None selects the kind's default",
    )
    covering_h: int = Field(default=100, ge=1)
    time_limit: float = Field(default=300.0, gt=0)
    node_limit: Optional[int] = Field(default=None, ge=1)
    rng_seed: int = 0
    ndp_depth_limit: Optional[int] = Field(default=None, ge=0)
    dominance: Optional[DominanceKind] = Field(
        default=None,
        description="Dominance criterion for nogood dominance pruning; None selects the kind's default",
    )

    @field_validator("h")
    @classmethod
    def validate_h(cls, v):
        if isinstance(v, int) and v < 1:
            raise ValueError("h must be >= 1 when bounded")
        return v

    @classmethod
    def from_settings(cls, settings, **overrides) -> "SolverConfig":
        """Build a run config from SolverSettings, letting keyword overrides win."""
        values = settings.get_solver_defaults()
        values["covering_h"] = settings.covering_h
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def ordering_for(self, kind: ProblemKind) -> ValueOrdering:
        return self.value_ordering or DEFAULT_ORDERING[kind]

    def batch_width(self, kind: ProblemKind) -> Optional[int]:
        """Effective h for a kind; None means unbounded."""
        if self.h == "unbounded":
            return None
        if self.h is None:
            return self.covering_h if kind is ProblemKind.BINCOVERING else None
        return self.h

    def dominance_for(self, kind: ProblemKind) -> DominanceKind:
        return self.dominance or DEFAULT_DOMINANCE[kind]


class SolveReport(BaseModel):
    """Outcome of one solver run."""

    solution: Optional[Solution] = None
    objective: Optional[int] = None
    nodes: int = 0
    elapsed: float = 0.0
    status: SolveStatus = SolveStatus.OPTIMAL
    incumbent_trace: List[int] = Field(default_factory=list)
    solver: str = ""
    config: Optional[SolverConfig] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def to_record(self) -> Dict[str, Any]:
        """Flat single-line record for machine-readable output."""
        return {
            "objective": self.objective,
            "status": self.status.value,
            "nodes": self.nodes,
            "elapsed": round(self.elapsed, 6),
            "solver": self.solver,
            "pruning": self.config.pruning.value if self.config else None,
        }
