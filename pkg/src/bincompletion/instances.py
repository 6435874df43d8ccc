"""
Instance generation, filters and file formats

Instance file (UTF-8, '#' starts a comment; ``# key value`` lines carry metadata)::

    kind <binpacking|mkp|bincovering|mccp>
    containers <v1> <v2> ...
    items <n>
    <weight> [<value>]        (n lines, item ids in line order)

Solution file::

    bins <k>
    <item ids ...>            (k lines, '-' for an empty bin)
    overflow <item ids ...>
    objective <v>             (optional)
"""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .bounds import covering_greedy_lower, covering_upper_bound
from .core import objective_of
from .exceptions import (
    GenerationBudgetError,
    InstanceParseError,
    InstanceValidationError,
)
from .models import BinAssignment, Instance, Item, ProblemKind, Solution, SolutionLayout

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

TRIPLET_CAPACITY = 1000


class InstanceClass(str, Enum):
    UNCORRELATED = "uncorrelated"
    WEAKLY_CORRELATED = "weakly"
    STRONGLY_CORRELATED = "strongly"
    SUBSET_SUM = "subsetsum"
    UNIFORM = "uniform"
    TRIPLET = "triplet"


class GenSpec(BaseModel):
    """Parameters of a random instance."""

    model_config = ConfigDict(frozen=True)

    kind: ProblemKind
    n: int = Field(..., ge=1)
    m: int = Field(default=1, ge=1)
    weight_range: Tuple[int, int] = (1, 100)
    instance_class: InstanceClass = InstanceClass.UNCORRELATED
    capacity: Optional[int] = Field(default=None, ge=1, description="Bin packing capacity")
    quota: Optional[int] = Field(default=None, ge=1, description="Bin covering quota")
    seed: int = 0

    @model_validator(mode="after")
    def check_spec(self):
        lo, hi = self.weight_range
        errors: Dict[str, List[str]] = {}
        if not 1 <= lo <= hi:
            errors["weight_range"] = [f"need 1 <= min <= max, got [{lo}, {hi}]"]
        if self.kind is ProblemKind.BINPACKING:
            if self.instance_class is InstanceClass.TRIPLET:
                if self.n % 3:
                    errors["n"] = ["triplet instances need n divisible by 3"]
                if self.capacity not in (None, TRIPLET_CAPACITY):
                    errors["capacity"] = [f"triplet instances use capacity {TRIPLET_CAPACITY}"]
            elif self.capacity is None:
                errors["capacity"] = ["bin packing needs a capacity"]
        elif self.instance_class is InstanceClass.TRIPLET:
            errors["instance_class"] = ["triplet instances are bin packing only"]
        if self.kind is ProblemKind.BINCOVERING and self.quota is None:
            errors["quota"] = ["bin covering needs a quota"]
        if errors:
            raise InstanceValidationError(
                "Invalid generator spec",
                field_errors=errors,
                validation_context="gen_spec",
            )
        return self

    @property
    def spread(self) -> int:
        lo, hi = self.weight_range
        return (hi - lo) // 10

    def metadata(self) -> Dict[str, str]:
        lo, hi = self.weight_range
        return {
            "class": self.instance_class.value,
            "n": str(self.n),
            "m": str(self.m),
            "range": f"{lo}-{hi}",
            "seed": str(self.seed),
        }


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream for a seed; identical draws on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def gen_items(spec: GenSpec, rng: Optional[np.random.Generator] = None) -> List[Item]:
    """
    Draw the items of a spec.

    MKP and MCCP values follow the correlation class; bin packing and bin
    covering items carry weight only.
    """
    rng = rng or make_rng(spec.seed)
    lo, hi = spec.weight_range

    if spec.instance_class is InstanceClass.TRIPLET:
        return _triplets(spec.n, rng)

    weights = rng.integers(lo, hi, size=spec.n, endpoint=True)
    if spec.kind.is_uniform:
        return [Item(id=j, weight=int(w)) for j, w in enumerate(weights)]

    d = spec.spread
    cls = spec.instance_class
    if cls is InstanceClass.SUBSET_SUM:
        values = weights.copy()
    elif cls is InstanceClass.STRONGLY_CORRELATED:
        values = weights + d
    elif cls is InstanceClass.WEAKLY_CORRELATED:
        values = np.maximum(weights + rng.integers(-d, d, size=spec.n, endpoint=True), 1)
    else:
        values = rng.integers(lo, hi, size=spec.n, endpoint=True)
    return [Item(id=j, weight=int(w), value=int(v)) for j, (w, v) in enumerate(zip(weights, values))]


def _triplets(n: int, rng: np.random.Generator) -> List[Item]:
    # three items per bin filling it exactly, so the optimum is n / 3
    c = TRIPLET_CAPACITY
    weights = []
    for _ in range(n // 3):
        first = int(rng.integers(380, 490, endpoint=True))
        second = int(rng.integers(250, c - first - 250, endpoint=True))
        weights.extend([first, second, c - first - second])
    return [Item(id=j, weight=w) for j, w in enumerate(weights)]


def gen_mkp_capacities(
    spec: GenSpec,
    items: List[Item],
    rng: Optional[np.random.Generator] = None,
) -> Optional[List[int]]:
    """
    Capacities summing to half the total weight.

    The first m-1 are uniform in [floor(0.4*W/m), floor(0.6*W/m)], the last
    takes floor(0.5*W) minus the rest.

    Returns:
        Capacity list, or None when the last capacity would fall below 1
    """
    rng = rng or make_rng(spec.seed)
    total = sum(it.weight for it in items)
    m = spec.m
    lo = max(1, (4 * total) // (10 * m))
    hi = max(lo, (6 * total) // (10 * m))
    head = [int(c) for c in rng.integers(lo, hi, size=m - 1, endpoint=True)]
    last = total // 2 - sum(head)
    if last < 1:
        return None
    return head + [last]


def is_degenerate_mkp(instance: Instance) -> bool:
    """An item fits no container, the smallest container holds no item, or all items fit the largest."""
    return _degenerate([it.weight for it in instance.items], instance.containers)


def _degenerate(weights: List[int], caps: Sequence[int]) -> bool:
    if not weights:
        return True
    return (
        max(weights) > max(caps)
        or min(caps) < min(weights)
        or sum(weights) < max(caps)
    )


def is_trivial_covering(instance: Instance) -> bool:
    """Greedy lower bound meets the counting upper bound, so no search is needed."""
    quota = instance.containers[0]
    greedy = covering_greedy_lower(instance.items, quota)
    return greedy.objective == covering_upper_bound(instance.items, quota)


def generate_instance(
    spec: GenSpec,
    budget: int = 100_000,
    nontrivial: bool = False,
) -> Instance:
    """
    Generate an instance, resampling until it passes the kind's filters.

    MKP instances must be non-degenerate; with ``nontrivial`` bin covering
    instances must need search.

    Raises:
        GenerationBudgetError: no acceptable instance within ``budget`` draws
    """
    rng = make_rng(spec.seed)
    for attempt in range(1, budget + 1):
        items = gen_items(spec, rng)
        kind = spec.kind

        if kind is ProblemKind.BINPACKING:
            capacity = spec.capacity or TRIPLET_CAPACITY
            return Instance(kind=kind, containers=(capacity,), items=tuple(items))

        if kind is ProblemKind.BINCOVERING:
            instance = Instance(kind=kind, containers=(spec.quota,), items=tuple(items))
            if nontrivial and is_trivial_covering(instance):
                continue
            return instance

        capacities = gen_mkp_capacities(spec, items, rng)
        if capacities is None:
            continue
        if kind is ProblemKind.MKP and _degenerate([it.weight for it in items], capacities):
            continue
        instance = Instance(kind=kind, containers=tuple(capacities), items=tuple(items))
        logger.debug("Instance generated", kind=kind.value, attempts=attempt, seed=spec.seed)
        return instance

    raise GenerationBudgetError(
        f"No acceptable instance after {budget} attempts",
        attempts=budget,
        spec=spec.model_dump(mode="json"),
    )


# Instance files
def format_instance(instance: Instance, metadata: Optional[Dict[str, str]] = None) -> str:
    lines = [f"# {key} {value}" for key, value in (metadata or {}).items()]
    lines.append(f"kind {instance.kind.value}")
    lines.append("containers " + " ".join(str(c) for c in instance.containers))
    lines.append(f"items {instance.n}")
    for it in instance.items:
        lines.append(f"{it.weight}" if instance.kind.is_uniform else f"{it.weight} {it.value}")
    return "\n".join(lines) + "\n"


def write_instance(
    instance: Instance,
    path: PathLike,
    metadata: Optional[Dict[str, str]] = None,
) -> Path:
    path = Path(path)
    path.write_text(format_instance(instance, metadata), encoding="utf-8")
    return path


def _content_lines(text: str) -> List[Tuple[int, str]]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def _int(token: str, number: int, field: str, line: str) -> int:
    try:
        return int(token)
    except ValueError as e:
        raise InstanceParseError(
            f"expected an integer, got {token!r}",
            line_number=number,
            field_name=field,
            line_sample=line,
            cause=e,
        ) from e


def _expect(lines: List[Tuple[int, str]], index: int, keyword: str) -> Tuple[int, List[str]]:
    if index >= len(lines):
        raise InstanceParseError(f"missing '{keyword}' line", field_name=keyword)
    number, line = lines[index]
    tokens = line.split()
    if tokens[0] != keyword:
        raise InstanceParseError(
            f"expected '{keyword}', got {tokens[0]!r}",
            line_number=number,
            field_name=keyword,
            line_sample=line,
        )
    return number, tokens[1:]


def parse_instance(text: str) -> Instance:
    """
    Parse instance text.

    Raises:
        InstanceParseError: malformed text, naming the line and field
    """
    lines = _content_lines(text)

    number, rest = _expect(lines, 0, "kind")
    if len(rest) != 1:
        raise InstanceParseError("kind takes one token", line_number=number, field_name="kind",
                                 line_sample=lines[0][1])
    try:
        kind = ProblemKind(rest[0])
    except ValueError as e:
        raise InstanceParseError(
            f"unknown kind {rest[0]!r}",
            line_number=number,
            field_name="kind",
            line_sample=lines[0][1],
            cause=e,
        ) from e

    number, rest = _expect(lines, 1, "containers")
    containers = tuple(_int(tok, number, "containers", lines[1][1]) for tok in rest)

    number, rest = _expect(lines, 2, "items")
    if len(rest) != 1:
        raise InstanceParseError("items takes one count", line_number=number, field_name="items",
                                 line_sample=lines[2][1])
    n = _int(rest[0], number, "items", lines[2][1])

    body = lines[3:]
    if len(body) != n:
        raise InstanceParseError(
            f"expected {n} item lines, found {len(body)}",
            line_number=body[-1][0] if body else number,
            field_name="items",
        )

    items = []
    for j, (number, line) in enumerate(body):
        tokens = line.split()
        if len(tokens) not in (1, 2):
            raise InstanceParseError("item line takes weight [value]", line_number=number,
                                     field_name="item", line_sample=line)
        weight = _int(tokens[0], number, "weight", line)
        value = _int(tokens[1], number, "value", line) if len(tokens) == 2 else 0
        if weight < 1 or value < 0:
            raise InstanceParseError("weight must be >= 1 and value >= 0", line_number=number,
                                     field_name="item", line_sample=line)
        items.append(Item(id=j, weight=weight, value=value))

    try:
        return Instance(kind=kind, containers=containers, items=tuple(items))
    except InstanceValidationError as e:
        raise InstanceParseError(e.message, field_name="instance", cause=e) from e


def read_instance(path: PathLike) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def read_instance_metadata(path: PathLike) -> Dict[str, str]:
    """``# key value`` comment lines of an instance file."""
    metadata = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line.startswith("#"):
            continue
        parts = line[1:].split(None, 1)
        if len(parts) == 2:
            metadata[parts[0]] = parts[1].strip()
    return metadata


# Solution files
def format_solution(solution: Solution) -> str:
    lines = [f"bins {len(solution.assignments)}"]
    for a in solution.assignments:
        lines.append(" ".join(str(i) for i in sorted(a.item_ids)) if len(a) else "-")
    overflow = " ".join(str(i) for i in sorted(solution.overflow.item_ids))
    lines.append(f"overflow {overflow}".rstrip())
    lines.append(f"objective {solution.objective}")
    return "\n".join(lines) + "\n"


def write_solution(solution: Solution, path: PathLike) -> Path:
    path = Path(path)
    path.write_text(format_solution(solution), encoding="utf-8")
    return path


def parse_solution_layout(text: str, instance: Instance) -> SolutionLayout:
    """
    Parse solution text into raw id lists, keeping repeated ids.

    Raises:
        InstanceParseError: malformed text or unknown item ids
    """
    lines = _content_lines(text)
    number, rest = _expect(lines, 0, "bins")
    if len(rest) != 1:
        raise InstanceParseError("bins takes one count", line_number=number, field_name="bins",
                                 line_sample=lines[0][1])
    k = _int(rest[0], number, "bins", lines[0][1])
    if len(lines) < k + 1:
        raise InstanceParseError(f"expected {k} bin lines", line_number=number, field_name="bins")

    def ids_of(tokens: List[str], number: int, line: str, field: str) -> Tuple[int, ...]:
        ids = tuple(_int(tok, number, field, line) for tok in tokens if tok != "-")
        for i in ids:
            if not 0 <= i < instance.n:
                raise InstanceParseError(f"unknown item id {i}", line_number=number,
                                         field_name=field, line_sample=line)
        return ids

    bins = tuple(ids_of(line.split(), number, line, "bin") for number, line in lines[1:k + 1])

    overflow: Tuple[int, ...] = ()
    objective: Optional[int] = None
    for number, line in lines[k + 1:]:
        tokens = line.split()
        if tokens[0] == "overflow":
            overflow = ids_of(tokens[1:], number, line, "overflow")
        elif tokens[0] == "objective" and len(tokens) == 2:
            objective = _int(tokens[1], number, "objective", line)
        else:
            raise InstanceParseError(f"unexpected line {tokens[0]!r}", line_number=number,
                                     field_name="solution", line_sample=line)

    return SolutionLayout(bins=bins, overflow=overflow, objective=objective)


def parse_solution(text: str, instance: Instance) -> Solution:
    """
    Parse solution text against its instance.

    The objective is recomputed when the file does not state one.

    Raises:
        InstanceParseError: malformed text, unknown item ids or an id repeated
                            within one bin
    """
    layout = parse_solution_layout(text, instance)

    def assignment(ids: Tuple[int, ...], field: str) -> BinAssignment:
        try:
            return BinAssignment.of(instance.item(i) for i in ids)
        except InstanceValidationError as e:
            raise InstanceParseError(e.message, field_name=field, cause=e) from e

    solution = Solution(
        assignments=tuple(assignment(ids, "bin") for ids in layout.bins),
        overflow=assignment(layout.overflow, "overflow"),
    )
    objective = layout.objective
    if objective is None:
        objective = objective_of(instance, solution)
    return solution.model_copy(update={"objective": objective})


def read_solution(path: PathLike, instance: Instance) -> Solution:
    return parse_solution(Path(path).read_text(encoding="utf-8"), instance)


def read_solution_layout(path: PathLike, instance: Instance) -> SolutionLayout:
    return parse_solution_layout(Path(path).read_text(encoding="utf-8"), instance)


def instance_filename(spec: GenSpec) -> str:
    return f"{spec.kind.value}-{spec.instance_class.value}-n{spec.n}-m{spec.m}-s{spec.seed}.inst"
