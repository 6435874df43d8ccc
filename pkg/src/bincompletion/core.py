"""
Feasibility predicates and solution validation shared by every module
"""

from collections import Counter
from typing import Iterable, List, Tuple, Union

from .models import (
    BinAssignment,
    Instance,
    Item,
    ProblemKind,
    Solution,
    SolutionLayout,
    ValidationVerdict,
    Violation,
)


def feasible_packing(a: BinAssignment, capacity: int) -> bool:
    return a.weight_sum <= capacity


def feasible_covering(a: BinAssignment, quota: int) -> bool:
    return a.weight_sum >= quota


def is_maximal(a: BinAssignment, capacity: int, remaining: Iterable[Item]) -> bool:
    """True iff no remaining item fits into the bin's residual capacity."""
    residual = capacity - a.weight_sum
    return all(it.weight > residual for it in remaining)


def is_minimal(a: BinAssignment, quota: int) -> bool:
    """True iff removing any member drops the bin below its quota."""
    return all(a.weight_sum - it.weight < quota for it in a.items)


def objective_of(instance: Instance, solution: Solution) -> int:
    """Recompute the objective from a solution's assignments."""
    kind = instance.kind
    if kind is ProblemKind.BINPACKING:
        return sum(1 for a in solution.assignments if len(a) > 0)
    if kind is ProblemKind.BINCOVERING:
        quota = instance.containers[0]
        return sum(1 for a in solution.assignments if a.weight_sum >= quota)
    # MKP profit and MCCP cost both sum the assigned values
    return sum(a.value_sum for a in solution.assignments)


def validate_solution(instance: Instance, solution: Solution) -> ValidationVerdict:
    """
    Check a solution against every constraint of its problem.

    Args:
        instance: The problem instance
        solution: Candidate solution

    Returns:
        Verdict listing each violation; an empty list means the solution is valid
    """
    violations: List[Violation] = []
    kind = instance.kind

    placed = [it for a in solution.assignments for it in a.items]
    placed.extend(solution.overflow.items)

    for it in placed:
        if it.id >= instance.n:
            violations.append(Violation(
                code="unknown-item",
                message=f"item {it.id} is not part of the instance",
                details={"item": it.id},
            ))
        elif instance.item(it.id) != it:
            violations.append(Violation(
                code="item-mismatch",
                message=f"item {it.id} differs from the instance's item",
                details={"item": it.id},
            ))

    counts = Counter(it.id for it in placed)
    for item_id, count in sorted(counts.items()):
        if count > 1:
            violations.append(Violation(
                code="duplicate-item",
                message=f"item {item_id} is used {count} times",
                details={"item": item_id, "count": count},
            ))

    if kind.is_uniform:
        missing = [it.id for it in instance.items if it.id not in counts]
        if missing:
            violations.append(Violation(
                code="missing-item",
                message=f"{len(missing)} item(s) not assigned: {missing}",
                details={"items": missing},
            ))

    if kind is not ProblemKind.BINCOVERING and len(solution.overflow) > 0:
        violations.append(Violation(
            code="overflow-not-allowed",
            message=f"{kind.value} solutions have no overflow assignment",
        ))

    if not kind.is_uniform and len(solution.assignments) != instance.m:
        violations.append(Violation(
            code="bin-count",
            message=f"expected {instance.m} bin assignments, got {len(solution.assignments)}",
            details={"expected": instance.m, "actual": len(solution.assignments)},
        ))

    for index, a in enumerate(solution.assignments):
        bound = instance.capacity_of(min(index, instance.m - 1))
        if kind.is_packing and not feasible_packing(a, bound):
            violations.append(Violation(
                code="capacity-exceeded",
                message=f"bin {index} holds {a.weight_sum} > capacity {bound}",
                details={"bin": index, "load": a.weight_sum, "capacity": bound},
            ))
        if not kind.is_packing and not feasible_covering(a, bound):
            violations.append(Violation(
                code="quota-unmet",
                message=f"bin {index} holds {a.weight_sum} < quota {bound}",
                details={"bin": index, "load": a.weight_sum, "quota": bound},
            ))

    recomputed = objective_of(instance, solution)
    if recomputed != solution.objective:
        violations.append(Violation(
            code="objective-mismatch",
            message=f"reported objective {solution.objective}, recomputed {recomputed}",
            details={"reported": solution.objective, "recomputed": recomputed},
        ))

    return ValidationVerdict(violations=violations, recomputed_objective=recomputed)


def validate_layout(instance: Instance, layout: SolutionLayout) -> ValidationVerdict:
    """
    Validate raw id lists read from a solution file.

    An id repeated within one bin is reported as ``duplicate-item``; the bin
    then counts the item once and the rest of the checks run as in
    ``validate_solution``. The stated objective is used when present.
    """
    found: List[Violation] = []

    def assignment(ids: Tuple[int, ...], where: Union[int, str]) -> BinAssignment:
        for item_id, count in sorted(Counter(ids).items()):
            if count > 1:
                found.append(Violation(
                    code="duplicate-item",
                    message=f"item {item_id} is listed {count} times in bin {where}",
                    details={"bin": where, "item": item_id, "count": count},
                ))
            if not 0 <= item_id < instance.n:
                found.append(Violation(
                    code="unknown-item",
                    message=f"item {item_id} is not part of the instance",
                    details={"item": item_id},
                ))
        known = [i for i in dict.fromkeys(ids) if 0 <= i < instance.n]
        return BinAssignment.of(instance.item(i) for i in known)

    solution = Solution(
        assignments=tuple(assignment(ids, index) for index, ids in enumerate(layout.bins)),
        overflow=assignment(layout.overflow, "overflow"),
    )
    objective = layout.objective
    if objective is None:
        objective = objective_of(instance, solution)
    verdict = validate_solution(instance, solution.model_copy(update={"objective": objective}))
    return ValidationVerdict(
        violations=found + verdict.violations,
        recomputed_objective=verdict.recomputed_objective,
    )
