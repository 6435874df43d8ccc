"""
Benchmark runs over a directory of instance files

Every (instance, solver, pruning) run is independent; rows are aggregated per
(class, kind, n, m, solver, pruning) with failed runs counted and excluded from
the means.
"""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
import structlog
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import BenchError
from .instances import read_instance, read_instance_metadata
from .models import PruningPolicy, SolverConfig, SolveStatus
from .solvers import solve

logger = structlog.get_logger(__name__)

CSV_COLUMNS = ["class", "kind", "n", "m", "solver", "pruning", "fail", "meanTime", "meanNodes"]
GROUP_COLUMNS = ["class", "kind", "n", "m", "solver", "pruning"]

SolverChoice = Tuple[str, Optional[PruningPolicy]]


class BenchRow(BaseModel):
    """One aggregated table row; means cover the successful runs only."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    instance_class: str = Field(..., alias="class")
    kind: str
    n: int
    m: int
    solver: str
    pruning: str
    fail: int = Field(..., ge=0)
    mean_time: Optional[float] = Field(default=None, alias="meanTime")
    mean_nodes: Optional[float] = Field(default=None, alias="meanNodes")


def parse_solver_choice(token: str) -> SolverChoice:
    """
    ``bc:ndp`` -> ("bc", NDP); ``item`` -> ("item", None).

    Raises:
        ValueError: unknown solver or pruning name
    """
    name, _, pruning = token.partition(":")
    if name not in ("bc", "item", "oracle"):
        raise ValueError(f"Unknown solver: {name}")
    if not pruning:
        return name, PruningPolicy.NDP if name == "bc" else None
    return name, PruningPolicy(pruning.lower())


def _run_one(
    path: str,
    solver: str,
    pruning: Optional[PruningPolicy],
    base: SolverConfig,
) -> Dict[str, Any]:
    # top-level so the process pool can pickle it
    instance = read_instance(path)
    metadata = read_instance_metadata(path)
    config = base.model_copy(update={"pruning": pruning or PruningPolicy.NONE})
    report = solve(instance, config, solver=solver)
    return {
        "instance": Path(path).name,
        "class": metadata.get("class", "unknown"),
        "kind": instance.kind.value,
        "n": instance.n,
        "m": instance.m,
        "solver": solver,
        "pruning": pruning.value if pruning else "-",
        "status": report.status.value,
        "objective": report.objective,
        "nodes": report.nodes,
        "elapsed": report.elapsed,
    }


def list_instances(instance_dir: Union[str, Path]) -> List[Path]:
    directory = Path(instance_dir)
    if not directory.is_dir():
        raise BenchError(f"Not a directory: {directory}", instance_dir=str(directory))
    paths = sorted(directory.glob("*.inst"))
    if not paths:
        raise BenchError(f"No instance files in {directory}", instance_dir=str(directory))
    return paths


def run_bench(
    instance_dir: Union[str, Path],
    solvers: Sequence[SolverChoice],
    time_limit: float = 300.0,
    node_limit: Optional[int] = None,
    workers: int = 1,
    config: Optional[SolverConfig] = None,
) -> pd.DataFrame:
    """
    Run every solver choice on every instance file in a directory.

    ``config`` supplies the remaining search settings (batch widths, ordering,
    depth limit); pruning comes from each solver choice and the limits from
    the arguments.

    Returns:
        One row per run: instance, class, kind, n, m, solver, pruning,
        status, objective, nodes, elapsed

    Raises:
        BenchError: the directory is missing or holds no ``.inst`` files
    """
    paths = list_instances(instance_dir)
    base = (config or SolverConfig()).model_copy(
        update={"time_limit": time_limit, "node_limit": node_limit}
    )
    jobs = [(str(p), solver, pruning, base) for p in paths for solver, pruning in solvers]
    logger.info("Bench started", instances=len(paths), runs=len(jobs), workers=workers)

    if workers <= 1:
        records = [_run_one(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_one, *job) for job in jobs]
            records = [f.result() for f in futures]

    frame = pd.DataFrame.from_records(records)
    logger.info("Bench finished", runs=len(frame))
    return frame


def aggregate(runs: pd.DataFrame) -> pd.DataFrame:
    """Group runs into table rows in the fixed CSV column order."""
    runs = runs.copy()
    runs["failed"] = runs["status"].isin(
        [SolveStatus.TIME_LIMIT.value, SolveStatus.NODE_LIMIT.value]
    )
    ok = runs[~runs["failed"]]

    grouped = runs.groupby(GROUP_COLUMNS, sort=True)
    table = grouped["failed"].sum().astype(int).rename("fail").to_frame()
    if ok.empty:
        table["meanTime"] = float("nan")
        table["meanNodes"] = float("nan")
    else:
        means = ok.groupby(GROUP_COLUMNS, sort=True).agg(
            meanTime=("elapsed", "mean"), meanNodes=("nodes", "mean")
        )
        table = table.join(means, how="left")
    table = table.reset_index()
    return table[CSV_COLUMNS]


def bench_rows(table: pd.DataFrame) -> List[BenchRow]:
    rows = []
    for record in table.to_dict(orient="records"):
        for key in ("meanTime", "meanNodes"):
            if pd.isna(record[key]):
                record[key] = None
        rows.append(BenchRow.model_validate(record))
    return rows


def write_csv(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    table.to_csv(path, index=False, columns=CSV_COLUMNS, float_format="%.6f")
    return path


def format_table(table: pd.DataFrame) -> str:
    return table.to_string(index=False, na_rep="-", float_format=lambda x: f"{x:.4f}")
