"""Benchmark grid: datasets x manifolds x dimensions x replicates.

A suite is described by a flat key-value spec (see :func:`parse_spec`).
Every cell generates its dataset replicate from a derived seed, tunes
the embedding with :func:`hilbertsimplex.embedding.random_search`, and
appends one CSV row; completed cells are skipped on rerun, so partial
runs compose with full ones.  Cells are independent jobs and may be
executed by a process pool; CSV writes stay in the parent process.
"""

from __future__ import annotations

import concurrent.futures
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .embedding import random_search
from .graphs import (
    make_barabasi_albert,
    make_erdos_renyi,
    random_points_distance_matrix,
    random_walk_similarity,
    shortest_path_matrix,
)
from .manifolds import MANIFOLDS, check_manifold
from .seeding import derive_seed
from .validation import check_seed

RESULTS_HEADER = "dataset_id,seed,kind,d,lr,batch,loss,epochs,wall_ms"
SUMMARY_HEADER = "kind,d,mean_loss,std_loss,count"

DATASETS = ("er", "ba", "points")
TARGETS = ("dist", "rw")

__all__ = [
    "RESULTS_HEADER",
    "SUMMARY_HEADER",
    "ExperimentSpec",
    "ResultRecord",
    "parse_spec",
    "load_spec",
    "dataset_matrix",
    "run_suite",
    "summarize",
    "read_records_csv",
    "write_summary_csv",
]


@dataclass
class ExperimentSpec:
    """One benchmark grid: a dataset family crossed with geometries and dims."""

    dataset: str  # "er" | "ba" | "points"
    target: str  # "dist" (stress on a distance matrix) | "rw" (KL on walk similarities)
    n: int
    seed: int
    p: float = 0.5  # er edge probability
    m: int = 2  # ba attachment count
    steps: int = 5  # rw walk length
    kinds: tuple[str, ...] = MANIFOLDS
    dims: tuple[int, ...] = tuple(range(2, 11))
    repetitions: int = 10
    trials: int = 30
    max_epochs: int = 3000
    patience: int = 100

    def validate(self) -> "ExperimentSpec":
        if self.dataset not in DATASETS:
            raise ValueError(f"dataset must be one of {DATASETS}, got {self.dataset!r}")
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}, got {self.target!r}")
        if self.dataset == "points" and self.target == "rw":
            raise ValueError("random-walk similarities need a graph dataset")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.dims or min(self.dims) < 1:
            raise ValueError("dims must be >= 1")
        for kind in self.kinds:
            check_manifold(kind)
        check_seed(self.seed)
        return self

    @property
    def dataset_id(self) -> str:
        if self.dataset == "er":
            core = f"er-n{self.n}-p{self.p:g}"
        elif self.dataset == "ba":
            core = f"ba-n{self.n}-m{self.m}"
        else:
            core = f"points-n{self.n}"
        suffix = f"rw{self.steps}" if self.target == "rw" else "spd"
        return f"{core}-{suffix}"

    @property
    def loss_kind(self) -> str:
        return "kl" if self.target == "rw" else "stress"


@dataclass(frozen=True)
class ResultRecord:
    """One completed benchmark cell."""

    dataset_id: str
    seed: int
    kind: str
    d: int
    lr: float
    batch: int
    loss: float
    epochs: int
    wall_ms: float

    @property
    def key(self) -> tuple[str, int, str, int]:
        return (self.dataset_id, self.seed, self.kind, self.d)

    def csv_row(self) -> str:
        return (
            f"{self.dataset_id},{self.seed},{self.kind},{self.d},"
            f"{self.lr:.17g},{self.batch},{self.loss:.17g},{self.epochs},{self.wall_ms:.3f}"
        )


_LIST_KEYS = {"kinds", "dims"}


def parse_spec(text: str) -> ExperimentSpec:
    """Parse a flat ``key = value`` spec; '#' starts a comment.

    Keys mirror the :class:`ExperimentSpec` fields; ``kinds`` and
    ``dims`` are comma-separated lists.
    """
    known = {f.name: f.type for f in fields(ExperimentSpec)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"spec line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ValueError(f"spec line {lineno}: unknown key {key!r}")
        if key in _LIST_KEYS:
            items = [v.strip() for v in value.split(",") if v.strip()]
            values[key] = tuple(int(v) for v in items) if key == "dims" else tuple(items)
        elif key in ("p",):
            values[key] = float(value)
        elif key in ("dataset", "target"):
            values[key] = value
        else:
            values[key] = int(value)
    missing = {"dataset", "target", "n", "seed"} - values.keys()
    if missing:
        raise ValueError(f"spec is missing required keys: {sorted(missing)}")
    return ExperimentSpec(**values).validate()


def load_spec(path) -> ExperimentSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def dataset_matrix(spec: ExperimentSpec, rep: int) -> tuple[int, np.ndarray]:
    """Generate replicate ``rep`` of the spec's target matrix.

    Returns ``(dataset_seed, matrix)`` where the seed is derived from
    ``(spec.seed, "dataset", rep)``.
    """
    dataset_seed = derive_seed(spec.seed, "dataset", rep)
    if spec.dataset == "points":
        return dataset_seed, random_points_distance_matrix(spec.n, dataset_seed)
    if spec.dataset == "er":
        g = make_erdos_renyi(spec.n, spec.p, dataset_seed)
    else:
        g = make_barabasi_albert(spec.n, spec.m, dataset_seed)
    if spec.target == "rw":
        return dataset_seed, random_walk_similarity(g, spec.steps)
    return dataset_seed, shortest_path_matrix(g)


def _run_cell(args) -> ResultRecord:
    matrix, loss_kind, kind, d, trials, search_seed, dataset_id, dataset_seed, max_epochs, patience = args
    start = time.perf_counter()
    config, result = random_search(
        matrix,
        kind,
        d,
        loss=loss_kind,
        trials=trials,
        seed=search_seed,
        max_epochs=max_epochs,
        patience=patience,
    )
    wall_ms = (time.perf_counter() - start) * 1e3
    return ResultRecord(
        dataset_id=dataset_id,
        seed=dataset_seed,
        kind=kind,
        d=d,
        lr=config.learning_rate,
        batch=config.batch_size,
        loss=result.final_loss,
        epochs=result.epochs_run,
        wall_ms=wall_ms,
    )


def run_suite(
    spec: ExperimentSpec,
    out_csv=None,
    workers: int = 1,
    log=None,
) -> tuple[list[ResultRecord], list[tuple[tuple, str]]]:
    """Run every (replicate, kind, dim) cell of the grid.

    Returns ``(records, failures)``; ``records`` includes rows already
    present in ``out_csv`` (those cells are skipped), ``failures`` is a
    list of ``(cell_key, message)`` for cells whose generation or
    optimization errored.  With ``out_csv`` set, each fresh record is
    appended and flushed as soon as it completes.
    """
    spec.validate()
    log = log or (lambda msg: print(msg, file=sys.stderr))
    existing: dict[tuple, ResultRecord] = {}
    if out_csv is not None and Path(out_csv).exists():
        for record in read_records_csv(out_csv):
            existing[record.key] = record

    jobs = []
    records: dict[int, ResultRecord] = {}
    failures: list[tuple[tuple, str]] = []
    job_index = 0
    for rep in range(spec.repetitions):
        dataset_seed = derive_seed(spec.seed, "dataset", rep)
        try:
            _, matrix = dataset_matrix(spec, rep)
        except Exception as exc:  # per-record failure, suite continues
            for kind in spec.kinds:
                for d in spec.dims:
                    key = (spec.dataset_id, dataset_seed, kind, d)
                    failures.append((key, f"dataset generation failed: {exc}"))
                    log(f"FAIL {key}: dataset generation failed: {exc}")
            continue
        for kind in spec.kinds:
            for d in spec.dims:
                key = (spec.dataset_id, dataset_seed, kind, d)
                if key in existing:
                    records[job_index] = existing[key]
                    log(f"skip {key} (already complete)")
                else:
                    search_seed = derive_seed(spec.seed, "search", rep, kind, d)
                    jobs.append(
                        (
                            job_index,
                            (
                                matrix,
                                spec.loss_kind,
                                kind,
                                d,
                                spec.trials,
                                search_seed,
                                spec.dataset_id,
                                dataset_seed,
                                spec.max_epochs,
                                spec.patience,
                            ),
                        )
                    )
                job_index += 1

    writer = None
    if out_csv is not None:
        path = Path(out_csv)
        fresh = not path.exists() or path.stat().st_size == 0
        writer = open(path, "a", encoding="ascii")
        if fresh:
            writer.write(RESULTS_HEADER + "\n")
            writer.flush()

    def commit(index: int, record: ResultRecord) -> None:
        records[index] = record
        if writer is not None:
            writer.write(record.csv_row() + "\n")
            writer.flush()
        log(f"done {record.key}: loss={record.loss:.6g} epochs={record.epochs}")

    try:
        if workers <= 1:
            for index, args in jobs:
                try:
                    commit(index, _run_cell(args))
                except Exception as exc:
                    key = (args[6], args[7], args[2], args[3])
                    failures.append((key, str(exc)))
                    log(f"FAIL {key}: {exc}")
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(_run_cell, args): (index, args) for index, args in jobs}
                for future in concurrent.futures.as_completed(futures):
                    index, args = futures[future]
                    try:
                        commit(index, future.result())
                    except Exception as exc:
                        key = (args[6], args[7], args[2], args[3])
                        failures.append((key, str(exc)))
                        log(f"FAIL {key}: {exc}")
    finally:
        if writer is not None:
            writer.close()

    ordered = [records[i] for i in sorted(records)]
    return ordered, failures


def summarize(records) -> list[dict]:
    """Per-(kind, d) mean and population standard deviation of the loss."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple[str, int], list[float]] = {}
    for record in records:
        groups.setdefault((record.kind, record.d), []).append(record.loss)
    rows = []
    for (kind, d) in sorted(groups):
        losses = np.asarray(groups[(kind, d)])
        rows.append(
            {
                "kind": kind,
                "d": d,
                "mean_loss": float(losses.mean()),
                "std_loss": float(losses.std()),
                "count": int(losses.size),
            }
        )
    return rows


def read_records_csv(path) -> list[ResultRecord]:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines:
        return []
    if lines[0] != RESULTS_HEADER:
        raise ValueError(f"unexpected results header in {path}: {lines[0]!r}")
    out = []
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 9:
            raise ValueError(f"malformed results row: {line!r}")
        out.append(
            ResultRecord(
                dataset_id=parts[0],
                seed=int(parts[1]),
                kind=parts[2],
                d=int(parts[3]),
                lr=float(parts[4]),
                batch=int(parts[5]),
                loss=float(parts[6]),
                epochs=int(parts[7]),
                wall_ms=float(parts[8]),
            )
        )
    return out


def write_summary_csv(rows, path) -> None:
    lines = [SUMMARY_HEADER]
    for row in rows:
        lines.append(
            f"{row['kind']},{row['d']},{row['mean_loss']:.17g},"
            f"{row['std_loss']:.17g},{row['count']}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
