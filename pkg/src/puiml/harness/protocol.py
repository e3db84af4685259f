"""The full experiment: every (target, feature group, model) cell under 10-fold CV."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator

from .. import __version__
from ..clinical import CLINICAL_SCHEMA
from ..cohort import CohortConfig, default_config, generate_cohort, planted_config
from ..evalstat import (
    AVERAGING,
    DT_GRID,
    KNN_GRID,
    MODEL_IDS,
    ClassifierSpec,
    CVResult,
    DegenerateTestError,
    GroupStats,
    derive_seed,
    evaluate,
    group_stats,
    make_folds,
    t_test,
)
from ..evalstat.stats import T_KINDS
from ..select import GROUP_NAMES, FeatureGroupSpec, build_groups
from ..tabular import TARGETS, Dataset, Schema, load_csv, project_group

log = logging.getLogger(__name__)

DEFAULT_AVERAGING = {"UI": "binary", "STRESS_UI": "binary", "FREQ_UI": "weighted", "INT_UI": "weighted"}
COMPARISONS = (("intrinsic", "extrinsic"), ("intrinsic_best", "extrinsic_best"))


class DatasetSource(BaseModel):
    csv: str | None = None
    schema_path: str | None = Field(None, alias="schema")
    cohort: CohortConfig | None = None
    preset: Literal["default", "planted"] = "default"
    n: int | None = Field(None, ge=1)

    model_config = {"populate_by_name": True}


class ProtocolConfig(BaseModel):
    data: DatasetSource = DatasetSource()
    targets: list[str] = list(TARGETS)
    models: list[str] = list(MODEL_IDS)
    groups: Literal["replication", "data-driven"] = "replication"
    folds: int = Field(10, ge=2)
    stratified: bool = True
    seed: int = Field(0, ge=0, lt=2**64)
    f1_averaging: dict[str, str] = {}
    knn_grid: list[dict[str, Any]] = [dict(p) for p in KNN_GRID]
    dt_grid: list[dict[str, Any]] = [dict(p) for p in DT_GRID]
    smote_k: int = Field(5, ge=1)
    workers: int = Field(1, ge=1)

    @field_validator("targets")
    @classmethod
    def _targets(cls, v):
        bad = [t for t in v if t not in TARGETS]
        if bad:
            raise ValueError(f"unknown targets {bad}; expected a subset of {TARGETS}")
        return v

    @field_validator("models")
    @classmethod
    def _models(cls, v):
        bad = [m for m in v if m not in MODEL_IDS]
        if bad:
            raise ValueError(f"unknown models {bad}; expected a subset of {MODEL_IDS}")
        return v

    @field_validator("f1_averaging")
    @classmethod
    def _averaging(cls, v):
        for target, mode in v.items():
            if target not in TARGETS or mode not in AVERAGING:
                raise ValueError(f"bad averaging entry {target}: {mode}")
        return v

    @classmethod
    def load(cls, path: str | Path) -> "ProtocolConfig":
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def averaging_for(self, target: str) -> str:
        return self.f1_averaging.get(target, DEFAULT_AVERAGING[target])

    def specs(self) -> list[ClassifierSpec]:
        knn, dt = tuple(self.knn_grid), tuple(self.dt_grid)
        table = {
            "GaussianNB": ClassifierSpec("GaussianNB"),
            "ComplementNB": ClassifierSpec("ComplementNB"),
            "KNN": ClassifierSpec("KNN"),
            "DT": ClassifierSpec("DT"),
            "KNN improved": ClassifierSpec("KNN improved", grid=knn),
            "DT improved": ClassifierSpec("DT improved", grid=dt),
            "KNN imp.randover": ClassifierSpec("KNN imp.randover", oversampler="randover", grid=knn),
            "KNN imp.SMOTE": ClassifierSpec("KNN imp.SMOTE", oversampler="smote", grid=knn, smote_k=self.smote_k),
        }
        return [table[m] for m in MODEL_IDS if m in self.models]


def load_dataset(config: ProtocolConfig) -> Dataset:
    src = config.data
    if src.csv:
        schema = Schema.load(src.schema_path) if src.schema_path else CLINICAL_SCHEMA
        return load_csv(src.csv, schema)
    if src.cohort is not None:
        cohort = src.cohort
    elif src.preset == "planted":
        cohort = planted_config(n=src.n or 300, seed=config.seed)
    else:
        cohort = default_config(n=src.n or 93, seed=config.seed)
    return generate_cohort(cohort)


@dataclass(frozen=True, eq=False)
class CellResult:
    mean_f1: float
    fold_f1: tuple[float, ...]
    params: dict
    flags: tuple[str, ...]
    leak_free: bool
    evaluations: int
    cv: CVResult | None = None  # in-memory only; carries the per-fold audits

    @classmethod
    def from_cv(cls, cv: CVResult) -> "CellResult":
        return cls(cv.mean_f1, tuple(cv.fold_f1), dict(cv.params), tuple(cv.flags), cv.leak_free,
                   cv.evaluations, cv)


@dataclass(frozen=True)
class TTestRecord:
    a: str
    b: str
    kind: str
    n_pairs: int
    t: float | None = None
    df: float | None = None
    p: float | None = None
    error: str | None = None


@dataclass(eq=False)
class ExperimentReport:
    targets: tuple[str, ...]
    models: tuple[str, ...]
    groups: dict[str, tuple[FeatureGroupSpec, ...]]
    cells: dict[tuple[str, str, str], CellResult | None]
    averaging: dict[str, str]
    group_stats: GroupStats | None = None
    ttests: tuple[TTestRecord, ...] = ()
    notes: tuple[str, ...] = ()
    config: dict = field(default_factory=dict)
    seed: int = 0
    version: str = __version__
    cv_executions: int = 0

    def f1(self, target: str, model: str, group: str) -> float:
        cell = self.cells.get((target, model, group))
        return float("nan") if cell is None else cell.mean_f1

    def column(self, group: str) -> np.ndarray:
        return np.array([self.f1(t, m, group) for t in self.targets for m in self.models])

    def ordered_cells(self):
        """(target, model, group, f1) in row (target, model) then column order; skipped cells omitted."""
        for t in self.targets:
            for m in self.models:
                for g in GROUP_NAMES:
                    cell = self.cells.get((t, m, g))
                    if cell is not None:
                        yield t, m, g, cell.mean_f1


def summarise(columns: dict[str, np.ndarray]) -> tuple[GroupStats | None, tuple[TTestRecord, ...]]:
    present = {g: v for g, v in columns.items() if np.isfinite(v).any()}
    stats = group_stats(present) if present else None
    records = []
    for a, b in COMPARISONS:
        if a not in columns or b not in columns:
            continue
        both = np.isfinite(columns[a]) & np.isfinite(columns[b])
        if not both.any():
            continue
        for kind in T_KINDS:
            try:
                r = t_test(columns[a][both], columns[b][both], kind)
                records.append(TTestRecord(a, b, kind, int(both.sum()), r.t, r.df, r.p))
            except (DegenerateTestError, ValueError) as exc:
                records.append(TTestRecord(a, b, kind, int(both.sum()), error=str(exc)))
    return stats, tuple(records)


# Worker state, set once per process so the dataset is not pickled per task.
_STATE: dict = {}


def _init_worker(dataset: Dataset, config: ProtocolConfig) -> None:
    _STATE["dataset"] = dataset
    _STATE["config"] = config
    _STATE["specs"] = {s.model_id: s for s in config.specs()}
    _STATE["folds"] = {}


def _folds_for(target: str):
    cache = _STATE["folds"]
    if target not in cache:
        config = _STATE["config"]
        y = _STATE["dataset"].labels(target)
        cache[target] = make_folds(y, config.folds, derive_seed(config.seed, "folds", target), config.stratified)
    return cache[target]


def _run_cell(task: tuple[str, FeatureGroupSpec, str]) -> CVResult:
    target, group, model_id = task
    dataset, config = _STATE["dataset"], _STATE["config"]
    X = project_group(dataset, group)
    y = dataset.labels(target)
    seed = derive_seed(config.seed, "cell", target, group.name, model_id)
    return evaluate(_STATE["specs"][model_id], X, y, _folds_for(target), config.averaging_for(target), seed)


def run_protocol(config: ProtocolConfig, dataset: Dataset | None = None) -> ExperimentReport:
    """Run every configured cell and assemble the report.

    Each cell draws its randomness from (master seed, cell id) only, so results do not
    depend on the worker count or scheduling order.
    """
    if dataset is None:
        dataset = load_dataset(config)
    for t in config.targets:
        if t not in dataset.schema:
            raise ValueError(f"dataset has no outcome column {t}")
    models = tuple(s.model_id for s in config.specs())
    groups: dict[str, tuple[FeatureGroupSpec, ...]] = {}
    notes: list[str] = []
    tasks: list[tuple[str, FeatureGroupSpec, str]] = []
    for target in config.targets:
        groups[target] = build_groups(dataset.schema, target, dataset, mode=config.groups)
        for g in groups[target]:
            notes.extend(f"{target}/{g.name}: {note}" for note in g.notes)
            if not g.executable:
                notes.append(f"{target}/{g.name}: skipped, undefined variable(s) {list(g.flagged)}")
                continue
            tasks.extend((target, g, m) for m in models)

    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=(dataset, config)) as pool:
            results = list(pool.map(_run_cell, tasks, chunksize=1))
    else:
        _init_worker(dataset, config)
        try:
            results = [_run_cell(task) for task in tasks]
        finally:
            _STATE.clear()

    cells: dict[tuple[str, str, str], CellResult | None] = {
        (t, m, g.name): None for t in config.targets for g in groups[t] for m in models
    }
    for (target, g, model_id), cv in zip(tasks, results):
        cells[(target, model_id, g.name)] = CellResult.from_cv(cv)
        notes.extend(f"{target}/{g.name}/{model_id}: {flag}" for flag in cv.flags)

    report = ExperimentReport(
        targets=tuple(config.targets),
        models=models,
        groups=groups,
        cells=cells,
        averaging={t: config.averaging_for(t) for t in config.targets},
        notes=tuple(notes),
        config=config.model_dump(mode="json", by_alias=True, exclude={"workers"}),
        seed=config.seed,
        cv_executions=len(results),
    )
    report.group_stats, report.ttests = summarise({g: report.column(g) for g in GROUP_NAMES})
    return report
