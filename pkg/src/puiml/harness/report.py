"""Rendering and reloading experiment reports: F1 grid, group statistics, top-3 models."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from dataclasses import dataclass
from pathlib import Path

from .. import __version__
from ..evalstat.stats import GroupStats, GroupSummary
from ..fixture import PaperFixture
from ..select import GROUP_LABELS, GROUP_NAMES, FeatureGroupSpec
from .protocol import CellResult, ExperimentReport, TTestRecord

FORMATS = ("csv", "markdown-table", "json")
REPORT_KIND = "puiml-experiment-report"


@dataclass(frozen=True)
class RankedCell:
    target: str
    model: str
    group: str
    f1: float


def top_models(source: ExperimentReport | PaperFixture, k: int = 3) -> dict[str, list[RankedCell]]:
    """The k highest-F1 (model, group) cells per target.

    Ties keep table order: row (model) order first, then group column order.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    by_target: dict[str, list[RankedCell]] = {}
    for target, model, group, f1 in source.cells() if isinstance(source, PaperFixture) else source.ordered_cells():
        by_target.setdefault(target, []).append(RankedCell(target, model, group, float(f1)))
    # sorted() is stable, so equal scores stay in table order.
    return {t: sorted(cells, key=lambda c: -c.f1)[:k] for t, cells in by_target.items()}


def _num(x):
    """JSON-safe float: NaN and infinities become null."""
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return x


def report_to_json(report: ExperimentReport) -> dict:
    cells = []
    for t in report.targets:
        for m in report.models:
            for g in GROUP_NAMES:
                key = (t, m, g)
                if key not in report.cells:
                    continue
                c = report.cells[key]
                entry = {"target": t, "model": m, "group": g, "status": "skipped" if c is None else "ok"}
                if c is not None:
                    entry.update(mean_f1=c.mean_f1, fold_f1=list(c.fold_f1), params=dict(c.params),
                                 flags=list(c.flags), leak_free=c.leak_free, evaluations=c.evaluations)
                cells.append(entry)
    stats = [] if report.group_stats is None else [
        {"group": s.name, "n": s.n, "mean": s.mean, "sd": _num(s.sd)} for s in report.group_stats.groups
    ]
    ttests = [{"a": r.a, "b": r.b, "kind": r.kind, "n_pairs": r.n_pairs, "t": _num(r.t), "df": _num(r.df),
               "p": _num(r.p), "error": r.error} for r in report.ttests]
    top = {t: [{"model": c.model, "group": c.group, "f1": c.f1} for c in cs]
           for t, cs in top_models(report).items()}
    return {
        "kind": REPORT_KIND,
        "version": report.version,
        "seed": report.seed,
        "targets": list(report.targets),
        "models": list(report.models),
        "groups": list(GROUP_NAMES),
        "averaging": dict(report.averaging),
        "cv_executions": report.cv_executions,
        "cells": cells,
        "group_specs": {t: [g.to_json() for g in gs] for t, gs in report.groups.items()},
        "group_stats": stats,
        "ttests": ttests,
        "top_models": top,
        "notes": list(report.notes),
        "config": report.config,
    }


def dumps_json(report: ExperimentReport) -> str:
    return json.dumps(report_to_json(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def report_from_json(data: dict) -> ExperimentReport:
    if data.get("kind") != REPORT_KIND:
        raise ValueError("not an experiment report")
    cells: dict[tuple[str, str, str], CellResult | None] = {}
    for c in data["cells"]:
        key = (c["target"], c["model"], c["group"])
        if c["status"] == "skipped":
            cells[key] = None
        else:
            cells[key] = CellResult(c["mean_f1"], tuple(c["fold_f1"]), dict(c["params"]), tuple(c["flags"]),
                                    c["leak_free"], c["evaluations"])
    stats = None
    if data["group_stats"]:
        stats = GroupStats(tuple(
            GroupSummary(s["group"], s["n"], s["mean"], float("nan") if s["sd"] is None else s["sd"])
            for s in data["group_stats"]
        ))
    return ExperimentReport(
        targets=tuple(data["targets"]),
        models=tuple(data["models"]),
        groups={t: tuple(FeatureGroupSpec.from_json(g) for g in gs) for t, gs in data["group_specs"].items()},
        cells=cells,
        averaging=dict(data["averaging"]),
        group_stats=stats,
        ttests=tuple(TTestRecord(**r) for r in data["ttests"]),
        notes=tuple(data["notes"]),
        config=data["config"],
        seed=data["seed"],
        version=data.get("version", __version__),
        cv_executions=data["cv_executions"],
    )


def load_report(path: str | Path) -> ExperimentReport:
    path = Path(path)
    if path.is_dir():
        path = path / "report.json"
    return report_from_json(json.loads(path.read_text(encoding="utf-8")))


def _r2(x) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.2f}"


def _grid_rows(report: ExperimentReport):
    for t in report.targets:
        for m in report.models:
            keys = [(t, m, g) for g in GROUP_NAMES]
            if not any(k in report.cells for k in keys):
                continue
            yield t, m, [report.cells.get(k) for k in keys]


def _stats_rows(report: ExperimentReport):
    if report.group_stats is None:
        return
    for s in report.group_stats.groups:
        yield GROUP_LABELS[s.name], str(s.n), _r2(s.mean), _r2(s.sd)


def _top_rows(report: ExperimentReport):
    for t, cells in top_models(report).items():
        for c in cells:
            yield t, GROUP_LABELS[c.group], c.model, _r2(c.f1)


GRID_HEADER = ["Target", "Model"] + [GROUP_LABELS[g] for g in GROUP_NAMES]
STATS_HEADER = ["Group", "N", "Mean", "SD"]
TOP_HEADER = ["Target", "Group", "Model", "F1"]
TTEST_HEADER = ["Comparison", "Kind", "Pairs", "t", "df", "p"]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _md_table(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _ttest_rows(report: ExperimentReport):
    for r in report.ttests:
        comp = f"{GROUP_LABELS[r.a]} vs {GROUP_LABELS[r.b]}"
        if r.error:
            yield comp, r.kind, str(r.n_pairs), "error", r.error, ""
        else:
            yield comp, r.kind, str(r.n_pairs), f"{r.t:.3f}", f"{r.df:.2f}", f"{r.p:.4f}"


def render_markdown(report: ExperimentReport) -> str:
    grid = [[t, m] + ["skipped" if c is None else _r2(c.mean_f1) for c in cs] for t, m, cs in _grid_rows(report)]
    parts = [
        "## F1 by target, model and feature group\n\n", _md_table(GRID_HEADER, grid),
        "\n## Group statistics\n\n", _md_table(STATS_HEADER, list(_stats_rows(report))),
        "\n## Three best models per target\n\n", _md_table(TOP_HEADER, list(_top_rows(report))),
        "\n## Group comparisons\n\n", _md_table(TTEST_HEADER, list(_ttest_rows(report))),
    ]
    if report.notes:
        parts.append("\n## Notes\n\n" + "".join(f"- {n}\n" for n in report.notes))
    return "".join(parts)


def render_csv(report: ExperimentReport) -> dict[str, str]:
    grid = [[t, m] + ["" if c is None else _r2(c.mean_f1) for c in cs] for t, m, cs in _grid_rows(report)]
    return {
        "f1_grid.csv": _csv_text(GRID_HEADER, grid),
        "group_stats.csv": _csv_text(STATS_HEADER, _stats_rows(report)),
        "top_models.csv": _csv_text(TOP_HEADER, _top_rows(report)),
        "ttests.csv": _csv_text(TTEST_HEADER, _ttest_rows(report)),
    }


def emit_report(report: ExperimentReport, fmt: str, out: str | Path) -> list[Path]:
    """Write the report under directory ``out`` and return the files written."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        files = {"report.json": dumps_json(report)}
    elif fmt == "markdown-table":
        files = {"report.md": render_markdown(report)}
    else:
        files = render_csv(report)
    written = []
    for name, text in files.items():
        p = out / name
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written


def report_schema() -> dict:
    """The JSON Schema every machine-format report validates against."""
    return json.loads(resources.files("puiml").joinpath("data/report.schema.json").read_text(encoding="utf-8"))
