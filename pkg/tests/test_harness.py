import json
from dataclasses import replace

import numpy as np
import pytest

from puiml.cli import main
from puiml.cohort import default_config, generate_cohort
from puiml.evalstat import MODEL_IDS
from puiml.fixture import TABLE6, FixtureCorrupted, PaperFixture
from puiml.harness import (
    ExperimentReport,
    ProtocolConfig,
    emit_report,
    load_report,
    run_protocol,
    top_models,
    verify_paper_stats,
)
from puiml.harness.report import dumps_json, report_schema
from puiml.select import GROUP_NAMES
from puiml.tabular import DataError, write_csv

SMALL_GRIDS = {
    "knn_grid": [{"k": 1, "weighting": "uniform"}, {"k": 5, "weighting": "distance"}],
    "dt_grid": [{"criterion": "gini", "max_depth": 2, "min_samples_split": 2},
                {"criterion": "entropy", "max_depth": None, "min_samples_split": 5}],
}


def small_config(**kw):
    base = {"data": {"preset": "default", "n": 60}, "folds": 3, "seed": 7, **SMALL_GRIDS}
    base.update(kw)
    return ProtocolConfig.model_validate(base)


@pytest.fixture(scope="module")
def small_report():
    return run_protocol(small_config())


# fixture and verification

def test_fixture_shape_and_integrity():
    fx = PaperFixture()
    fx.verify_integrity()
    assert fx.matrix.shape == (31, 6)
    per_target = {t: sum(1 for r in TABLE6 if r[0] == t) for t in ("UI", "FREQ_UI", "INT_UI", "STRESS_UI")}
    assert per_target == {"UI": 8, "FREQ_UI": 7, "INT_UI": 8, "STRESS_UI": 8}


def test_edited_fixture_refused():
    rows = list(TABLE6)
    rows[0] = (rows[0][0], rows[0][1], (0.59,) + rows[0][2][1:])
    with pytest.raises(FixtureCorrupted):
        verify_paper_stats(PaperFixture(rows=tuple(rows)))


def test_verification_flags_known_inconsistencies():
    result = verify_paper_stats()
    flagged = {c.name for c in result.discrepancies}
    assert "Int. vs Ext. t" in flagged and "Int. best vs Ext. best t" in flagged
    assert "Int. best vs Ext. best quoted Ext. best mean" in flagged
    assert "top-3 STRESS_UI" in flagged
    ok = {c.name for c in result.checks if c.ok}
    assert {"group stats Int. mean", "group stats Ext. best SD", "quoted mean Int.", "Int. vs Ext. df"} <= ok
    assert "recomputed" in result.render()


def test_top_models_fixture():
    top = top_models(PaperFixture())
    first = top["UI"][0]
    assert (first.model, first.group, first.f1) == ("KNN imp.randover", "extrinsic_best", 0.70)
    stress = [(c.model, c.group, c.f1) for c in top["STRESS_UI"]]
    assert stress == [("DT", "extrinsic", 0.93), ("DT", "extrinsic_best", 0.93),
                      ("DT improved", "extrinsic_best", 0.93)]
    assert sorted(c.f1 for c in top["FREQ_UI"]) == [0.75, 0.77, 0.77]
    assert [c.f1 for c in top["INT_UI"]] == [0.71, 0.70, 0.62]


def test_top_models_all_equal_keeps_canonical_order(small_report):
    flat = replace(small_report, cells={k: (None if v is None else replace(v, mean_f1=0.5))
                                        for k, v in small_report.cells.items()})
    top = top_models(flat, k=3)["UI"]
    expected = [(m, g) for m in flat.models for g in GROUP_NAMES if flat.cells.get(("UI", m, g))][:3]
    assert [(c.model, c.group) for c in top] == expected


# protocol

def test_protocol_grid_shape(small_report):
    r = small_report
    assert len(r.cells) == 4 * 8 * 6
    live = [c for c in r.cells.values() if c is not None]
    assert all(0.0 <= c.mean_f1 <= 1.0 for c in live)
    assert r.cv_executions == len(live)
    skipped = {k for k, v in r.cells.items() if v is None}
    assert {(t, g) for t, _, g in skipped} == {("UI", "extrinsic_best"), ("INT_UI", "extrinsic_best")}
    assert any("skipped" in n and "GROUP" in n for n in r.notes)
    assert all(c.leak_free for c in live)


def test_protocol_data_driven_runs_everything():
    r = run_protocol(small_config(groups="data-driven", targets=["STRESS_UI"], models=["GaussianNB", "KNN"]))
    assert r.cv_executions == 1 * 2 * 6 and all(v is not None for v in r.cells.values())


def test_same_seed_same_bytes_any_worker_count():
    cfg = small_config(targets=["UI", "FREQ_UI"])
    one = dumps_json(run_protocol(cfg))
    assert one == dumps_json(run_protocol(cfg))
    assert one == dumps_json(run_protocol(cfg.model_copy(update={"workers": 2})))


def test_protocol_rejects_bad_config():
    with pytest.raises(ValueError):
        small_config(folds=1)
    with pytest.raises(ValueError):
        small_config(models=["SVM"])
    with pytest.raises(ValueError):
        small_config(f1_averaging={"UI": "micro"})


def test_protocol_on_csv(tmp_path):
    write_csv(generate_cohort(default_config(n=50, seed=2)), tmp_path / "d.csv")
    cfg = small_config(data={"csv": str(tmp_path / "d.csv")}, targets=["UI"], models=["DT"])
    r = run_protocol(cfg)
    assert r.cv_executions == 5


# reports

def test_markdown_columns_in_order(small_report, tmp_path):
    (path,) = emit_report(small_report, "markdown-table", tmp_path)
    header = path.read_text().splitlines()[2]
    assert header == "| Target | Model | Int. | Int. best | Ext. | Ext. best | All | Best of all |"


def test_json_round_trip_and_schema(small_report, tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    (path,) = emit_report(small_report, "json", tmp_path)
    data = json.loads(path.read_text())
    jsonschema.validate(data, report_schema())
    back = load_report(tmp_path)
    assert {k: (None if v is None else v.mean_f1) for k, v in back.cells.items()} == \
           {k: (None if v is None else v.mean_f1) for k, v in small_report.cells.items()}
    assert dumps_json(back) == path.read_text()


def test_csv_and_human_rounding(small_report, tmp_path):
    files = {p.name: p for p in emit_report(small_report, "csv", tmp_path)}
    rows = files["f1_grid.csv"].read_text().splitlines()
    assert rows[0] == "Target,Model,Int.,Int. best,Ext.,Ext. best,All,Best of all"
    cells = [c for r in rows[1:] for c in r.split(",")[2:] if c]
    assert all(len(c.split(".")[1]) == 2 for c in cells)


def test_empty_report_headers_only(tmp_path):
    empty = run_protocol(small_config(targets=[]))
    assert empty.cells == {} and empty.cv_executions == 0
    files = {p.name: p.read_text() for p in emit_report(empty, "csv", tmp_path)}
    assert all(len(text.splitlines()) == 1 for text in files.values())
    md = emit_report(empty, "markdown-table", tmp_path)[0].read_text()
    assert "| UI |" not in md
    pytest.importorskip("jsonschema").validate(json.loads(dumps_json(empty)), report_schema())


def test_report_dimensions_invariant(small_report):
    assert isinstance(small_report, ExperimentReport)
    assert len(small_report.targets) * len(small_report.models) * len(GROUP_NAMES) == len(small_report.cells)
    assert small_report.models == MODEL_IDS


# command line

def test_cli_run_and_report(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(small_config(targets=["UI"], models=["GaussianNB", "DT"]).model_dump_json(by_alias=True))
    assert main(["run-protocol", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 0
    assert main(["run-protocol", "--config", str(cfg), "--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    assert (tmp_path / "a/report.json").read_bytes() == (tmp_path / "b/report.json").read_bytes()
    assert main(["report", str(tmp_path / "a"), "--format", "csv", "--out", str(tmp_path / "c")]) == 0
    assert (tmp_path / "c/f1_grid.csv").exists()


def test_cli_flag_overrides(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(small_config(targets=["UI"], models=["KNN"]).model_dump_json(by_alias=True))
    out = tmp_path / "o"
    assert main(["run-protocol", "--config", str(cfg), "--seed", "3", "--folds", "4",
                 "--f1-averaging", "macro", "--groups", "data-driven", "--out", str(out)]) == 0
    data = json.loads((out / "report.json").read_text())
    assert data["seed"] == 3 and data["config"]["folds"] == 4
    assert data["averaging"] == {"UI": "macro"}
    assert all(len(c["fold_f1"]) == 4 for c in data["cells"])


def test_cli_generate_cohort(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["generate-cohort", "--n", "25", "--seed", "1", "--out", str(out),
                 "--schema-out", str(tmp_path / "s.json")]) == 0
    assert len(out.read_text().splitlines()) == 26
    assert main(["generate-cohort", "--preset", "planted", "--n", "10", "--out", str(tmp_path / "p.csv")]) == 0


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["verify-paper", "--out", str(tmp_path / "v.txt")]) == 3
    assert "FLAG" in (tmp_path / "v.txt").read_text()
    with pytest.raises(SystemExit) as exc:
        main(["run-protocol", "--format", "xml"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
    assert main(["run-protocol", "--folds", "1"]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("AGE,UI\n30,1\n")
    assert main(["run-protocol", "--csv", str(bad), "--out", str(tmp_path / "x")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["run-protocol", "--seed", "-1"])
    assert exc.value.code == 1


def test_data_error_type():
    assert issubclass(DataError, ValueError)
    assert np.isfinite(PaperFixture().matrix).all()
