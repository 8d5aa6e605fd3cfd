"""Projection tests: mapping per-dataset decisions back to recorded
base-level BAC and runtime."""

import numpy as np
import pytest

from tunerec.projection import (
    FIXED_STRATEGIES,
    CurveRow,
    ProjectionReport,
    defaults_comparison_curves,
    project,
    write_curves_chart,
    write_curves_csv,
    write_projection_csv,
    write_projection_scatter,
)
from tunerec.records import EvaluationRecord
from tunerec.tuning import TuningOutcome


def _outcome(tuned, defaults_by_id, dataset="d", tuned_rt=10.0,
             default_rt=0.01, complete=True, seeds=(1,)):
    """TuningOutcome from per-cell score lists with fixed runtimes."""
    outer_k = len(tuned) // len(seeds)
    cells = [(s, f) for s in seeds for f in range(outer_k)]
    tuned_records = [
        EvaluationRecord(dataset, "tuned", s, f, float(v), tuned_rt)
        for (s, f), v in zip(cells, tuned)
    ]
    default_records = []
    for did, scores in defaults_by_id.items():
        default_records.extend(
            EvaluationRecord(dataset, f"default:{did}", s, f, float(v),
                             default_rt)
            for (s, f), v in zip(cells, scores)
        )
    return TuningOutcome(
        dataset=dataset, tuned_records=tuned_records,
        default_records=default_records, budget=1, seeds=tuple(seeds),
        outer_k=outer_k, inner_k=2, total_evaluations=0, complete=complete,
        default_ids=tuple(defaults_by_id),
    )


def _corpus():
    """Three datasets: tuning wins on d0, the defaults win on d1 and
    d2, and the best default differs between a and b."""
    return {
        "d0": _outcome([0.9] * 4, {"a": [0.5] * 4, "b": [0.55] * 4},
                       dataset="d0"),
        "d1": _outcome([0.6] * 4, {"a": [0.8] * 4, "b": [0.7] * 4},
                       dataset="d1"),
        "d2": _outcome([0.6] * 4, {"a": [0.65] * 4, "b": [0.75] * 4},
                       dataset="d2"),
    }


# --------------------------------------------------------------------------
# fixed strategies


def test_fixed_strategies_always_present():
    report = project({}, _corpus())
    assert set(report.strategies) == set(FIXED_STRATEGIES)
    assert isinstance(report, ProjectionReport)
    assert report["Tuning"].mean_bac == pytest.approx((0.9 + 0.6 + 0.6) / 3)
    for e in report["Tuning"].per_dataset.values():
        assert e.branch == "tuned"
        assert e.runtime == pytest.approx(10.0)


def test_uniform_default_is_best_overall_mean():
    report = project({}, _corpus())
    # Overall means: a = (0.5 + 0.8 + 0.65) / 3, b = (0.55 + 0.7 + 0.75) / 3;
    # b wins and is applied everywhere.
    uniform = report["Defaults"]
    assert all(e.branch == "default:b" for e in uniform.per_dataset.values())
    assert uniform.mean_bac == pytest.approx((0.55 + 0.7 + 0.75) / 3)


def test_per_dataset_default_picks_each_best():
    report = project({}, _corpus())
    per = report["Defaults.per.dataset"]
    assert per.per_dataset["d0"].branch == "default:b"
    assert per.per_dataset["d1"].branch == "default:a"
    assert per.per_dataset["d2"].branch == "default:b"
    assert per.mean_bac >= report["Defaults"].mean_bac


def test_uniform_default_breaks_ties_to_lowest_id():
    outcomes = {
        "d0": _outcome([0.9] * 4, {"b": [0.5] * 4, "a": [0.5] * 4},
                       dataset="d0"),
        "d1": _outcome([0.4] * 4, {"b": [0.6] * 4, "a": [0.6] * 4},
                       dataset="d1"),
    }
    report = project({}, outcomes)
    assert all(e.branch == "default:a"
               for e in report["Defaults"].per_dataset.values())


def test_oracle_dominates_every_strategy():
    outcomes = _corpus()
    report = project({"m": {n: "Tuning" for n in outcomes}}, outcomes)
    oracle = report["Oracle"]
    assert oracle.per_dataset["d0"].branch == "tuned"
    assert oracle.per_dataset["d1"].branch == "default:a"
    assert oracle.per_dataset["d2"].branch == "default:b"
    for name, result in report.strategies.items():
        assert oracle.mean_bac >= result.mean_bac - 1e-12, name


def test_random_strategy_is_seeded_and_valid():
    outcomes = _corpus()
    r1 = project({}, outcomes, random_seed=3)
    r2 = project({}, outcomes, random_seed=3)
    branches1 = {n: e.branch for n, e in r1["Random"].per_dataset.items()}
    branches2 = {n: e.branch for n, e in r2["Random"].per_dataset.items()}
    assert branches1 == branches2
    allowed = {
        "d0": {"tuned", "default:b"},
        "d1": {"tuned", "default:a"},
        "d2": {"tuned", "default:b"},
    }
    for name, branch in branches1.items():
        assert branch in allowed[name]
    # Over many seeds both branches appear.
    seen = {project({}, outcomes, random_seed=s)["Random"]
            .per_dataset["d0"].branch for s in range(12)}
    assert seen == {"tuned", "default:b"}


# --------------------------------------------------------------------------
# meta strategies


def test_all_tuning_predictions_match_tuning_baseline():
    outcomes = _corpus()
    preds = {"always": {n: "Tuning" for n in outcomes}}
    report = project(preds, outcomes)
    meta = report["meta:always"]
    base = report["Tuning"]
    assert meta.mean_bac == pytest.approx(base.mean_bac)
    assert meta.mean_runtime == pytest.approx(base.mean_runtime)


def test_meta_defaults_use_the_per_dataset_best():
    outcomes = _corpus()
    preds = {"never": {n: "Defaults" for n in outcomes}}
    report = project(preds, outcomes)
    meta = report["meta:never"]
    assert meta.per_dataset["d1"].branch == "default:a"
    assert meta.mean_bac == pytest.approx(
        report["Defaults.per.dataset"].mean_bac)


def test_extraction_time_counts_against_meta_strategies_only():
    outcomes = _corpus()
    times = {"d0": 2.0, "d1": 3.0, "d2": 4.0}
    preds = {"m": {"d0": "Tuning", "d1": "Defaults", "d2": "Defaults"}}
    report = project(preds, outcomes, extraction_times=times)
    meta = report["meta:m"]
    assert meta.per_dataset["d0"].runtime == pytest.approx(10.0 + 2.0)
    assert meta.per_dataset["d1"].runtime == pytest.approx(0.01 + 3.0)
    assert meta.per_dataset["d0"].extraction == 2.0
    assert report["Tuning"].per_dataset["d0"].runtime == pytest.approx(10.0)
    assert report["Oracle"].per_dataset["d1"].extraction == 0.0


def test_flat_prediction_map_becomes_model_strategy():
    outcomes = _corpus()
    report = project({n: "Tuning" for n in outcomes}, outcomes)
    assert "meta:model" in report.strategies


def test_project_validation():
    outcomes = _corpus()
    with pytest.raises(ValueError, match="without outcomes"):
        project({"m": {"ghost": "Tuning"}}, outcomes)
    with pytest.raises(ValueError, match="unknown predicted labels"):
        project({"m": {"d0": "Maybe"}}, outcomes)
    broken = dict(outcomes)
    broken["d1"] = _outcome([0.6] * 4, {"a": [0.8] * 4, "b": [0.7] * 4},
                            dataset="d1", complete=False)
    with pytest.raises(ValueError, match="incomplete"):
        project({}, broken)


# --------------------------------------------------------------------------
# defaults comparison curves


def test_curves_sorted_by_reference_and_bounded_below():
    outcomes = {
        "hi": _outcome([0.7] * 4, {"default": [0.9] * 4, "x": [0.6] * 4},
                       dataset="hi"),
        "lo": _outcome([0.8] * 4, {"default": [0.4] * 4, "x": [0.7] * 4},
                       dataset="lo"),
        "mid": _outcome([0.5] * 4, {"default": [0.6] * 4, "x": [0.5] * 4},
                        dataset="mid"),
    }
    rows = defaults_comparison_curves(outcomes)
    assert [r.dataset for r in rows] == ["hi", "mid", "lo"]
    for r in rows:
        assert isinstance(r, CurveRow)
        assert r.multiple_defaults_bac >= r.reference_bac - 1e-12
    assert rows[2].multiple_defaults_bac == pytest.approx(0.7)
    assert rows[0].tuned_bac == pytest.approx(0.7)


def test_curves_tie_breaks_by_name():
    outcomes = [
        _outcome([0.5] * 4, {"default": [0.6] * 4}, dataset="zz"),
        _outcome([0.5] * 4, {"default": [0.6] * 4}, dataset="aa"),
    ]
    rows = defaults_comparison_curves(outcomes)
    assert [r.dataset for r in rows] == ["aa", "zz"]


def test_curves_validation():
    with pytest.raises(ValueError, match="no outcomes"):
        defaults_comparison_curves([])
    missing_ref = _outcome([0.5] * 4, {"other": [0.6] * 4}, dataset="d")
    with pytest.raises(ValueError, match="reference default"):
        defaults_comparison_curves([missing_ref])
    incomplete = _outcome([0.5] * 4, {"default": [0.6] * 4}, dataset="d",
                          complete=False)
    with pytest.raises(ValueError, match="incomplete"):
        defaults_comparison_curves([incomplete])


# --------------------------------------------------------------------------
# writers


def test_projection_csv_layout(tmp_path):
    report = project({}, _corpus())
    path = tmp_path / "projection.csv"
    write_projection_csv(report, path, header_lines=("ctx",))
    lines = path.read_text().splitlines()
    assert lines[0] == "# ctx"
    assert lines[1].split(",") == ["strategy", "dataset", "bac", "runtime",
                                   "extraction", "branch"]
    mean_rows = [l for l in lines if ",<mean>," in l]
    assert len(mean_rows) == len(FIXED_STRATEGIES)
    oracle_mean = next(l for l in mean_rows if l.startswith("Oracle"))
    assert float(oracle_mean.split(",")[2]) == pytest.approx(
        report["Oracle"].mean_bac)


def test_curves_csv_layout(tmp_path):
    rows = defaults_comparison_curves(
        [_outcome([0.5] * 4, {"default": [0.6] * 4}, dataset="d")])
    path = tmp_path / "curves.csv"
    write_curves_csv(rows, path, header_lines=("ctx",))
    lines = path.read_text().splitlines()
    assert lines[0] == "# ctx"
    assert lines[1] == ("dataset,reference_default_bac,"
                        "multiple_defaults_bac,tuned_bac")
    assert lines[2].split(",")[0] == "d"
    assert float(lines[2].split(",")[3]) == pytest.approx(0.5)


def test_charts_are_deterministic_svg(tmp_path):
    report = project({}, _corpus())
    rows = defaults_comparison_curves(
        list(_corpus().values()), reference_default="a")
    s1 = tmp_path / "s1.svg"
    s2 = tmp_path / "s2.svg"
    write_projection_scatter(report, s1)
    write_projection_scatter(report, s2)
    assert s1.read_bytes() == s2.read_bytes()
    assert s1.read_text().lstrip().startswith("<?xml")
    c1 = tmp_path / "c1.svg"
    c2 = tmp_path / "c2.svg"
    write_curves_chart(rows, c1)
    write_curves_chart(rows, c2)
    assert c1.read_bytes() == c2.read_bytes()
    assert c1.stat().st_size > 1000
