"""Acceptance suite.

Each test covers one numbered criterion at its stated tolerance and
prints a single pass/fail line (visible with ``pytest -s`` or in the
captured output). Criteria 8, 9 and 10 share one session-scoped
end-to-end run on the planted synthetic corpus.
"""

import json
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import tunerec.metafeatures as mf
from tunerec.cli import main
from tunerec.evaluation import LeakAudit, auc, bac
from tunerec.labeling import MetaLabel, friedman_nemenyi, wilcoxon_signed_rank
from tunerec.learners import LearnerSpec
from tunerec.learners.svm import BinarySMO
from tunerec.metalevel import (
    assemble,
    read_meta_dataset,
    rf_importance,
    run_meta_cv,
)
from tunerec.tuning import TuningConfig, reference_default, run_base_level

from _helpers import blob_dataset, make_dataset
from _oracles import (
    auc_fraction,
    bac_fraction,
    rbf_kernel,
    svm_dual_oracle,
    wilcoxon_tail_fraction,
)


def _report(criterion: int, ok: bool, detail: str) -> None:
    print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {criterion}: {detail}"


# --------------------------------------------------------------------------
# 1: metric oracles


def test_criterion_1_metric_oracles():
    rng = np.random.default_rng(101)
    mismatches = 0
    t0 = time.perf_counter()
    for _ in range(1000):
        n = int(rng.integers(2, 101))
        n_classes = min(2 + int(rng.integers(0, 3)), n)
        truth = rng.integers(0, n_classes, size=n)
        truth[:n_classes] = np.arange(n_classes)
        predicted = rng.integers(0, n_classes, size=n)
        if bac(truth, predicted) != float(bac_fraction(truth, predicted)):
            mismatches += 1
        y = rng.integers(0, 2, size=n)
        y[0], y[1] = 0, 1
        # A coarse score grid forces tied scores through the half-pair
        # branch.
        scores = rng.integers(0, 5, size=n) / 4.0
        if auc(y, scores) != float(auc_fraction(y, scores)):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    _report(1, mismatches == 0 and elapsed < 10.0,
            f"1000 instances, {mismatches} oracle mismatches (exact"
            f" equality), {elapsed:.1f}s < 10s")


# --------------------------------------------------------------------------
# 2: Wilcoxon exactness


def test_criterion_2_wilcoxon_exactness():
    rng = np.random.default_rng(202)
    worst = 0.0
    for i in range(500):
        n = 3 + i % 10
        while True:
            diffs = rng.integers(-8, 9, size=n) / 4.0
            if np.count_nonzero(diffs) >= 3:
                break
        x = diffs
        y = np.zeros(n)
        greater = wilcoxon_tail_fraction(diffs, "greater")
        res = wilcoxon_signed_rank(x, y, alternative="greater")
        assert res.exact
        worst = max(worst, abs(res.p_value - float(greater)))
        less = wilcoxon_tail_fraction(diffs, "less")
        expected_two = min(Fraction(1), 2 * min(greater, less))
        res_two = wilcoxon_signed_rank(x, y, alternative="two_sided")
        worst = max(worst, abs(res_two.p_value - float(expected_two)))
    all_positive = wilcoxon_signed_rank(
        np.arange(1.0, 7.0), np.zeros(6), alternative="greater")
    exact_64 = all_positive.p_value == 1.0 / 64.0
    _report(2, worst <= 1e-12 and exact_64,
            f"500 samples over n=3..12, worst |dp|={worst:.2e} <= 1e-12,"
            f" n=6 all-positive p={all_positive.p_value} == 1/64")


# --------------------------------------------------------------------------
# 3: SMO against the dual-QP oracle


def test_criterion_3_smo_matches_dual_oracle():
    rng = np.random.default_rng(42)
    worst_dec = 0.0
    worst_gap = 0.0
    worst_drop = 0.0
    t0 = time.perf_counter()
    for _ in range(50):
        n = int(rng.integers(6, 41))
        p = int(rng.integers(1, 5))
        X = rng.normal(size=(n, p))
        y = rng.integers(0, 2, size=n) * 2 - 1
        if len(np.unique(y)) == 1:
            y[0] = -y[0]
        C = float(2.0 ** rng.uniform(-3, 6))
        gamma = float(2.0 ** rng.uniform(-6, 3))
        model = BinarySMO(X, y.astype(np.float64), C, gamma, 1e-8,
                          10_000_000)
        trace = np.asarray(model.objective_trace_)
        if len(trace) > 1:
            worst_drop = max(worst_drop, float(-(np.diff(trace).min())))
        worst_gap = max(worst_gap, model.duality_gap())
        _, _, oracle_dec = svm_dual_oracle(rbf_kernel(X, gamma),
                                           y.astype(np.float64), C)
        err = float(np.max(np.abs(model.decision_function(X) - oracle_dec)))
        worst_dec = max(worst_dec, err)
    elapsed = time.perf_counter() - t0
    ok = (worst_dec < 1e-4 and worst_gap < 1e-3 and worst_drop <= 1e-9
          and elapsed < 60.0)
    _report(3, ok,
            f"50 problems: max decision err {worst_dec:.2e} < 1e-4,"
            f" max gap {worst_gap:.2e} < 1e-3, max objective drop"
            f" {worst_drop:.2e} (non-decreasing), {elapsed:.1f}s < 60s")


# --------------------------------------------------------------------------
# 4: Nemenyi constant


def test_criterion_4_nemenyi_constant():
    rng = np.random.default_rng(404)
    result = friedman_nemenyi(rng.normal(size=(7, 9)), alpha=0.05)
    ok = abs(result.cd - 3.002) <= 0.01
    _report(4, ok, f"k=7, N=9, alpha=0.05 -> CD={result.cd:.4f},"
                   f" |CD - 3.002| = {abs(result.cd - 3.002):.4f} <= 0.01")


# --------------------------------------------------------------------------
# 5: meta-feature schema and extraction speed


def test_criterion_5_schema_and_extraction_speed():
    d_small = blob_dataset(n_per_class=30, n_features=3, seed=5)
    v80 = mf.extract_all(d_small, include_rl=False)
    v90 = mf.extract_all(d_small, include_rl=True)

    def counts(names):
        out = {}
        for name in names:
            out[name.split(".")[0]] = out.get(name.split(".")[0], 0) + 1
        return out

    expected = {"SM": 17, "ST": 7, "IN": 8, "MB": 17, "LM": 8, "DC": 14,
                "CN": 9}
    got80 = counts(v80.names)
    got90 = counts(v90.names)
    schema_ok = (len(v80) == 80 and len(v90) == 90 and got80 == expected
                 and got90 == {**expected, "RL": 10}
                 and v90.names[:80] == v80.names)

    rng = np.random.default_rng(505)
    X = rng.normal(size=(1000, 20))
    y = np.arange(1000) % 2
    big = make_dataset(X, y, name="timing")
    t0 = time.perf_counter()
    vector = mf.extract_all(big, include_rl=True)
    elapsed = time.perf_counter() - t0
    ok = schema_ok and len(vector) == 90 and elapsed < 60.0
    _report(5, ok,
            f"80 names without RL / 90 with, category counts {got80}"
            f" + RL 10, 1000x20 extraction {elapsed:.1f}s < 60s")


# --------------------------------------------------------------------------
# 6: leak-freedom


def _noise_meta_dataset(n, seed, informative_gap=0.0):
    """Meta-dataset of standard-normal vectors with alternating labels."""
    rng = np.random.default_rng(seed)
    names = mf.schema(include_rl=False)
    vectors = []
    labels = []
    for i in range(n):
        cls = "Tuning" if i % 2 == 0 else "Defaults"
        values = dict(zip(names, rng.normal(size=len(names))))
        if informative_gap and cls == "Defaults":
            for name in names[::4]:
                values[name] += informative_gap
        vectors.append(mf.MetaFeatureVector(dataset=f"d{i:03d}",
                                            values=values))
        labels.append(MetaLabel(
            dataset=f"d{i:03d}", label=cls, alpha=0.05,
            p_value=0.01 if cls == "Tuning" else 0.8,
            chosen_default="default", paired_n=30))
    return assemble(vectors, labels, 0.05)


def test_criterion_6_leak_freedom():
    base_audit = LeakAudit()
    d = blob_dataset(n_per_class=25, n_features=2, seed=6)
    run_base_level(d, [reference_default()],
                   TuningConfig(budget=3, outer_k=3, inner_k=2, seeds=(1,)),
                   audit=base_audit)

    meta_audit = LeakAudit()
    md = _noise_meta_dataset(16, seed=606, informative_gap=3.0)
    run_meta_cv(md, LearnerSpec("knn", {"k": 3}), setup="smote+featsel",
                repetitions=1, seed=0, folds=2, audit=meta_audit)

    ok = (base_audit.violations == 0 and base_audit.events > 0
          and meta_audit.violations == 0 and meta_audit.events > 0)
    detail = (f"base level {base_audit.events} checks"
              f" / {base_audit.violations} violations;"
              f" meta level (smote+featsel) {meta_audit.events} checks"
              f" / {meta_audit.violations} violations")
    if base_audit.messages or meta_audit.messages:
        detail += f"; messages={base_audit.messages + meta_audit.messages}"
    _report(6, ok, detail)


# --------------------------------------------------------------------------
# 7: baseline anchors


def test_criterion_7_baseline_anchors():
    md = _noise_meta_dataset(200, seed=707)
    means = {}
    for kind in ("constant", "random"):
        result = run_meta_cv(md, LearnerSpec(kind), setup="none",
                             repetitions=30, seed=7, folds=10)
        means[kind] = result.mean_auc
    ok = all(abs(v - 0.5) <= 0.02 for v in means.values())
    _report(7, ok,
            f"30 repetitions on 200 examples: constant AUC"
            f" {means['constant']:.4f}, random AUC {means['random']:.4f},"
            f" both within 0.5 +- 0.02")


# --------------------------------------------------------------------------
# 8/9/10: planted-corpus end-to-end run (shared fixture)

_CORPUS_CONFIG = """
[data]
dataset_dir = datasets

[tuning]
budget = 50
outer_k = 10
inner_k = 3
seeds = 1-3

[labeling]
alphas = 0.05

[meta]
learners = random_forest
setups = none
repetitions = 30
seed = 1
folds = 10
include_rl = true

[output]
dir = out
"""


@pytest.fixture(scope="session")
def corpus_run(tmp_path_factory):
    """synth(32) -> ingest -> tune -> extract -> label -> assemble ->
    meta-eval, timed end to end."""
    root = tmp_path_factory.mktemp("planted_corpus")
    cfg = str(root / "run.ini")
    (root / "run.ini").write_text(_CORPUS_CONFIG)
    t0 = time.perf_counter()
    for argv in (
        ["synth", "--config", cfg, "--n", "32"],
        ["ingest", "--config", cfg],
        ["tune", "--config", cfg],
        ["extract", "--config", cfg],
        ["label", "--config", cfg],
        ["assemble", "--config", cfg],
        ["meta-eval", "--config", cfg],
    ):
        code = main(argv)
        assert code == 0, f"{argv[0]} exited with {code}"
    elapsed = time.perf_counter() - t0
    return {"root": root, "cfg": cfg, "out": root / "out",
            "elapsed": elapsed}


def _csv_rows(path):
    return [line.split(",")
            for line in Path(path).read_text().splitlines()
            if not line.startswith("#")][1:]


def test_criterion_8_end_to_end_planted_corpus(corpus_run):
    out = corpus_run["out"]
    expected = json.loads(
        (corpus_run["root"] / "datasets" / "expected_labels.json")
        .read_text())
    assert len(expected) == 32
    rows = _csv_rows(out / "meta_eval.csv")
    aucs = [float(r[4]) for r in rows
            if r[1] == "random_forest" and r[2] == "none"]
    mean_auc = float(np.mean(aucs))
    elapsed = corpus_run["elapsed"]
    ok = len(aucs) == 30 and mean_auc >= 0.75 and elapsed < 1800.0
    _report(8, ok,
            f"32 planted datasets, budget 50, seeds 1-3, folds 10/3:"
            f" RF/none mean AUC {mean_auc:.3f} >= 0.75 over"
            f" {len(aucs)} repetitions; chain took {elapsed:.0f}s"
            f" < 1800s on one core")


def test_criterion_9_relative_landmarker_importance(corpus_run):
    md = read_meta_dataset(corpus_run["out"] / "meta_0.05.csv")
    assert len(md.schema) == 90
    report = rf_importance(md, repetitions=30, seed=1)
    targets = {"RL.diff.svm.lm", "RL.diff.nn.lm"}
    hits = 0
    for rep in range(30):
        order = np.argsort(-report.per_repetition[rep], kind="stable")
        top5 = {md.schema[j] for j in order[:5]}
        hits += bool(top5 & targets)
    ok = hits >= 24
    _report(9, ok,
            f"RL.diff.svm.lm or RL.diff.nn.lm in per-repetition top-5"
            f" in {hits}/30 repetitions (>= 24 is 80%); overall top-5:"
            f" {', '.join(report.top(5))}")


def test_criterion_10_projection_dominance(corpus_run):
    cfg = corpus_run["cfg"]
    out = corpus_run["out"]
    assert main(["project", "--config", cfg, "--repetitions", "30"]) == 0
    means = {}
    for line in (out / "projection.csv").read_text().splitlines():
        if ",<mean>," in line:
            parts = line.split(",")
            means[parts[0]] = (float(parts[2]), float(parts[3]))
    oracle_bac = means["Oracle"][0]
    dominance = all(oracle_bac >= bac_ - 1e-12
                    for bac_, _ in means.values())
    rf_bac, rf_rt = means["meta:random_forest"]
    tuning_rt = means["Tuning"][1]
    defaults_bac = means["Defaults"][0]
    ratio = rf_rt / tuning_rt
    ok = dominance and ratio <= 0.7 and rf_bac >= defaults_bac
    _report(10, ok,
            f"oracle BAC {oracle_bac:.4f} >= all strategies"
            f" ({dominance}); RF meta runtime {rf_rt:.1f}s ="
            f" {ratio:.2f}x Tuning ({tuning_rt:.1f}s) <= 0.7x with BAC"
            f" {rf_bac:.4f} >= Defaults {defaults_bac:.4f}")


# --------------------------------------------------------------------------
# 11: determinism

_MICRO_CONFIG = """
[data]
dataset_dir = datasets

[tuning]
budget = 8
outer_k = 2
inner_k = 2
seeds = 1-3

[labeling]
alphas = 0.05

[meta]
include_rl = true

[output]
dir = out
"""


def test_criterion_11_determinism(tmp_path):
    artifacts = []
    for run in ("one", "two"):
        sub = tmp_path / run
        sub.mkdir()
        cfg = str(sub / "run.ini")
        (sub / "run.ini").write_text(_MICRO_CONFIG)
        for argv in (
            ["synth", "--config", cfg, "--n", "8"],
            ["ingest", "--config", cfg],
            ["tune", "--config", cfg],
            ["extract", "--config", cfg],
            ["label", "--config", cfg],
            ["assemble", "--config", cfg],
        ):
            assert main(argv) == 0, f"{argv[0]} failed in run {run}"
        artifacts.append((
            (sub / "out" / "labels.csv").read_bytes(),
            (sub / "out" / "meta_0.05.csv").read_bytes(),
        ))
    labels_same = artifacts[0][0] == artifacts[1][0]
    meta_same = artifacts[0][1] == artifacts[1][1]
    _report(11, labels_same and meta_same,
            f"two pipeline runs, identical config: labels.csv"
            f" byte-identical={labels_same}, meta_0.05.csv"
            f" byte-identical={meta_same}")
