import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _oracles import wilcoxon_tail_fraction
from tunerec.labeling import (
    ALPHAS,
    MetaLabel,
    best_default,
    friedman_nemenyi,
    label_meta_example,
    read_labels,
    wilcoxon_signed_rank,
    write_labels,
)
from tunerec.records import EvaluationRecord
from tunerec.tuning import TuningOutcome


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank

def test_all_positive_n6_is_one_over_64():
    x = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    res = wilcoxon_signed_rank(x, np.zeros(6))
    assert res.exact
    assert res.p_value == 1.0 / 64.0
    assert res.statistic == 21.0
    assert res.n == 6


def test_zero_differences_are_dropped():
    x = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 7.0])
    y = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 7.0, 7.0])
    res = wilcoxon_signed_rank(x, y)
    assert res.n == 6
    assert res.p_value == 1.0 / 64.0


def test_all_zero_is_degenerate():
    res = wilcoxon_signed_rank(np.ones(8), np.ones(8))
    assert res.degenerate
    assert res.p_value == 1.0
    assert res.n == 0


def test_too_few_nonzero_pairs_raise():
    with pytest.raises(ValueError, match="at least 3"):
        wilcoxon_signed_rank(np.array([1.0, 1.0, 2.0]),
                             np.array([1.0, 1.0, 1.0]))


def test_shape_and_alternative_validation():
    with pytest.raises(ValueError, match="alternative"):
        wilcoxon_signed_rank([1.0, 2.0, 3.0], [0.0, 0.0, 0.0],
                             alternative="less")
    with pytest.raises(ValueError, match="1-d"):
        wilcoxon_signed_rank([[1.0]], [[0.0]])
    with pytest.raises(ValueError, match="1-d"):
        wilcoxon_signed_rank([1.0, 2.0], [0.0])


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_exact_branch_matches_enumeration(data):
    n = data.draw(st.integers(3, 12))
    # quarter-step grid forces tied absolute ranks and zero diffs
    diffs = data.draw(st.lists(
        st.sampled_from([-1.5, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5]),
        min_size=n, max_size=n))
    nonzero = [d for d in diffs if d != 0.0]
    if len(nonzero) < 3:
        diffs = diffs + [0.75, 1.25, -0.75]
    res = wilcoxon_signed_rank(np.array(diffs), np.zeros(len(diffs)))
    assert res.exact
    expected = wilcoxon_tail_fraction(diffs, "greater")
    assert abs(res.p_value - float(expected)) <= 1e-12


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_two_sided_matches_enumeration(data):
    n = data.draw(st.integers(3, 10))
    diffs = data.draw(st.lists(
        st.sampled_from([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]),
        min_size=n, max_size=n))
    res = wilcoxon_signed_rank(np.array(diffs), np.zeros(n),
                               alternative="two_sided")
    greater = wilcoxon_tail_fraction(diffs, "greater")
    less = wilcoxon_tail_fraction(diffs, "less")
    expected = min(1, 2 * min(greater, less))
    assert abs(res.p_value - float(expected)) <= 1e-12


def test_large_n_uses_corrected_normal_branch():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(3)
    x = rng.normal(0.2, 1.0, size=40)
    x[x == 0] = 0.1
    res = wilcoxon_signed_rank(x, np.zeros(40))
    assert not res.exact
    ref = scipy_stats.wilcoxon(x, alternative="greater", correction=True,
                               method="approx")
    assert res.statistic == ref.statistic
    assert np.isclose(res.p_value, ref.pvalue, rtol=1e-10)


# ---------------------------------------------------------------------------
# the labeling rule over tuning outcomes

def _outcome(tuned, defaults_by_id, dataset="d", seeds=(1,), outer_k=None):
    """Build a TuningOutcome from per-cell score arrays."""
    outer_k = outer_k if outer_k is not None else len(tuned) // len(seeds)
    cells = [(s, f) for s in seeds for f in range(outer_k)]
    tuned_records = [
        EvaluationRecord(dataset, "tuned", s, f, float(v), 0.1)
        for (s, f), v in zip(cells, tuned)
    ]
    default_records = []
    for did, scores in defaults_by_id.items():
        default_records.extend(
            EvaluationRecord(dataset, f"default:{did}", s, f, float(v), 0.1)
            for (s, f), v in zip(cells, scores)
        )
    return TuningOutcome(
        dataset=dataset, tuned_records=tuned_records,
        default_records=default_records, budget=1, seeds=tuple(seeds),
        outer_k=outer_k, inner_k=2, total_evaluations=0, complete=True,
        default_ids=tuple(defaults_by_id),
    )


def test_label_tuning_when_tuned_always_wins():
    tuned = [0.9, 0.92, 0.91, 0.95, 0.9, 0.93]
    default = [0.5, 0.52, 0.51, 0.55, 0.5, 0.53]
    lab = label_meta_example(_outcome(tuned, {"default": default}), 0.05)
    assert lab.label == "Tuning"
    assert lab.p_value == 1.0 / 64.0
    assert lab.chosen_default == "default"
    assert lab.paired_n == 6


def test_label_defaults_when_no_signal():
    tuned = [0.9, 0.5, 0.9, 0.5, 0.9, 0.5]
    default = [0.5, 0.9, 0.5, 0.9, 0.5, 0.9]
    lab = label_meta_example(_outcome(tuned, {"default": default}), 0.05)
    assert lab.label == "Defaults"
    assert lab.p_value >= 0.05


def test_label_degenerate_equal_scores_is_defaults():
    scores = [0.8] * 6
    lab = label_meta_example(_outcome(scores, {"default": scores}), 0.05)
    assert lab.label == "Defaults"
    assert lab.degenerate
    assert lab.p_value == 1.0


def test_label_compares_against_best_default():
    tuned = [0.9, 0.92, 0.91, 0.95, 0.9, 0.93]
    weak = [0.5] * 6
    strong = list(tuned)  # matches tuned exactly -> degenerate, p=1
    lab = label_meta_example(
        _outcome(tuned, {"weak": weak, "strong": strong}), 0.05)
    assert lab.chosen_default == "strong"
    assert lab.label == "Defaults"


def test_best_default_tie_breaks_lexicographically():
    scores = [0.7, 0.8, 0.9, 0.7, 0.8, 0.9]
    out = _outcome(scores, {"b": scores, "a": list(reversed(scores))})
    chosen, _ = best_default(out)
    assert chosen == "a"


def test_label_rejects_bad_alpha_and_incomplete_outcome():
    out = _outcome([0.9] * 6, {"default": [0.5] * 6})
    with pytest.raises(ValueError, match="alpha"):
        label_meta_example(out, 0.2)
    incomplete = _outcome([0.9] * 6, {"default": [0.5] * 6})
    incomplete.complete = False
    with pytest.raises(ValueError, match="incomplete"):
        label_meta_example(incomplete, 0.05)
    assert 0.2 not in ALPHAS


def test_label_rejects_mismatched_cells():
    out = _outcome([0.9] * 6, {"default": [0.5] * 6})
    out.tuned_records = out.tuned_records[:-1]
    with pytest.raises(ValueError, match="different cells"):
        label_meta_example(out, 0.05)


def test_label_consistency_is_enforced_by_the_dataclass():
    with pytest.raises(ValueError, match="inconsistent"):
        MetaLabel(dataset="d", label="Tuning", alpha=0.05, p_value=0.5,
                  chosen_default="default", paired_n=6)
    with pytest.raises(ValueError, match="unknown label"):
        MetaLabel(dataset="d", label="Maybe", alpha=0.05, p_value=0.5,
                  chosen_default="default", paired_n=6)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_label_matches_p_threshold(data):
    n = 8
    tuned = data.draw(st.lists(
        st.sampled_from([0.5, 0.6, 0.7, 0.8, 0.9]), min_size=n, max_size=n))
    default = data.draw(st.lists(
        st.sampled_from([0.5, 0.6, 0.7, 0.8, 0.9]), min_size=n, max_size=n))
    alpha = data.draw(st.sampled_from(ALPHAS))
    lab = label_meta_example(
        _outcome(tuned, {"default": default}, seeds=(1, 2), outer_k=4), alpha)
    assert (lab.label == "Tuning") == (lab.p_value < alpha)


# ---------------------------------------------------------------------------
# Friedman / Nemenyi

def test_nemenyi_cd_constant_for_seven_by_nine():
    scores = np.arange(63, dtype=float).reshape(7, 9)
    res = friedman_nemenyi(scores, alpha=0.05)
    assert abs(res.cd - 3.002) < 0.01


def test_friedman_hand_computed_example():
    scores = np.array([[3.0, 3.0], [2.0, 2.0], [1.0, 1.0]])
    res = friedman_nemenyi(scores, alpha=0.05, names=("a", "b", "c"))
    assert res.avg_ranks == {"a": 1.0, "b": 2.0, "c": 3.0}
    assert np.isclose(res.statistic, 4.0)
    assert np.isclose(res.p_value, np.exp(-2.0))
    assert not res.reject
    # CD = 2.3437 > max rank spread, so everything stays in one group
    assert res.groups == (("a", "b", "c"),)


def test_friedman_rejects_with_strong_separation():
    n = 20
    scores = np.vstack([np.full(n, 3.0), np.full(n, 2.0), np.full(n, 1.0)])
    res = friedman_nemenyi(scores, alpha=0.05, names=("top", "mid", "low"))
    assert res.reject
    assert res.p_value < 0.05
    # CD = 2.3437*sqrt(12/120) = 0.741; adjacent gaps are exactly 1
    assert res.groups == (("top",), ("mid",), ("low",))


def test_friedman_ties_share_average_ranks():
    scores = np.array([[1.0, 1.0], [1.0, 1.0], [0.0, 0.0]])
    res = friedman_nemenyi(scores, names=("a", "b", "c"))
    assert res.avg_ranks["a"] == 1.5
    assert res.avg_ranks["b"] == 1.5
    assert res.avg_ranks["c"] == 3.0


def test_friedman_validation_errors():
    ok = np.zeros((3, 2))
    with pytest.raises(ValueError, match="2-d"):
        friedman_nemenyi(np.zeros(3))
    with pytest.raises(ValueError, match="at least 3"):
        friedman_nemenyi(np.zeros((2, 5)))
    with pytest.raises(ValueError, match="at least 2"):
        friedman_nemenyi(np.zeros((3, 1)))
    with pytest.raises(ValueError, match="alpha"):
        friedman_nemenyi(ok, alpha=0.01)
    with pytest.raises(ValueError, match="q table"):
        friedman_nemenyi(np.zeros((11, 5)))
    with pytest.raises(ValueError, match="names length"):
        friedman_nemenyi(ok, names=("a",))


# ---------------------------------------------------------------------------
# label CSV round trip

def test_labels_csv_round_trip(tmp_path):
    labels = [
        MetaLabel("d1", "Tuning", 0.05, 1.0 / 64.0, "default", 6),
        MetaLabel("d2", "Defaults", 0.05, 0.8125, "default2", 6),
    ]
    path = tmp_path / "labels.csv"
    write_labels(labels, path, header_lines=("tunerec test",))
    text = path.read_text()
    assert text.startswith("# tunerec test\n")
    back = read_labels(path)
    assert [(l.dataset, l.label, l.alpha, l.p_value, l.chosen_default)
            for l in back] == [
        ("d1", "Tuning", 0.05, 1.0 / 64.0, "default"),
        ("d2", "Defaults", 0.05, 0.8125, "default2"),
    ]


def test_read_labels_rejects_unknown_header(tmp_path):
    path = tmp_path / "labels.csv"
    path.write_text("dataset,alpha,label\nd,0.05,Tuning\n")
    with pytest.raises(ValueError, match="header"):
        read_labels(path)
