"""Statistical labeling rule and rank-based comparison tests.

Decides per dataset whether tuned SVM scores significantly beat the
best default setting (one-sided Wilcoxon signed-rank over paired
(seed, outer fold) BAC scores), and provides the Friedman test with
Nemenyi post-hoc critical distances for comparing many strategies.
"""

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaincc
from scipy.stats import rankdata

__all__ = [
    "ALPHAS",
    "WilcoxonResult",
    "MetaLabel",
    "FriedmanResult",
    "wilcoxon_signed_rank",
    "best_default",
    "label_meta_example",
    "friedman_nemenyi",
    "write_labels",
    "read_labels",
]

ALPHAS = (0.01, 0.05, 0.10)

EXACT_LIMIT = 25

# Two-tailed studentized-range quantiles divided by sqrt(2), indexed by
# the number of compared algorithms k = 2..10.
_NEMENYI_Q = {
    0.05: {2: 1.959964, 3: 2.343701, 4: 2.569032, 5: 2.727774,
           6: 2.849705, 7: 2.948319, 8: 3.030879, 9: 3.101730,
           10: 3.163684},
    0.10: {2: 1.644854, 3: 2.052293, 4: 2.291341, 5: 2.459516,
           6: 2.588521, 7: 2.692732, 8: 2.779884, 9: 2.854606,
           10: 2.919889},
}


@dataclass(frozen=True)
class WilcoxonResult:
    """Outcome of the signed-rank test: W+ statistic, p-value, count of
    nonzero pairs, whether the exact branch ran, and whether the input
    was degenerate (all differences zero)."""

    statistic: float
    p_value: float
    n: int
    exact: bool
    degenerate: bool = False


@dataclass(frozen=True)
class MetaLabel:
    """Per-dataset labeling decision: Tuning iff the one-sided p-value
    against the chosen default fell below alpha."""

    dataset: str
    label: str
    alpha: float
    p_value: float
    chosen_default: str
    paired_n: int
    degenerate: bool = False

    def __post_init__(self):
        if self.label not in ("Tuning", "Defaults"):
            raise ValueError(f"unknown label {self.label!r}")
        if (self.label == "Tuning") != (self.p_value < self.alpha):
            raise ValueError("label inconsistent with p-value and alpha")


@dataclass(frozen=True)
class FriedmanResult:
    reject: bool
    statistic: float
    p_value: float
    avg_ranks: dict
    cd: float
    groups: tuple
    k: int
    n: int


def _doubled_ranks(abs_diffs):
    """Average ranks of |d|, doubled so ties (.5 ranks) become exact
    integers."""
    ranks = rankdata(abs_diffs, method="average")
    doubled = np.rint(ranks * 2).astype(np.int64)
    return doubled


def _exact_tail(doubled_ranks, w_doubled, tail):
    """Exact P(W+ >= w) or P(W+ <= w) by dynamic programming over the
    2^n equiprobable sign assignments, on the doubled-rank scale."""
    total = int(doubled_ranks.sum())
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled_ranks:
        r = int(r)
        for s in range(total, r - 1, -1):
            counts[s] += counts[s - r]
    if tail == "greater":
        favorable = sum(counts[w_doubled:])
    else:
        favorable = sum(counts[: w_doubled + 1])
    return Fraction(favorable, 2 ** len(doubled_ranks))


def _normal_tail(w_plus, doubled_ranks, tail):
    """Tie-corrected normal approximation with continuity correction."""
    n = len(doubled_ranks)
    mu = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    _, tie_counts = np.unique(doubled_ranks, return_counts=True)
    var -= float(np.sum(tie_counts.astype(np.float64) ** 3 - tie_counts)) / 48.0
    sd = math.sqrt(var)
    if tail == "greater":
        z = (w_plus - mu - 0.5) / sd
    else:
        z = (mu - w_plus - 0.5) / sd
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _wilcoxon(diffs, alternative, min_n):
    diffs = np.asarray(diffs, dtype=np.float64)
    nonzero = diffs[diffs != 0.0]
    n = len(nonzero)
    if n == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, n=0,
                              exact=True, degenerate=True)
    if n < min_n:
        raise ValueError(
            f"need at least {min_n} nonzero differences, got {n}"
        )
    doubled = _doubled_ranks(np.abs(nonzero))
    w_doubled = int(doubled[nonzero > 0].sum())
    w_plus = w_doubled / 2.0
    exact = n <= EXACT_LIMIT
    if exact:
        greater = _exact_tail(doubled, w_doubled, "greater")
        if alternative == "greater":
            p = greater
        else:
            less = _exact_tail(doubled, w_doubled, "less")
            p = min(Fraction(1), 2 * min(greater, less))
        p = float(p)
    else:
        if alternative == "greater":
            p = _normal_tail(w_plus, doubled, "greater")
        else:
            p = min(1.0, 2.0 * min(_normal_tail(w_plus, doubled, "greater"),
                                   _normal_tail(w_plus, doubled, "less")))
    return WilcoxonResult(statistic=w_plus, p_value=p, n=n, exact=exact)


def wilcoxon_signed_rank(x, y, alternative="greater") -> WilcoxonResult:
    """Paired signed-rank test of x against y.

    Zero differences are dropped before ranking. With at most 25
    nonzero pairs the p-value is exact (full sign-assignment
    enumeration via convolution); beyond that a tie-corrected normal
    approximation with continuity correction is used. ``greater``
    tests whether x tends to exceed y.

    All-zero differences return p = 1 with the degenerate flag set;
    otherwise at least 3 nonzero pairs are required.
    """
    if alternative not in ("greater", "two_sided"):
        raise ValueError(f"unknown alternative {alternative!r}")
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and the same length")
    return _wilcoxon(x - y, alternative, min_n=3)


def _scores_by_cell(records):
    return {(r.seed, r.outer_fold): r.score for r in records}


def best_default(outcome):
    """Pick the default setting with the highest mean BAC over all
    (seed, outer-fold) cells; ties go to the lexicographically lowest
    default id. Returns (default id, cell -> score mapping)."""
    if not outcome.complete:
        raise ValueError(f"incomplete outcome for dataset {outcome.dataset!r}")
    if not outcome.default_ids:
        raise ValueError("outcome has no default records")
    best_id = None
    best_mean = -np.inf
    best_scores = None
    for did in sorted(outcome.default_ids):
        scores = _scores_by_cell(outcome.default_records_for(did))
        mean = float(np.mean(list(scores.values())))
        if mean > best_mean:
            best_id, best_mean, best_scores = did, mean, scores
    return best_id, best_scores


def label_meta_example(outcome, alpha) -> MetaLabel:
    """Apply the labeling rule: Tuning iff tuned BAC significantly
    exceeds the best default's BAC over paired (seed, outer fold)
    cells, one-sided at ``alpha``."""
    if alpha not in ALPHAS:
        raise ValueError(f"alpha must be one of {ALPHAS}, got {alpha}")
    if not outcome.complete:
        raise ValueError(f"incomplete outcome for dataset {outcome.dataset!r}")
    default_id, default_scores = best_default(outcome)
    tuned_scores = _scores_by_cell(outcome.tuned_records)
    if set(tuned_scores) != set(default_scores):
        raise ValueError("tuned and default records cover different cells")
    cells = sorted(tuned_scores)
    diffs = np.array([tuned_scores[c] - default_scores[c] for c in cells])
    # min_n=1: with 1-2 nonzero pairs the attainable p is >= 1/4, which
    # can never reject, so the rule stays total instead of erroring.
    result = _wilcoxon(diffs, "greater", min_n=1)
    label = "Tuning" if result.p_value < alpha else "Defaults"
    return MetaLabel(
        dataset=outcome.dataset, label=label, alpha=alpha,
        p_value=result.p_value, chosen_default=default_id,
        paired_n=len(cells), degenerate=result.degenerate,
    )


def friedman_nemenyi(scores, alpha=0.05, names=None) -> FriedmanResult:
    """Friedman test plus Nemenyi critical distance.

    ``scores`` has one row per algorithm (k rows) and one column per
    setting (N columns); higher is better, rank 1 is best within each
    column, ties share average ranks. CD = q_alpha * sqrt(k(k+1)/(6N)).
    Groups are the maximal windows of algorithms, ordered by mean rank,
    whose pairwise mean-rank differences stay below CD.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2:
        raise ValueError("scores must be a 2-d matrix")
    k, n = scores.shape
    if k < 3:
        raise ValueError("need at least 3 algorithms")
    if n < 2:
        raise ValueError("need at least 2 settings")
    if alpha not in _NEMENYI_Q:
        raise ValueError(f"alpha must be one of {sorted(_NEMENYI_Q)}")
    if k > max(_NEMENYI_Q[alpha]):
        raise ValueError(f"q table covers at most k={max(_NEMENYI_Q[alpha])}")
    if names is None:
        names = tuple(range(k))
    elif len(names) != k:
        raise ValueError("names length must match the number of algorithms")

    ranks = np.empty_like(scores)
    for j in range(n):
        ranks[:, j] = rankdata(-scores[:, j], method="average")
    mean_ranks = ranks.mean(axis=1)
    chi2 = (12.0 * n / (k * (k + 1))) * (
        float(np.sum(mean_ranks ** 2)) - k * (k + 1) ** 2 / 4.0
    )
    chi2 = max(chi2, 0.0)
    p = float(gammaincc((k - 1) / 2.0, chi2 / 2.0))
    cd = _NEMENYI_Q[alpha][k] * math.sqrt(k * (k + 1) / (6.0 * n))

    order = np.argsort(mean_ranks, kind="stable")
    sorted_ranks = mean_ranks[order]
    windows = []
    for i in range(k):
        j = i
        while j + 1 < k and sorted_ranks[j + 1] - sorted_ranks[i] < cd:
            j += 1
        windows.append((i, j))
    groups = []
    for i, j in windows:
        if any(oi <= i and j <= oj and (oi, oj) != (i, j)
               for oi, oj in windows):
            continue
        group = tuple(names[order[t]] for t in range(i, j + 1))
        if group not in groups:
            groups.append(group)

    return FriedmanResult(
        reject=p < alpha, statistic=chi2, p_value=p,
        avg_ranks={names[i]: float(mean_ranks[i]) for i in range(k)},
        cd=cd, groups=tuple(groups), k=k, n=n,
    )


def write_labels(labels, path, header_lines=()):
    """Write labels as CSV (dataset, alpha, label, p_value,
    chosen_default), preceded by optional comment lines."""
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["dataset", "alpha", "label", "p_value",
                         "chosen_default"])
        for lab in labels:
            writer.writerow([lab.dataset, repr(lab.alpha), lab.label,
                             repr(lab.p_value), lab.chosen_default])


def read_labels(path):
    labels = []
    with open(path, newline="") as fh:
        rows = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(rows)
    header = next(reader)
    expected = ["dataset", "alpha", "label", "p_value", "chosen_default"]
    if header != expected:
        raise ValueError(f"unexpected labels header {header!r}")
    for row in reader:
        dataset, alpha, label, p_value, chosen = row
        labels.append(MetaLabel(
            dataset=dataset, label=label, alpha=float(alpha),
            p_value=float(p_value), chosen_default=chosen,
            paired_n=0,
        ))
    return labels
