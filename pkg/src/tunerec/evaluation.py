"""Resampling and performance metrics shared by the base and meta levels.

BAC and AUC are computed with integer counts reduced through
:class:`fractions.Fraction`, so the returned float is the correctly
rounded value of the exact rational result.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng as _rng

__all__ = [
    "FoldAssignment",
    "stratified_kfold",
    "bac",
    "auc",
    "accuracy",
    "cross_validate",
    "CVResult",
    "LeakAudit",
]


@dataclass(frozen=True)
class FoldAssignment:
    """A stratified fold assignment.

    Parameters
    ----------
    k : int
        Number of folds.
    fold_of : ndarray of shape (n,)
        Fold index per instance, each in ``[0, k)``.
    seed : int
        Seed the assignment was derived from.
    """

    k: int
    fold_of: np.ndarray
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)


def _labels_of(d):
    return d.labels if hasattr(d, "labels") else np.asarray(d)


def stratified_kfold(d, k: int, seed: int) -> FoldAssignment:
    """Assign instances to k folds, stratified by class.

    Per class, indices are shuffled with a seed-derived stream and dealt
    round-robin, so per-class fold counts differ by at most one.

    Raises
    ------
    ValueError
        If any class has fewer than k instances.
    """
    labels = _labels_of(d)
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    fold_of = np.empty(len(labels), dtype=np.int64)
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if len(idx) < k:
            raise ValueError(
                f"class {c} has {len(idx)} instances, fewer than k={k}"
            )
        stream = _rng.stream("stratified-kfold", seed, int(c))
        stream.shuffle(idx)
        fold_of[idx] = np.arange(len(idx)) % k
    return FoldAssignment(k=k, fold_of=fold_of, seed=seed)


def bac(truth, predicted) -> float:
    """Balanced per-class accuracy: the mean of per-class recalls."""
    truth = np.asarray(truth)
    predicted = np.asarray(predicted)
    if truth.shape != predicted.shape:
        raise ValueError("truth and predicted have different lengths")
    classes = np.unique(truth)
    total = Fraction(0)
    for c in classes:
        mask = truth == c
        total += Fraction(
            int(np.count_nonzero(predicted[mask] == c)),
            int(np.count_nonzero(mask)),
        )
    return float(total / len(classes))


def auc(truth, scores) -> float:
    """Area under the ROC curve in Mann-Whitney form.

    ``truth`` holds binary labels with 1 (or True) as the positive
    class; ``scores`` rank instances by positive-class confidence. Ties
    count half.
    """
    truth = np.asarray(truth).astype(bool)
    scores = np.asarray(scores, dtype=float)
    if truth.shape != scores.shape:
        raise ValueError("truth and scores have different lengths")
    n_pos = int(np.count_nonzero(truth))
    n_neg = len(truth) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("both classes must be present to compute AUC")
    order = np.argsort(scores, kind="stable")
    s = scores[order]
    t = truth[order]
    # 2*wins + ties, accumulated per tie group in ascending score order
    doubled = 0
    neg_below = 0
    start = 0
    for stop in range(1, len(s) + 1):
        if stop == len(s) or s[stop] != s[start]:
            pos_here = int(np.count_nonzero(t[start:stop]))
            neg_here = (stop - start) - pos_here
            doubled += pos_here * (2 * neg_below + neg_here)
            neg_below += neg_here
            start = stop
    return float(Fraction(doubled, 2 * n_pos * n_neg))


def accuracy(truth, predicted) -> float:
    """Plain accuracy, exact like the other metrics."""
    truth = np.asarray(truth)
    predicted = np.asarray(predicted)
    if truth.shape != predicted.shape:
        raise ValueError("truth and predicted have different lengths")
    return float(Fraction(int(np.count_nonzero(truth == predicted)), len(truth)))


@dataclass
class CVResult:
    """Per-fold scores plus pooled out-of-fold predictions."""

    fold_scores: list
    pooled_classes: np.ndarray
    pooled_scores: np.ndarray
    folds: FoldAssignment


def cross_validate(spec, d, folds: FoldAssignment, metric: str = "bac",
                   audit: "LeakAudit | None" = None) -> CVResult:
    """Train one model per fold on the complement and score it on the
    fold; also return pooled out-of-fold predictions.

    ``metric`` is ``bac``, ``auc`` (binary, positive class = index 1,
    scored from the class-1 column) or ``accuracy``.
    """
    from .learners import make_learner

    n = d.n_instances
    pooled_classes = np.empty(n, dtype=np.int64)
    pooled_scores = np.empty((n, d.n_classes), dtype=float)
    fold_scores = []
    for f in range(folds.k):
        tr = folds.train_indices(f)
        te = folds.test_indices(f)
        if audit is not None:
            audit.check_split(n, tr, te)
        model = make_learner(spec, seed=_rng.derive_seed("cv", d.name, folds.seed, f))
        try:
            model.fit(d.features[tr], d.labels[tr], n_classes=d.n_classes)
            scores = model.predict_scores(d.features[te])
        except Exception as exc:
            raise RuntimeError(f"fold {f}: {exc}") from exc
        classes = np.argmax(scores, axis=1)
        pooled_classes[te] = classes
        pooled_scores[te] = scores
        if metric == "bac":
            fold_scores.append(bac(d.labels[te], classes))
        elif metric == "accuracy":
            fold_scores.append(accuracy(d.labels[te], classes))
        elif metric == "auc":
            fold_scores.append(auc(d.labels[te] == 1, scores[:, 1]))
        else:
            raise ValueError(f"unknown metric {metric!r}")
    return CVResult(fold_scores, pooled_classes, pooled_scores, folds)


class LeakAudit:
    """Collects index-set assertions from instrumented runs.

    Each check records one event; any failed check increments
    ``violations`` with a message in ``messages``. A clean run keeps
    ``violations == 0``.
    """

    def __init__(self):
        self.events = 0
        self.violations = 0
        self.messages = []

    def _fail(self, msg):
        self.violations += 1
        self.messages.append(msg)

    def check_split(self, n: int, train_idx, test_idx) -> None:
        self.events += 1
        train = set(map(int, train_idx))
        test = set(map(int, test_idx))
        if train & test:
            self._fail(f"train/test overlap: {sorted(train & test)[:5]}")
        if train | test != set(range(n)):
            self._fail("train and test do not partition the instances")

    def check_nested(self, outer_train, outer_test, inner_train, inner_test) -> None:
        """Inner-fold indices (already mapped to the original dataset)
        must partition within the outer-training split and never touch
        the outer-test fold."""
        self.events += 1
        otr = set(map(int, outer_train))
        ote = set(map(int, outer_test))
        itr = set(map(int, inner_train))
        ite = set(map(int, inner_test))
        if (itr | ite) - otr:
            self._fail("inner folds reach outside the outer-training split")
        if (itr | ite) & ote:
            self._fail("outer-test instances appear in inner folds")
        if itr & ite:
            self._fail("inner train/test overlap")

    def check_subset(self, what: str, used_idx, allowed_idx) -> None:
        """Assert that ``used_idx`` (e.g. SMOTE interpolation bases or
        SFS evaluation rows) stays inside ``allowed_idx``."""
        self.events += 1
        used = set(map(int, used_idx))
        allowed = set(map(int, allowed_idx))
        if used - allowed:
            self._fail(f"{what} used instances outside the training split")
