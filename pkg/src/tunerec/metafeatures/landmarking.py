"""Landmarking meta-features: cross-validated accuracies of cheap
reference learners."""

import numpy as np

from .. import rng as _rng
from ..evaluation import accuracy, stratified_kfold
from ..learners import (DecisionStump, GaussianNB, KNeighborsClassifier,
                        LogisticRegressionGD, SMOSVC)
from .common import discretize_column, entropy, origin_groups

__all__ = ["extract_landmarking", "landmark_folds", "cv_accuracy",
           "landmarker_scores"]

# Meta-features must be functions of the dataset alone, so every
# landmarking fold assignment and random draw uses this fixed seed.
INTERNAL_SEED = 1


def landmark_folds(d):
    """Stratified folds shared by all landmarkers: 10-fold, reduced to
    the smallest class size when a class has fewer than 10 members."""
    min_class = int(np.bincount(d.labels, minlength=d.n_classes).min())
    k = min(10, min_class)
    if k < 2:
        raise ValueError(
            "landmarking needs every class to have at least 2 instances"
        )
    return stratified_kfold(d, k, INTERNAL_SEED)


def cv_accuracy(d, folds, factory) -> float:
    """Mean fold accuracy of a fresh ``factory()`` model."""
    scores = []
    for f in range(folds.k):
        d_tr = d.subset(folds.train_indices(f))
        d_te = d.subset(folds.test_indices(f))
        model = factory()
        model.fit(d_tr.features, d_tr.labels, n_classes=d.n_classes)
        scores.append(accuracy(d_te.labels, model.predict(d_te.features)))
    return float(np.mean(scores))


def _origin_symbols(d, kind, idx):
    """Discrete symbols of one original attribute: discretized bins
    for numeric columns, the hot-column index for one-hot groups."""
    if kind == "one-hot-category" and len(idx) > 1:
        return np.argmax(d.features[:, idx], axis=1)
    return discretize_column(d.features[:, idx[0]])


def gain_ratios(d):
    """C4.5-style gain ratio of each original attribute against the
    class: information gain over attribute entropy, 0 when the
    attribute has a single symbol."""
    y = d.labels
    cl_ent = entropy(y)
    ratios = []
    for _, kind, idx in origin_groups(d):
        sym = _origin_symbols(d, kind, idx)
        h_attr = entropy(sym)
        if h_attr <= 0:
            ratios.append(0.0)
            continue
        cond = 0.0
        for v in np.unique(sym):
            mask = sym == v
            cond += mask.mean() * entropy(y[mask])
        ratios.append((cl_ent - cond) / h_attr)
    return np.array(ratios)


def extract_landmarking(d):
    """8 values: naive Bayes and 1-NN CV accuracies, the distribution
    of per-attribute stump accuracies (one stump per original
    attribute, restricted to its encoded columns), and stump
    accuracies on the minimum gain-ratio attribute and on a seeded
    random attribute."""
    folds = landmark_folds(d)
    groups = origin_groups(d)

    stump_accs = np.array([
        cv_accuracy(d, folds, lambda idx=idx: DecisionStump(features=tuple(idx)))
        for _, _, idx in groups
    ])
    ratios = gain_ratios(d)
    min_gain_idx = groups[int(np.argmin(ratios))][2]
    rand_pick = int(_rng.stream("lm-strand", INTERNAL_SEED)
                    .integers(0, len(groups)))
    rand_idx = groups[rand_pick][2]

    return {
        "LM.nb": cv_accuracy(d, folds, GaussianNB),
        "LM.stump_min": float(stump_accs.min()),
        "LM.stump_max": float(stump_accs.max()),
        "LM.stump_mean": float(stump_accs.mean()),
        "LM.stump_sd": (float(np.std(stump_accs, ddof=1))
                        if len(stump_accs) > 1 else 0.0),
        "LM.stMinGain": cv_accuracy(
            d, folds, lambda: DecisionStump(features=tuple(min_gain_idx))),
        "LM.stRand": cv_accuracy(
            d, folds, lambda: DecisionStump(features=tuple(rand_idx))),
        "LM.nn": cv_accuracy(d, folds, lambda: KNeighborsClassifier(k=1)),
    }


def landmarker_scores(d):
    """Shared-fold CV accuracies of the five reference learners used
    by the relative measures: default-setting SVM, 1-NN, naive Bayes,
    unrestricted stump, and the linear classifier."""
    folds = landmark_folds(d)
    return {
        "svm": cv_accuracy(d, folds, SMOSVC),
        "nn": cv_accuracy(d, folds, lambda: KNeighborsClassifier(k=1)),
        "nb": cv_accuracy(d, folds, GaussianNB),
        "stump": cv_accuracy(d, folds, DecisionStump),
        "lm": cv_accuracy(d, folds, LogisticRegressionGD),
    }
