"""Random forest: bagged CART trees with per-split feature subsets."""

import numpy as np

from .base import BaseClassifier
from .tree import DecisionTreeClassifier
from .. import rng as _rng

__all__ = ["RandomForestClassifier"]


class RandomForestClassifier(BaseClassifier):
    """Bagged Gini CART ensemble.

    Each tree trains on a bootstrap sample and considers a fresh random
    subset of ``mtry`` features at every split; trees are grown fully
    (no complexity pruning) down to ``nodesize``-sized leaves. Per-tree
    RNG streams derive from (random_state, tree index), so forests are
    reproducible regardless of build order.

    Parameters
    ----------
    ntree : int, default=500
        Number of trees.
    nodesize : int, default=1
        Minimum leaf size.
    mtry : int or None
        Features tried per split; defaults to round(sqrt(n_features)).
    random_state : int or None
        Forest seed.

    Attributes
    ----------
    trees_ : list of DecisionTreeClassifier
    importances_ : ndarray
        Mean over trees of the per-feature weighted Gini decrease.
    """

    def __init__(self, ntree=500, nodesize=1, mtry=None, random_state=None):
        self.ntree = ntree
        self.nodesize = nodesize
        self.mtry = mtry
        self.random_state = random_state

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        if self.ntree < 1:
            raise ValueError(f"ntree must be >= 1, got {self.ntree}")
        n, p = X.shape
        mtry = self.mtry or max(1, round(np.sqrt(p)))
        self.trees_ = []
        importances = np.zeros(p)
        for t in range(self.ntree):
            boot_rng = _rng.stream("rf-bootstrap", self.random_state, t)
            boot = boot_rng.integers(0, n, size=n)
            tree = DecisionTreeClassifier(
                cp=0.0, minsplit=max(2, 2 * self.nodesize),
                minbucket=self.nodesize, maxdepth=1_000_000, mtry=mtry,
                random_state=_rng.derive_seed("rf-splits", self.random_state, t),
            )
            tree.fit(X[boot], y[boot], n_classes=self.n_classes_)
            self.trees_.append(tree)
            importances += tree.importances_
        self.importances_ = importances / self.ntree
        return self

    def predict_scores(self, X) -> np.ndarray:
        """Per-class fractions of tree votes."""
        X = self._check_predict(X)
        votes = np.zeros((X.shape[0], self.n_classes_))
        rows = np.arange(X.shape[0])
        for tree in self.trees_:
            votes[rows, tree.predict(X)] += 1.0
        return votes / self.ntree
