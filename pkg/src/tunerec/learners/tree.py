"""CART decision trees (Gini splitting) and the depth-1 stump."""

import numpy as np

from .base import BaseClassifier
from .. import rng as _rng

__all__ = ["DecisionTreeClassifier", "DecisionStump"]


def _best_split(X, y, idx, k, candidates, minbucket):
    """Best (feature, threshold, gain) for the node holding ``idx``.

    ``gain`` is the unweighted impurity decrease n*G - nL*GL - nR*GR,
    always > 0 for a returned split. Ties break toward the first
    candidate scanned (within a feature, toward the lowest threshold).
    Plain trees scan features ascending; the forest passes each node's
    mtry sample unsorted, so tied features win uniformly at random
    instead of privileging low column indices.
    """
    n = len(idx)
    counts = np.bincount(y[idx], minlength=k).astype(np.float64)
    parent_sq = float((counts ** 2).sum())
    best_gain = 0.0
    best_feat = -1
    best_thr = 0.0
    for j in candidates:
        x = X[idx, j]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        ys = y[idx][order]
        cum = np.zeros((n, k))
        for c in range(k):
            cum[:, c] = np.cumsum(ys == c)
        pos = np.arange(minbucket - 1, n - minbucket)
        if len(pos) == 0:
            continue
        pos = pos[xs[pos] < xs[pos + 1]]
        if len(pos) == 0:
            continue
        n_left = (pos + 1).astype(np.float64)
        left_sq = (cum[pos] ** 2).sum(axis=1)
        right_sq = ((counts[None, :] - cum[pos]) ** 2).sum(axis=1)
        score = left_sq / n_left + right_sq / (n - n_left)
        at = int(np.argmax(score))
        gain = float(score[at]) - parent_sq / n
        if gain > best_gain + 1e-12:
            best_gain = gain
            best_feat = int(j)
            best_thr = 0.5 * (float(xs[pos[at]]) + float(xs[pos[at] + 1]))
    return best_feat, best_thr, best_gain


class DecisionTreeClassifier(BaseClassifier):
    """CART classifier with Gini impurity splitting.

    Parameters
    ----------
    cp : float, default=0.01
        Complexity parameter: a split is kept only if its weighted
        impurity decrease is at least ``cp`` times the root Gini.
    minsplit : int, default=20
        Minimum node size for a split to be attempted.
    minbucket : int, default=7
        Minimum leaf size.
    maxdepth : int, default=30
        Maximum node depth (root = 0).
    mtry : int or None
        When set, each split considers a random subset of ``mtry``
        features (used by the forest).
    features : sequence or None
        When set, restricts candidate split features entirely (used by
        per-attribute stumps).
    random_state : int or None
        Seed for the per-node mtry draws.

    Attributes
    ----------
    feature_, threshold_, left_, right_ : ndarray
        Node arrays; leaves have feature -1.
    counts_ : ndarray of shape (n_nodes, n_classes)
        Training class counts per node.
    depth_ : ndarray
        Node depths.
    importances_ : ndarray
        Per-feature total weighted Gini decrease.
    """

    def __init__(self, cp=0.01, minsplit=20, minbucket=7, maxdepth=30,
                 mtry=None, features=None, random_state=None):
        self.cp = cp
        self.minsplit = minsplit
        self.minbucket = minbucket
        self.maxdepth = maxdepth
        self.mtry = mtry
        self.features = features
        self.random_state = random_state

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        if self.minbucket < 1 or self.minsplit < 1 or self.maxdepth < 1:
            raise ValueError("minbucket, minsplit and maxdepth must be >= 1")
        n, p = X.shape
        k = self.n_classes_
        rng = _rng.stream("cart-mtry", self.random_state) if self.mtry else None
        base_candidates = (np.arange(p) if self.features is None
                           else np.asarray(sorted(self.features), dtype=np.int64))

        root_counts = np.bincount(y, minlength=k).astype(np.float64)
        root_gini = 1.0 - ((root_counts / n) ** 2).sum()

        feature, threshold, left, right, counts, depth = [], [], [], [], [], []
        importances = np.zeros(p)

        def new_node(idx, d):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            counts.append(np.bincount(y[idx], minlength=k).astype(np.float64))
            depth.append(d)
            return len(feature) - 1

        stack = [(new_node(np.arange(n), 0), np.arange(n))]
        while stack:
            node, idx = stack.pop()
            d = depth[node]
            node_counts = counts[node]
            pure = (node_counts > 0).sum() <= 1
            if pure or d >= self.maxdepth or len(idx) < self.minsplit \
                    or len(idx) < 2 * self.minbucket:
                continue
            if rng is not None:
                m = min(self.mtry, len(base_candidates))
                cand = rng.choice(base_candidates, size=m, replace=False)
            else:
                cand = base_candidates
            feat, thr, gain = _best_split(X, y, idx, k, cand, self.minbucket)
            if feat < 0:
                continue
            if gain / n < self.cp * root_gini:
                continue
            importances[feat] += gain / n
            go_left = X[idx, feat] <= thr
            node_l = new_node(idx[go_left], d + 1)
            node_r = new_node(idx[~go_left], d + 1)
            feature[node] = feat
            threshold[node] = thr
            left[node] = node_l
            right[node] = node_r
            stack.append((node_r, idx[~go_left]))
            stack.append((node_l, idx[go_left]))

        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left, dtype=np.int64)
        self.right_ = np.array(right, dtype=np.int64)
        self.counts_ = np.vstack(counts)
        self.depth_ = np.array(depth, dtype=np.int64)
        self.importances_ = importances
        return self

    @property
    def n_nodes_(self) -> int:
        return len(self.feature_)

    @property
    def n_leaves_(self) -> int:
        return int((self.feature_ < 0).sum())

    def apply(self, X) -> np.ndarray:
        """Leaf node index per instance."""
        X = self._check_predict(X)
        out = np.zeros(X.shape[0], dtype=np.int64)
        live = np.arange(X.shape[0])
        node_of = np.zeros(X.shape[0], dtype=np.int64)
        while len(live):
            nodes = node_of[live]
            at_leaf = self.feature_[nodes] < 0
            out[live[at_leaf]] = nodes[at_leaf]
            live = live[~at_leaf]
            nodes = node_of[live]
            go_left = X[live, self.feature_[nodes]] <= self.threshold_[nodes]
            node_of[live[go_left]] = self.left_[nodes[go_left]]
            node_of[live[~go_left]] = self.right_[nodes[~go_left]]
        return out

    def predict_scores(self, X) -> np.ndarray:
        leaves = self.apply(X)
        c = self.counts_[leaves]
        return c / c.sum(axis=1, keepdims=True)


class DecisionStump(DecisionTreeClassifier):
    """Depth-1 CART: the single best binary split (or a leaf when no
    split improves impurity)."""

    def __init__(self, features=None):
        super().__init__(cp=0.0, minsplit=2, minbucket=1, maxdepth=1,
                         features=features)
