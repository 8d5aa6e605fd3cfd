"""Data-complexity meta-features: feature overlap, linearity, and
neighborhood structure of the classification problem.

Binary-only measures (f1 through n4) are computed one class pair at a
time and averaged over all pairs; t1 and t2 are global.
"""

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree

from .. import rng as _rng
from ..learners import KNeighborsClassifier, LogisticRegressionGD
from .common import SENTINEL, clamp

__all__ = ["extract_data_complexity"]

_PAIR_MEASURES = ("f1", "f1v", "f2", "f3", "f4",
                  "l1", "l2", "l3", "n1", "n2", "n3", "n4")


def _pairwise_dist(X):
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    return np.sqrt(np.maximum(d2, 0.0))


def _safe_var(x):
    return float(np.var(x, ddof=1)) if len(x) > 1 else 0.0


def _f1(Xa, Xb):
    """Largest per-feature Fisher discriminant ratio."""
    best = 0.0
    for j in range(Xa.shape[1]):
        num = (Xa[:, j].mean() - Xb[:, j].mean()) ** 2
        den = _safe_var(Xa[:, j]) + _safe_var(Xb[:, j])
        if den <= 0:
            ratio = 0.0 if num == 0 else SENTINEL
        else:
            ratio = num / den
        best = max(best, ratio)
    return clamp(best)


def _f1v(Xa, Xb):
    """Fisher ratio along the best discriminant direction,
    delta' W^+ delta with W the pooled within-class scatter."""
    delta = Xa.mean(axis=0) - Xb.mean(axis=0)
    n = len(Xa) + len(Xb)
    w = np.zeros((Xa.shape[1], Xa.shape[1]))
    for X in (Xa, Xb):
        if len(X) > 1:
            w += (len(X) / n) * np.cov(X, rowvar=False, ddof=1)
    value = float(delta @ np.linalg.pinv(w) @ delta)
    return clamp(max(value, 0.0))


def _overlap_bounds(Xa, Xb):
    lo = np.maximum(Xa.min(axis=0), Xb.min(axis=0))
    hi = np.minimum(Xa.max(axis=0), Xb.max(axis=0))
    return lo, hi


def _f2(Xa, Xb):
    """Product of per-feature normalized overlap widths; a feature
    constant across the pair counts as full overlap."""
    lo, hi = _overlap_bounds(Xa, Xb)
    span = (np.maximum(Xa.max(axis=0), Xb.max(axis=0))
            - np.minimum(Xa.min(axis=0), Xb.min(axis=0)))
    width = np.maximum(hi - lo, 0.0)
    ratio = np.where(span > 0, width / np.where(span > 0, span, 1.0), 1.0)
    return float(np.prod(ratio))


def _outside_counts(X, lo, hi):
    return (X < lo) | (X > hi)


def _f3(Xa, Xb):
    lo, hi = _overlap_bounds(Xa, Xb)
    X = np.vstack([Xa, Xb])
    outside = _outside_counts(X, lo, hi)
    return float(outside.mean(axis=0).max())


def _f4(Xa, Xb):
    """Collective feature efficiency: greedily remove the points the
    best single feature separates, retire that feature, repeat."""
    ya = np.zeros(len(Xa), dtype=bool)
    X = np.vstack([Xa, Xb])
    is_b = np.concatenate([ya, ~np.zeros(len(Xb), dtype=bool)])
    n = len(X)
    alive = np.ones(n, dtype=bool)
    features = list(range(X.shape[1]))
    removed_total = 0
    while features and alive.any():
        best_j = -1
        best_mask = None
        for j in features:
            a = X[alive & ~is_b][:, [j]]
            b = X[alive & is_b][:, [j]]
            if len(a) == 0 or len(b) == 0:
                mask = alive.copy()
            else:
                lo, hi = _overlap_bounds(a, b)
                mask = alive & _outside_counts(X[:, [j]], lo, hi)[:, 0]
            if best_mask is None or mask.sum() > best_mask.sum():
                best_j = j
                best_mask = mask
        if best_mask.sum() == 0:
            break
        removed_total += int(best_mask.sum())
        alive &= ~best_mask
        features.remove(best_j)
    return removed_total / n


def _fit_linear(Xa, Xb):
    X = np.vstack([Xa, Xb])
    y = np.concatenate([np.zeros(len(Xa), np.int64),
                        np.ones(len(Xb), np.int64)])
    model = LogisticRegressionGD()
    model.fit(X, y, n_classes=2)
    return model, X, y


def _l1_l2(Xa, Xb):
    model, X, y = _fit_linear(Xa, Xb)
    pred = model.predict(X)
    wrong = pred != y
    l2 = float(wrong.mean())
    w, b = model.binary_discriminant()
    norm = float(np.linalg.norm(w))
    if norm == 0:
        return 0.0, l2
    margins = np.abs(X @ w + b) / norm
    l1 = float(margins[wrong].sum() / len(X))
    return l1, l2


def _interpolated(Xa, Xb, rng):
    """Synthetic test set: same-class random pair interpolations, one
    per original point."""
    points, labels = [], []
    for cls, X in ((0, Xa), (1, Xb)):
        m = len(X)
        i = rng.integers(0, m, size=m)
        j = rng.integers(0, m, size=m)
        t = rng.uniform(0.0, 1.0, size=(m, 1))
        points.append(X[i] + t * (X[j] - X[i]))
        labels.append(np.full(m, cls, dtype=np.int64))
    return np.vstack(points), np.concatenate(labels)


def _l3(Xa, Xb, rng):
    model, _, _ = _fit_linear(Xa, Xb)
    Xs, ys = _interpolated(Xa, Xb, rng)
    return float((model.predict(Xs) != ys).mean())


def _n4(Xa, Xb, rng):
    X = np.vstack([Xa, Xb])
    y = np.concatenate([np.zeros(len(Xa), np.int64),
                        np.ones(len(Xb), np.int64)])
    model = KNeighborsClassifier(k=1)
    model.fit(X, y, n_classes=2)
    Xs, ys = _interpolated(Xa, Xb, rng)
    return float((model.predict(Xs) != ys).mean())


def _n1(Xa, Xb):
    """Fraction of vertices touched by an inter-class MST edge."""
    X = np.vstack([Xa, Xb])
    y = np.concatenate([np.zeros(len(Xa), np.int64),
                        np.ones(len(Xb), np.int64)])
    tree = minimum_spanning_tree(_pairwise_dist(X)).tocoo()
    boundary = set()
    for i, j in zip(tree.row, tree.col):
        if y[i] != y[j]:
            boundary.add(int(i))
            boundary.add(int(j))
    return len(boundary) / len(X)


def _n2(Xa, Xb):
    """Sum of nearest intra-class distances over sum of nearest
    inter-class distances."""
    X = np.vstack([Xa, Xb])
    split = len(Xa)
    dist = _pairwise_dist(X)
    np.fill_diagonal(dist, np.inf)
    intra_sum = 0.0
    inter_sum = 0.0
    for i in range(len(X)):
        same = np.arange(len(X)) < split if i < split else \
            np.arange(len(X)) >= split
        same_d = dist[i][same]
        intra = float(same_d.min()) if np.isfinite(same_d).any() else 0.0
        inter = float(dist[i][~same].min())
        intra_sum += intra
        inter_sum += inter
    if inter_sum <= 0:
        return SENTINEL
    return clamp(intra_sum / inter_sum)


def _n3(Xa, Xb):
    X = np.vstack([Xa, Xb])
    y = np.concatenate([np.zeros(len(Xa), np.int64),
                        np.ones(len(Xb), np.int64)])
    dist = _pairwise_dist(X)
    np.fill_diagonal(dist, np.inf)
    nearest = np.argmin(dist, axis=1)
    return float((y[nearest] != y).mean())


def _t1(d):
    """Fraction of maximal same-class covering spheres left after
    absorbing spheres nested inside a larger one."""
    X = d.features
    y = d.labels
    n = len(X)
    dist = _pairwise_dist(X)
    enemy = y[:, None] != y[None, :]
    enemy_dist = np.where(enemy, dist, np.inf)
    radius = enemy_dist.min(axis=1)
    absorbed = np.zeros(n, dtype=bool)
    same = ~enemy
    np.fill_diagonal(same, False)
    for i in range(n):
        inside = same[i] & (dist[i] + radius[i] < radius)
        if inside.any():
            absorbed[i] = True
    return float((~absorbed).sum() / n)


def extract_data_complexity(d):
    """14 values per the classical complexity-measure definitions.

    The pairwise measures use a fixed internal seed for the
    interpolation-based nonlinearity estimates so repeated extraction
    is deterministic.
    """
    sums = dict.fromkeys(_PAIR_MEASURES, 0.0)
    pairs = [(a, b) for a in range(d.n_classes)
             for b in range(a + 1, d.n_classes)]
    for a, b in pairs:
        Xa = d.features[d.labels == a]
        Xb = d.features[d.labels == b]
        sums["f1"] += _f1(Xa, Xb)
        sums["f1v"] += _f1v(Xa, Xb)
        sums["f2"] += _f2(Xa, Xb)
        sums["f3"] += _f3(Xa, Xb)
        sums["f4"] += _f4(Xa, Xb)
        l1, l2 = _l1_l2(Xa, Xb)
        sums["l1"] += l1
        sums["l2"] += l2
        sums["l3"] += _l3(Xa, Xb, _rng.stream("dc-l3", 1, a, b))
        sums["n1"] += _n1(Xa, Xb)
        sums["n2"] += _n2(Xa, Xb)
        sums["n3"] += _n3(Xa, Xb)
        sums["n4"] += _n4(Xa, Xb, _rng.stream("dc-n4", 1, a, b))
    values = {f"DC.{m}": sums[m] / len(pairs) for m in _PAIR_MEASURES}
    values["DC.t1"] = _t1(d)
    values["DC.t2"] = d.n_instances / d.n_features
    return values
