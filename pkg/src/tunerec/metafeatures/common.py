"""Shared helpers for the meta-feature extractors."""

import math

import numpy as np
from scipy.stats import rankdata

SENTINEL = 1e6


class MetaFeatureError(RuntimeError):
    """Raised when a meta-feature category cannot be computed."""


def dist_stats(values):
    """(min, max, mean, sd) of a value collection; sample sd, 0 when
    fewer than 2 values; all zeros when empty."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return (float(values.min()), float(values.max()),
            float(values.mean()), sd)


def clamp(value):
    """Clamp ratios that can blow up to +-1e6 so vectors stay finite."""
    if math.isnan(value):
        raise ValueError("meta-feature computed as NaN")
    return float(min(max(value, -SENTINEL), SENTINEL))


def origin_groups(d):
    """Encoded-column indices grouped by original attribute, in first
    appearance order. Returns list of (origin name, kind, indices)."""
    groups = []
    seen = {}
    for j, col in enumerate(d.columns):
        if col.origin not in seen:
            seen[col.origin] = len(groups)
            groups.append((col.origin, col.kind, [j]))
        else:
            groups[seen[col.origin]][2].append(j)
    return groups


def discretize_column(values, n_bins=None):
    """Equal-frequency binning on average ranks.

    Rank-based so any strictly monotone transform of the column yields
    identical bins; average ranks keep tied values in the same bin.
    """
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    if n_bins is None:
        n_bins = math.ceil(math.sqrt(n))
    ranks = rankdata(values, method="average")
    bins = np.minimum(((ranks - 0.5) / n * n_bins).astype(np.int64),
                      n_bins - 1)
    return bins


def entropy(labels):
    """Shannon entropy in bits of a discrete label vector."""
    _, counts = np.unique(labels, return_counts=True)
    p = counts / counts.sum()
    return float(-np.sum(p * np.log2(p)))


def joint_entropy(a, b):
    """Shannon entropy in bits of the paired symbols (a_i, b_i)."""
    a = np.asarray(a)
    pairs = a.astype(np.int64) * (int(np.max(b)) + 1) + np.asarray(b,
                                                                   np.int64)
    return entropy(pairs)
