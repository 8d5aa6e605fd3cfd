"""Model-based meta-features read off one default decision tree."""

import numpy as np

from ..learners import DecisionTreeClassifier
from .common import dist_stats

__all__ = ["extract_model_based"]


def extract_model_based(d):
    """17 values describing a default-setting CART induced on the full
    dataset: node and leaf counts, their ratios to attributes (encoded
    columns) and instances, leaf-depth and branch-length distributions
    (branch length = nodes on the root-to-leaf path, so a bare root is
    depth 0 and branch 1), and per-attribute split-count distribution
    over all encoded columns including unused ones."""
    tree = DecisionTreeClassifier(random_state=1)
    tree.fit(d.features, d.labels, n_classes=d.n_classes)

    is_leaf = tree.feature_ == -1
    leaf_depths = tree.depth_[is_leaf].astype(np.float64)
    branch_lengths = leaf_depths + 1.0

    att_counts = np.zeros(d.n_features)
    used, used_counts = np.unique(tree.feature_[~is_leaf],
                                  return_counts=True)
    att_counts[used] = used_counts

    nodes = float(tree.n_nodes_)
    leaves = float(tree.n_leaves_)
    lev = dist_stats(leaf_depths)
    bran = dist_stats(branch_lengths)
    att = dist_stats(att_counts)
    return {
        "MB.nodes": nodes,
        "MB.leaves": leaves,
        "MB.nodeAtr": nodes / d.n_features,
        "MB.nodeIns": nodes / d.n_instances,
        "MB.leafCor": leaves / d.n_instances,
        "MB.lev_min": lev[0], "MB.lev_max": lev[1],
        "MB.lev_mean": lev[2], "MB.lev_sd": lev[3],
        "MB.bran_min": bran[0], "MB.bran_max": bran[1],
        "MB.bran_mean": bran[2], "MB.bran_sd": bran[3],
        "MB.att_min": att[0], "MB.att_max": att[1],
        "MB.att_mean": att[2], "MB.att_sd": att[3],
    }
