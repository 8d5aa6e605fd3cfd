"""Information-theoretic meta-features on rank-discretized attributes."""

import math

import numpy as np

from .common import SENTINEL, clamp, discretize_column, entropy, joint_entropy

__all__ = ["extract_infotheoretic"]


def extract_infotheoretic(d):
    """8 entropy and mutual-information values (log base 2).

    Numeric columns are discretized into ceil(sqrt(n)) equal-frequency
    bins on average ranks, which makes every value invariant to
    strictly monotone transforms of the columns. Attribute-level
    quantities are means over encoded columns. The eqAtr and noiSig
    ratios are capped at the 1e6 sentinel when mutual information
    is 0.
    """
    y = d.labels
    cl_ent = entropy(y)
    n_cl_ent = cl_ent / math.log2(d.n_classes)

    attr_ents = []
    norm_attr_ents = []
    joint_ents = []
    mut_infs = []
    for j in range(d.n_features):
        bins = discretize_column(d.features[:, j])
        h = entropy(bins)
        levels = len(np.unique(bins))
        attr_ents.append(h)
        norm_attr_ents.append(h / math.log2(levels) if levels > 1 else 0.0)
        jh = joint_entropy(bins, y)
        joint_ents.append(jh)
        mut_infs.append(h + cl_ent - jh)

    atr_ent = float(np.mean(attr_ents))
    mut_inf = max(float(np.mean(mut_infs)), 0.0)
    if mut_inf > 0:
        eq_atr = clamp(cl_ent / mut_inf)
        noi_sig = clamp((atr_ent - mut_inf) / mut_inf)
    else:
        eq_atr = SENTINEL
        noi_sig = SENTINEL
    return {
        "IN.clEnt": cl_ent,
        "IN.nClEnt": n_cl_ent,
        "IN.atrEnt": atr_ent,
        "IN.nAtrEnt": float(np.mean(norm_attr_ents)),
        "IN.jEnt": float(np.mean(joint_ents)),
        "IN.mutInf": mut_inf,
        "IN.eqAtr": eq_atr,
        "IN.noiSig": noi_sig,
    }
