"""Simple meta-features: sizes, attribute-type counts, class balance."""

import numpy as np

from .common import dist_stats, origin_groups

__all__ = ["extract_simple"]


def extract_simple(d):
    """17 values describing dataset shape and composition.

    Attribute counts refer to original pre-encoding attributes, read
    from the retained column metadata. Logical attributes count as
    numeric since they encode to a single binary column; nominal means
    one-hot encoded. Class distribution values are relative
    frequencies. With no nominal attributes all five symbols values
    are 0.
    """
    groups = origin_groups(d)
    n_attrs = len(groups)
    n_nominal = sum(1 for _, kind, _ in groups if kind == "one-hot-category")
    n_numeric = n_attrs - n_nominal

    # Category count per nominal attribute = its one-hot column count.
    symbol_counts = [len(idx) for _, kind, idx in groups
                     if kind == "one-hot-category"]
    sym_min, sym_max, sym_mean, sym_sd = dist_stats(symbol_counts)
    sym_sum = float(np.sum(symbol_counts)) if symbol_counts else 0.0

    freqs = np.bincount(d.labels, minlength=d.n_classes) / d.n_instances
    cls_min, cls_max, cls_mean, cls_sd = dist_stats(freqs)

    return {
        "SM.classes": float(d.n_classes),
        "SM.attributes": float(n_attrs),
        "SM.numeric": float(n_numeric),
        "SM.nominal": float(n_nominal),
        "SM.samples": float(d.n_instances),
        "SM.dimension": d.n_instances / n_attrs,
        "SM.numRate": n_numeric / n_attrs,
        "SM.nomRate": n_nominal / n_attrs,
        "SM.symbols_min": sym_min,
        "SM.symbols_max": sym_max,
        "SM.symbols_mean": sym_mean,
        "SM.symbols_sd": sym_sd,
        "SM.symbols_sum": sym_sum,
        "SM.classes_min": cls_min,
        "SM.classes_max": cls_max,
        "SM.classes_mean": cls_mean,
        "SM.classes_sd": cls_sd,
    }
