"""Relative landmarking: pairwise accuracy differences between the
five reference learners, capturing how much margin each buys over the
others (in particular over the linear classifier)."""

from .landmarking import landmarker_scores

__all__ = ["extract_relative_landmarking", "RL_PAIRS"]

RL_PAIRS = (
    ("svm", "lm"), ("svm", "nb"), ("svm", "stump"), ("svm", "nn"),
    ("nn", "lm"), ("nn", "stump"), ("nn", "nb"),
    ("nb", "stump"), ("nb", "lm"),
    ("stump", "lm"),
)


def extract_relative_landmarking(d):
    """10 values: accuracy(A) - accuracy(B) for the fixed pair list,
    all landmarkers scored on one shared fold assignment so the
    differences isolate the learners, not the splits."""
    scores = landmarker_scores(d)
    return {
        f"RL.diff.{a}.{b}": scores[a] - scores[b] for a, b in RL_PAIRS
    }
