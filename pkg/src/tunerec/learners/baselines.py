"""Baseline anchor models: constant priors and seeded random scores.

Both must land at AUC 0.5 (exactly for the constant model, in
expectation for the random one); they calibrate the meta-level
evaluation floor.
"""

import numpy as np

from .base import BaseClassifier
from .. import rng as _rng

__all__ = ["ConstantClassifier", "RandomClassifier"]


class ConstantClassifier(BaseClassifier):
    """Predicts the training class priors for every instance."""

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        self.priors_ = np.bincount(y, minlength=self.n_classes_) / len(y)
        return self

    def predict_scores(self, X) -> np.ndarray:
        X = self._check_predict(X)
        return np.tile(self.priors_, (X.shape[0], 1))


class RandomClassifier(BaseClassifier):
    """Scores every instance with seeded uniform noise.

    The stream is reset at fit time from ``random_state``, so a fixed
    seed and call order reproduce the same guesses.
    """

    def __init__(self, random_state=None):
        self.random_state = random_state

    def fit(self, X, y, n_classes=None):
        self._setup_fit(X, y, n_classes)
        self.rng_ = _rng.stream("random-model", self.random_state)
        return self

    def predict_scores(self, X) -> np.ndarray:
        X = self._check_predict(X)
        raw = self.rng_.random((X.shape[0], self.n_classes_))
        return raw / raw.sum(axis=1, keepdims=True)
