"""Gaussian naive Bayes."""

import numpy as np

from .base import BaseClassifier

__all__ = ["GaussianNB"]

_VAR_FLOOR = 1e-9


class GaussianNB(BaseClassifier):
    """Gaussian likelihoods per (class, feature) with a variance floor
    of 1e-9, guarding against columns that degenerate inside folds.
    Scores are softmax-normalized posteriors."""

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        k, p = self.n_classes_, X.shape[1]
        self.priors_ = np.bincount(y, minlength=k) / len(y)
        self.means_ = np.zeros((k, p))
        self.vars_ = np.full((k, p), _VAR_FLOOR)
        for c in range(k):
            rows = X[y == c]
            if len(rows) == 0:
                continue
            self.means_[c] = rows.mean(axis=0)
            if len(rows) > 1:
                self.vars_[c] = np.maximum(rows.var(axis=0, ddof=1), _VAR_FLOOR)
        return self

    def predict_scores(self, X) -> np.ndarray:
        X = self._check_predict(X)
        log_post = np.empty((X.shape[0], self.n_classes_))
        for c in range(self.n_classes_):
            if self.priors_[c] == 0:
                log_post[:, c] = -np.inf
                continue
            diff = X - self.means_[c]
            log_post[:, c] = (
                np.log(self.priors_[c])
                - 0.5 * np.sum(np.log(2.0 * np.pi * self.vars_[c]))
                - 0.5 * np.sum(diff ** 2 / self.vars_[c], axis=1)
            )
        shift = log_post - log_post.max(axis=1, keepdims=True)
        scores = np.exp(shift)
        return scores / scores.sum(axis=1, keepdims=True)
