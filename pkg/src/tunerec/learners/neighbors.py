"""k-nearest-neighbor classifier (brute-force Euclidean)."""

import numpy as np

from .base import BaseClassifier

__all__ = ["KNeighborsClassifier"]


class KNeighborsClassifier(BaseClassifier):
    """k-NN with deterministic tie handling.

    Neighbor-distance ties resolve to the lowest training index (stable
    sort); vote ties resolve to the lowest class index. Scores are the
    per-class vote fractions among the k neighbors.

    Parameters
    ----------
    k : int, default=7
        Neighbor count; must not exceed the training-set size.
    """

    def __init__(self, k=7):
        self.k = k

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.k > X.shape[0]:
            raise ValueError(
                f"k={self.k} larger than the training size {X.shape[0]}"
            )
        self.X_ = X
        self.y_ = y
        return self

    def _vote(self, d2) -> np.ndarray:
        nearest = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        votes = np.zeros((d2.shape[0], self.n_classes_))
        rows = np.arange(d2.shape[0])
        for col in range(nearest.shape[1]):
            votes[rows, self.y_[nearest[:, col]]] += 1.0
        return votes / self.k

    def _distances(self, X) -> np.ndarray:
        sq_tr = np.einsum("ij,ij->i", self.X_, self.X_)
        sq_te = np.einsum("ij,ij->i", X, X)
        d2 = sq_te[:, None] + sq_tr[None, :] - 2.0 * (X @ self.X_.T)
        np.maximum(d2, 0.0, out=d2)
        return d2

    def predict_scores(self, X) -> np.ndarray:
        X = self._check_predict(X)
        return self._vote(self._distances(X))

    def loo_scores(self) -> np.ndarray:
        """Leave-one-out scores on the training set: each point's own
        row is excluded from its neighbor search."""
        if self.k >= len(self.y_):
            raise ValueError("leave-one-out needs k < training size")
        d2 = self._distances(self.X_)
        np.fill_diagonal(d2, np.inf)
        return self._vote(d2)
