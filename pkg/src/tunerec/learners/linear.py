"""Linear classifier: L2-regularized logistic model, gradient descent."""

import numpy as np

from .base import BaseClassifier

__all__ = ["LogisticRegressionGD"]


class LogisticRegressionGD(BaseClassifier):
    """One-vs-rest logistic regression trained by full-batch gradient
    descent: fixed 500 epochs, step 0.1, L2 regularization 1e-4 on the
    weights (not the intercepts). Deterministic (zero init).

    Attributes
    ----------
    weights_ : ndarray of shape (n_classes, n_features)
    intercepts_ : ndarray of shape (n_classes,)
    """

    def __init__(self, epochs=500, lr=0.1, reg=1e-4):
        self.epochs = epochs
        self.lr = lr
        self.reg = reg

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        n, p = X.shape
        k = self.n_classes_
        Z = np.zeros((n, k))
        Z[np.arange(n), y] = 1.0
        W = np.zeros((k, p))
        b = np.zeros(k)
        for _ in range(self.epochs):
            prob = 1.0 / (1.0 + np.exp(-(X @ W.T + b)))
            err = prob - Z
            W -= self.lr * (err.T @ X / n + self.reg * W)
            b -= self.lr * err.mean(axis=0)
        self.weights_ = W
        self.intercepts_ = b
        return self

    def margins(self, X) -> np.ndarray:
        """Raw per-class linear scores X @ W.T + b."""
        X = self._check_predict(X)
        return X @ self.weights_.T + self.intercepts_

    def binary_discriminant(self):
        """For a binary model, the (w, b) of the single separating
        hyperplane: positive side = class 1."""
        if self.n_classes_ != 2:
            raise ValueError("binary_discriminant needs exactly 2 classes")
        return (self.weights_[1] - self.weights_[0],
                float(self.intercepts_[1] - self.intercepts_[0]))

    def predict_scores(self, X) -> np.ndarray:
        sig = 1.0 / (1.0 + np.exp(-self.margins(X)))
        total = sig.sum(axis=1, keepdims=True)
        uniform = np.full_like(sig, 1.0 / sig.shape[1])
        with np.errstate(invalid="ignore"):
            scores = np.where(total > 0, sig / total, uniform)
        return scores

    def predict(self, X) -> np.ndarray:
        # argmax of the raw margins; identical to argmax of scores but
        # immune to sigmoid underflow at extreme inputs
        return np.argmax(self.margins(X), axis=1)
