"""RBF-kernel SVM trained by sequential minimal optimization.

The binary solver follows the maximal-violating-pair working-set rule:
with the dual written as minimizing 0.5 a'Qa - e'a subject to y'a = 0
and 0 <= a <= C, it repeatedly picks i maximizing -y_i G_i over the
"up" set and j minimizing it over the "down" set, solves the
two-variable subproblem analytically, and maintains the gradient G.
It stops when the maximal KKT violation m(a) - M(a) drops below the
tolerance. Multiclass is one-vs-one with majority voting.
"""

import warnings

import numpy as np
from numba import njit

from .base import BaseClassifier

__all__ = ["SMOSVC", "BinarySMO", "SMOConvergenceWarning"]

_TRACE_CAP = 200_000


class SMOConvergenceWarning(UserWarning):
    """Emitted when the pair-update cap is reached before the KKT
    tolerance; the model is still usable."""


@njit(cache=True)
def _kernel_row(X, sqn, gamma, i, out):
    n, d = X.shape
    for t in range(n):
        acc = 0.0
        for f in range(d):
            acc += X[i, f] * X[t, f]
        out[t] = np.exp(-gamma * (sqn[i] + sqn[t] - 2.0 * acc))


@njit(cache=True)
def _smo_solve(X, y, C, gamma, tol, max_updates, cache_slots):
    """Returns (alpha, b, converged, updates, trace, trace_len)."""
    n = X.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)  # gradient of the minimization objective at alpha=0
    sqn = np.empty(n)
    for t in range(n):
        acc = 0.0
        for f in range(X.shape[1]):
            acc += X[t, f] * X[t, f]
        sqn[t] = acc

    cache = np.empty((cache_slots, n))
    owner = np.full(cache_slots, -1, dtype=np.int64)

    trace = np.empty(min(max_updates, _TRACE_CAP) + 1)
    trace[0] = 0.0  # objective at alpha = 0
    trace_len = 1

    updates = 0
    converged = False
    m = 0.0
    M = 0.0
    while updates < max_updates:
        m = -np.inf
        M = np.inf
        i = -1
        j = -1
        for t in range(n):
            yG = -y[t] * G[t]
            if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
                if yG > m:
                    m = yG
                    i = t
            if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
                if yG < M:
                    M = yG
                    j = t
        if i < 0 or j < 0 or m - M < tol:
            converged = True
            break

        slot_i = i % cache_slots
        if owner[slot_i] != i:
            _kernel_row(X, sqn, gamma, i, cache[slot_i])
            owner[slot_i] = i
        Ki = cache[slot_i]
        slot_j = j % cache_slots
        if owner[slot_j] != j:
            _kernel_row(X, sqn, gamma, j, cache[slot_j])
            owner[slot_j] = j
        Kj = cache[slot_j]

        quad = Ki[i] + Kj[j] - 2.0 * Ki[j]
        if quad < 1e-12:
            quad = 1e-12
        step = (m - M) / quad
        # box limits along the direction alpha_i += y_i t, alpha_j -= y_j t
        if y[i] > 0:
            lim = C - alpha[i]
        else:
            lim = alpha[i]
        if step > lim:
            step = lim
        if y[j] > 0:
            lim = alpha[j]
        else:
            lim = C - alpha[j]
        if step > lim:
            step = lim

        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        if alpha[i] < 0.0:
            alpha[i] = 0.0
        elif alpha[i] > C:
            alpha[i] = C
        if alpha[j] < 0.0:
            alpha[j] = 0.0
        elif alpha[j] > C:
            alpha[j] = C
        for t in range(n):
            G[t] += y[t] * step * (Ki[t] - Kj[t])
        updates += 1

        if trace_len < trace.shape[0]:
            # dual (maximization) objective via D = 0.5 * a.(e - G)
            obj = 0.0
            for t in range(n):
                obj += alpha[t] * (1.0 - G[t])
            trace[trace_len] = 0.5 * obj
            trace_len += 1

    # recompute the violation bracket for the bias
    m = -np.inf
    M = np.inf
    for t in range(n):
        yG = -y[t] * G[t]
        if (y[t] > 0 and alpha[t] < C) or (y[t] < 0 and alpha[t] > 0):
            if yG > m:
                m = yG
        if (y[t] > 0 and alpha[t] > 0) or (y[t] < 0 and alpha[t] < C):
            if yG < M:
                M = yG
    if np.isfinite(m) and np.isfinite(M):
        b = 0.5 * (m + M)
    elif np.isfinite(m):
        b = m
    elif np.isfinite(M):
        b = M
    else:
        b = 0.0
    return alpha, b, converged, updates, trace, trace_len


def _rbf_matrix(A, B, gamma):
    sq_a = np.einsum("ij,ij->i", A, A)
    sq_b = np.einsum("ij,ij->i", B, B)
    d2 = sq_a[:, None] + sq_b[None, :] - 2.0 * (A @ B.T)
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-gamma * d2)


class BinarySMO:
    """One trained binary machine of the one-vs-one decomposition.

    Attributes
    ----------
    alpha_ : ndarray
        Dual coefficients in [0, C].
    b_ : float
        Bias; the decision function is sum_i alpha_i y_i K(x_i, x) + b.
    objective_trace_ : ndarray
        Dual objective after each recorded pair update (non-decreasing).
    converged_ : bool
        Whether the KKT tolerance was reached within the update cap.
    """

    def __init__(self, X, y_pm, C, gamma, tol, max_updates, cache_slots=None):
        if C <= 0:
            raise ValueError(f"C must be positive, got {C}")
        if gamma <= 0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        n = X.shape[0]
        if cache_slots is None:
            cache_slots = min(n, max(16, (1 << 25) // max(1, n)))
        self.X_ = np.ascontiguousarray(X, dtype=np.float64)
        self.y_ = np.asarray(y_pm, dtype=np.float64)
        self.C = float(C)
        self.gamma = float(gamma)
        alpha, b, converged, updates, trace, trace_len = _smo_solve(
            self.X_, self.y_, self.C, self.gamma, float(tol),
            int(max_updates), int(cache_slots),
        )
        self.alpha_ = alpha
        self.b_ = float(b)
        self.converged_ = bool(converged)
        self.updates_ = int(updates)
        self.objective_trace_ = trace[:trace_len].copy()

    def decision_function(self, X) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        coef = self.alpha_ * self.y_
        sv = coef != 0.0
        if not sv.any():
            return np.full(X.shape[0], self.b_)
        K = _rbf_matrix(X, self.X_[sv], self.gamma)
        return K @ coef[sv] + self.b_

    def dual_objective(self) -> float:
        K = _rbf_matrix(self.X_, self.X_, self.gamma)
        coef = self.alpha_ * self.y_
        return float(self.alpha_.sum() - 0.5 * coef @ K @ coef)

    def duality_gap(self) -> float:
        """Primal minus dual objective; small at convergence."""
        K = _rbf_matrix(self.X_, self.X_, self.gamma)
        coef = self.alpha_ * self.y_
        quad = float(coef @ K @ coef)
        margins = self.y_ * (K @ coef + self.b_)
        slack = np.maximum(0.0, 1.0 - margins).sum()
        return quad - float(self.alpha_.sum()) + self.C * float(slack)


class SMOSVC(BaseClassifier):
    """RBF SVM classifier (one-vs-one SMO).

    Parameters
    ----------
    C : float, default=1.0
        Soft-margin cost.
    gamma : float or None, default=None
        RBF width; None means the reference default 1/n_features,
        resolved when fitting.
    tol : float, default=1e-3
        KKT stopping tolerance of the SMO solver.
    max_updates : int, default=10_000_000
        Cap on pair updates per binary problem; hitting it emits
        :class:`SMOConvergenceWarning`.

    Attributes
    ----------
    gamma_ : float
        The gamma actually used.
    machines_ : dict
        (class_a, class_b) -> :class:`BinarySMO` for a < b; the binary
        decision is positive for class_a.
    """

    def __init__(self, C=1.0, gamma=None, tol=1e-3, max_updates=10_000_000):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_updates = max_updates

    def fit(self, X, y, n_classes=None):
        X, y = self._setup_fit(X, y, n_classes)
        if self.C is None or self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        self.gamma_ = 1.0 / self.n_features_ if self.gamma is None else float(self.gamma)
        if self.gamma_ <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma_}")
        self.machines_ = {}
        for a in range(self.n_classes_):
            for b in range(a + 1, self.n_classes_):
                mask = (y == a) | (y == b)
                if not mask.any() or len(np.unique(y[mask])) < 2:
                    continue
                y_pm = np.where(y[mask] == a, 1.0, -1.0)
                machine = BinarySMO(X[mask], y_pm, self.C, self.gamma_,
                                    self.tol, self.max_updates)
                if not machine.converged_:
                    warnings.warn(
                        f"SMO pair ({a},{b}) hit the update cap of "
                        f"{self.max_updates} before reaching tol={self.tol}",
                        SMOConvergenceWarning,
                    )
                self.machines_[(a, b)] = machine
        return self

    def predict_scores(self, X) -> np.ndarray:
        X = self._check_predict(X)
        k = self.n_classes_
        votes = np.zeros((X.shape[0], k))
        if not self.machines_:
            votes[:, 0] = 1.0
            return votes
        for (a, b), machine in self.machines_.items():
            dec = machine.decision_function(X)
            votes[dec >= 0, a] += 1.0
            votes[dec < 0, b] += 1.0
        return votes / votes.sum(axis=1, keepdims=True)
