"""Independent reference implementations used only by the tests.

Everything here is deliberately brute-force and avoids the package's
own code paths: rational arithmetic for the metrics and the exact
Wilcoxon tail, full sign-assignment enumeration, and a projected
gradient ascent on the SVM dual with an explicit projection-eviction
loop. Slow is fine; these run on small inputs.
"""

import itertools
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# metrics

def bac_fraction(y_true, y_pred) -> Fraction:
    """Mean per-class recall from explicit confusion counts."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    classes = sorted(set(int(c) for c in y_true))
    total = Fraction(0)
    for c in classes:
        mask = y_true == c
        total += Fraction(int((y_pred[mask] == c).sum()), int(mask.sum()))
    return total / len(classes)


def auc_fraction(y_true, scores) -> Fraction:
    """Pairwise comparison probability with ties worth one half.

    ``scores`` are scores for the positive class (label 1).
    """
    y_true = np.asarray(y_true)
    scores = np.asarray(scores)
    pos = scores[y_true == 1]
    neg = scores[y_true == 0]
    wins = Fraction(0)
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1
            elif p == q:
                wins += Fraction(1, 2)
    return wins / (len(pos) * len(neg))


# ---------------------------------------------------------------------------
# Wilcoxon signed-rank, full enumeration

def _average_ranks(values) -> list:
    """Average ranks of ``values`` as exact fractions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = Fraction(i + 1 + j + 1, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def wilcoxon_tail_fraction(diffs, tail: str = "greater") -> Fraction:
    """Exact one-sided p-value by enumerating every sign assignment.

    Zero differences are dropped. ``greater`` counts assignments whose
    positive-rank sum is at least the observed one.
    """
    diffs = [float(d) for d in diffs if d != 0.0]
    n = len(diffs)
    if n == 0:
        return Fraction(1)
    ranks = _average_ranks([abs(d) for d in diffs])
    observed = sum(r for d, r in zip(diffs, ranks) if d > 0)
    favorable = 0
    for signs in itertools.product((0, 1), repeat=n):
        w = sum(r for s, r in zip(signs, ranks) if s)
        if tail == "greater":
            favorable += w >= observed
        else:
            favorable += w <= observed
    return Fraction(favorable, 2 ** n)


# ---------------------------------------------------------------------------
# SVM dual oracle: projected gradient ascent with projection-eviction

def rbf_kernel(X, gamma: float) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    return np.exp(-gamma * np.maximum(d2, 0.0))


def svm_dual_oracle(K, y, C: float, tol: float = 1e-10,
                    max_iter: int = 20000):
    """Solve the soft-margin SVM dual to machine precision.

    maximize  sum(alpha) - 0.5 * alpha^T (yy^T * K) alpha
    s.t.      0 <= alpha <= C,  y . alpha = 0

    Phase one is projected gradient ascent: each step projects the
    gradient onto the equality constraint over a working set, evicting
    coordinates that would leave the box, then takes the exact
    line-search step clipped to the box. Alphas within 1e-12 * C of a
    bound are snapped onto it so the eviction test stays exact.

    Phase two polishes with an active-set method: solve the KKT system
    on the free set, pin free coordinates that escape the box, release
    the worst bound violator, and repeat until the full KKT conditions
    verify. Raises RuntimeError if they never do, so a silent
    half-solved oracle cannot leak into a test.

    Returns (alpha, bias, decision values on the training points).
    """
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(y)
    H = (y[:, None] * y[None, :]) * K
    alpha = np.zeros(n)
    snap = 1e-12 * max(1.0, C)

    for _ in range(max_iter):
        g = 1.0 - H @ alpha
        active = np.ones(n, dtype=bool)
        while True:
            if not active.any():
                u = np.zeros(n)
                break
            rho = float(np.mean(y[active] * g[active]))
            u = np.where(active, g - y * rho, 0.0)
            evict = active & (((u > 0) & (alpha >= C))
                              | ((u < 0) & (alpha <= 0)))
            if not evict.any():
                break
            active &= ~evict
        if np.max(np.abs(u)) <= tol:
            break
        gu = float(g @ u)
        uhu = float(u @ H @ u)
        up = u > 0
        dn = u < 0
        lam_max = np.inf
        if up.any():
            lam_max = min(lam_max, float(np.min((C - alpha[up]) / u[up])))
        if dn.any():
            lam_max = min(lam_max, float(np.min(-alpha[dn] / u[dn])))
        lam = lam_max if uhu <= 0 else min(gu / uhu, lam_max)
        if lam <= 0:
            break
        alpha = np.clip(alpha + lam * u, 0.0, C)
        alpha[alpha < snap] = 0.0
        alpha[alpha > C - snap] = C

    kkt_tol = 1e-10 * max(1.0, C)
    at_lo = alpha <= 0.0
    at_hi = alpha >= C
    for _ in range(400):
        free = ~(at_lo | at_hi)
        a = np.where(at_hi, C, 0.0)
        if free.any():
            f = np.flatnonzero(free)
            pinned = np.flatnonzero(~free)
            m = len(f)
            A = np.zeros((m + 1, m + 1))
            A[:m, :m] = H[np.ix_(f, f)]
            A[:m, m] = y[f]
            A[m, :m] = y[f]
            rhs = np.empty(m + 1)
            rhs[:m] = 1.0 - H[np.ix_(f, pinned)] @ a[pinned]
            rhs[m] = -float(y[pinned] @ a[pinned]) if len(pinned) else 0.0
            # lstsq because H restricted to the free set may be singular;
            # any minimiser gives the same decision function.
            sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
            af = sol[:m]
            lo_bad = af < -kkt_tol
            hi_bad = af > C + kkt_tol
            if lo_bad.any() or hi_bad.any():
                at_lo[f[lo_bad]] = True
                at_hi[f[hi_bad]] = True
                continue
            a[f] = np.clip(af, 0.0, C)
            nu = float(sol[m])
        else:
            g = 1.0 - H @ a
            yg = y * g
            lo_edges = yg[(at_lo & (y > 0)) | (at_hi & (y < 0))]
            hi_edges = yg[(at_lo & (y < 0)) | (at_hi & (y > 0))]
            lo = float(lo_edges.max()) if len(lo_edges) else -np.inf
            hi = float(hi_edges.min()) if len(hi_edges) else np.inf
            if not np.isfinite(lo):
                nu = hi
            elif not np.isfinite(hi):
                nu = lo
            else:
                nu = (lo + hi) / 2.0
        g = 1.0 - H @ a
        yg = y * g
        viol = np.zeros(n)
        viol[free] = np.abs(yg[free] - nu)
        m0p = at_lo & (y > 0)
        m0n = at_lo & (y < 0)
        mcp = at_hi & (y > 0)
        mcn = at_hi & (y < 0)
        viol[m0p] = np.maximum(0.0, yg[m0p] - nu)
        viol[m0n] = np.maximum(0.0, nu - yg[m0n])
        viol[mcp] = np.maximum(0.0, nu - yg[mcp])
        viol[mcn] = np.maximum(0.0, yg[mcn] - nu)
        worst = int(np.argmax(viol))
        if viol[worst] <= kkt_tol:
            s = (a * y) @ K
            return a, nu, s + nu
        at_lo[worst] = False
        at_hi[worst] = False
    raise RuntimeError("dual oracle failed to satisfy the KKT conditions")


def dual_objective(K, y, alpha) -> float:
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    H = (y[:, None] * y[None, :]) * K
    return float(alpha.sum() - 0.5 * alpha @ H @ alpha)


def primal_objective(K, y, alpha, b, C: float) -> float:
    """Primal value of the dual-feasible point (kernelized)."""
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    alpha = np.asarray(alpha, dtype=np.float64)
    coef = alpha * y
    wnorm2 = float(coef @ K @ coef)
    margins = y * (K @ coef + b)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * wnorm2 + C * float(hinge.sum())
