"""Statistical meta-features: moments, correlation, canonical
correlation against the class indicator matrix."""

import numpy as np

__all__ = ["extract_statistical"]

_RIDGE = 1e-8


def _column_skewness(X):
    centered = X - X.mean(axis=0)
    m2 = np.mean(centered ** 2, axis=0)
    m3 = np.mean(centered ** 3, axis=0)
    out = np.zeros(X.shape[1])
    ok = m2 > 1e-300
    out[ok] = m3[ok] / m2[ok] ** 1.5
    return out


def _column_kurtosis(X):
    """Excess kurtosis per column (normal distribution scores 0)."""
    centered = X - X.mean(axis=0)
    m2 = np.mean(centered ** 2, axis=0)
    m4 = np.mean(centered ** 4, axis=0)
    out = np.zeros(X.shape[1])
    ok = m2 > 1e-300
    out[ok] = m4[ok] / m2[ok] ** 2 - 3.0
    return out


def _minmax_rescale(X):
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    span = np.where(span > 0, span, 1.0)
    return (X - lo) / span


def _mean_abs_correlation(X):
    if X.shape[1] < 2:
        return 0.0
    corr = np.corrcoef(X, rowvar=False)
    iu = np.triu_indices(X.shape[1], k=1)
    return float(np.mean(np.abs(corr[iu])))


def _canonical_correlations(X, labels, n_classes):
    """Canonical correlations between the feature matrix and the
    one-hot class matrix, largest first.

    Solved as the eigenproblem of Syy^-1 Syx Sxx^-1 Sxy on the class
    side (k x k); both covariance blocks are ridge-regularized since
    the one-hot matrix is rank-deficient by construction.
    """
    n = X.shape[0]
    Y = np.zeros((n, n_classes))
    Y[np.arange(n), labels] = 1.0
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    sxx = Xc.T @ Xc / (n - 1) + _RIDGE * np.eye(X.shape[1])
    syy = Yc.T @ Yc / (n - 1) + _RIDGE * np.eye(n_classes)
    sxy = Xc.T @ Yc / (n - 1)
    m = np.linalg.solve(syy, sxy.T) @ np.linalg.solve(sxx, sxy)
    eigvals = np.linalg.eigvals(m)
    rho_sq = np.clip(np.real(eigvals), 0.0, 1.0)
    rho = np.sqrt(np.sort(rho_sq)[::-1])
    n_meaningful = min(X.shape[1], n_classes - 1)
    return rho[:max(n_meaningful, 1)]


def extract_statistical(d):
    """7 values: mean column skewness and excess kurtosis (plain and
    after min-max rescaling; moment ratios are scale invariant so the
    pairs agree), mean absolute pairwise correlation, first canonical
    correlation against the class, and its share of the canonical
    correlation sum."""
    X = d.features
    Xp = _minmax_rescale(X)
    rho = _canonical_correlations(X, d.labels, d.n_classes)
    canc = float(rho[0])
    total = float(rho.sum())
    frac = canc / total if total > 0 else 0.0
    return {
        "ST.sks": float(np.mean(_column_skewness(X))),
        "ST.sksP": float(np.mean(_column_skewness(Xp))),
        "ST.kts": float(np.mean(_column_kurtosis(X))),
        "ST.ktsP": float(np.mean(_column_kurtosis(Xp))),
        "ST.absC": _mean_abs_correlation(X),
        "ST.canC": canc,
        "ST.frac": frac,
    }
