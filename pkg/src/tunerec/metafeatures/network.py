"""Complex-network meta-features on the epsilon-NN instance graph.

Vertices are instances; edges connect instances whose Gower distance
falls below the 15th percentile of all pairwise distances, with
inter-class edges removed after construction. All measures are
computed on that pruned undirected graph.
"""

import numpy as np
from numba import njit
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

__all__ = ["extract_complex_network", "build_instance_graph"]

EPS_PERCENTILE = 15.0


def gower_matrix(X):
    """Mean range-normalized absolute difference over columns."""
    n, p = X.shape
    out = np.zeros((n, n))
    for j in range(p):
        col = X[:, j]
        span = float(col.max() - col.min())
        if span <= 0:
            continue
        out += np.abs(col[:, None] - col[None, :]) / span
    return out / p


def build_instance_graph(d):
    """Boolean adjacency of the pruned epsilon-NN graph."""
    dist = gower_matrix(d.features)
    iu = np.triu_indices(d.n_instances, k=1)
    eps = float(np.percentile(dist[iu], EPS_PERCENTILE))
    adj = dist < eps
    np.fill_diagonal(adj, False)
    same_class = d.labels[:, None] == d.labels[None, :]
    adj &= same_class
    return adj


@njit(cache=True)
def _brandes(indptr, indices, n):
    """Unnormalized betweenness per vertex; undirected pair counts
    halved."""
    bc = np.zeros(n)
    sigma = np.zeros(n)
    dist = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    delta = np.zeros(n)
    for s in range(n):
        sigma[:] = 0.0
        sigma[s] = 1.0
        dist[:] = -1
        dist[s] = 0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        delta[:] = 0.0
        for t in range(tail - 1, 0, -1):
            v = order[t]
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if dist[w] == dist[v] - 1:
                    delta[w] += sigma[w] / sigma[v] * (1.0 + delta[v])
            bc[v] += delta[v]
    return bc / 2.0


def _closeness(dists, n):
    """Per-vertex closeness, scaled by reachable-set share so
    disconnected graphs stay comparable."""
    out = np.zeros(n)
    for u in range(n):
        finite = np.isfinite(dists[u])
        r = int(finite.sum())
        total = float(dists[u][finite].sum())
        if r > 1 and total > 0:
            out[u] = (r - 1) ** 2 / ((n - 1) * total)
    return out


def _clustering(adj_sparse, degrees):
    # boolean matmul would saturate the path counts at 1
    a = adj_sparse.astype(np.float64)
    triangles = np.asarray(
        (a @ a).multiply(a).sum(axis=1)
    ).ravel() / 2.0
    possible = degrees * (degrees - 1) / 2.0
    coef = np.zeros(len(degrees))
    ok = possible > 0
    coef[ok] = triangles[ok] / possible[ok]
    return coef


def _hub_scores(adj_sparse, n):
    """Principal adjacency eigenvector by power iteration, rescaled so
    the largest score is 1."""
    x = np.full(n, 1.0 / n)
    for _ in range(200):
        nxt = adj_sparse @ x
        norm = float(np.linalg.norm(nxt))
        if norm <= 0:
            return np.zeros(n)
        nxt /= norm
        if float(np.abs(nxt - x).max()) < 1e-12:
            x = nxt
            break
        x = nxt
    peak = float(x.max())
    return x / peak if peak > 0 else np.zeros(n)


def extract_complex_network(d):
    """9 values: edge count, mean degree, density, component count,
    and vertex means of closeness, betweenness (unnormalized),
    local clustering, hub score, and shortest-path length over
    reachable pairs. Degenerate vertex measures contribute 0."""
    n = d.n_instances
    adj = build_instance_graph(d)
    sparse = csr_matrix(adj)
    degrees = adj.sum(axis=1).astype(np.float64)
    n_edges = float(degrees.sum()) / 2.0

    n_comp, _ = connected_components(sparse, directed=False)
    dists = shortest_path(sparse, method="D", directed=False,
                          unweighted=True)
    finite_off = np.isfinite(dists) & ~np.eye(n, dtype=bool)
    avg_path = (float(dists[finite_off].mean())
                if finite_off.any() else 0.0)

    betweenness = _brandes(sparse.indptr.astype(np.int64),
                           sparse.indices.astype(np.int64), n)
    return {
        "CN.edges": n_edges,
        "CN.degree": 2.0 * n_edges / n,
        "CN.density": 2.0 * n_edges / (n * (n - 1)) if n > 1 else 0.0,
        "CN.maxComp": float(n_comp),
        "CN.closeness": float(_closeness(dists, n).mean()),
        "CN.betweenness": float(betweenness.mean()),
        "CN.clsCoef": float(_clustering(sparse, degrees).mean()),
        "CN.hubs": float(_hub_scores(csr_matrix(adj.astype(np.float64)),
                                     n).mean()),
        "CN.avgPath": avg_path,
    }
