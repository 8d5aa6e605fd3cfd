"""Synthetic corpus generator with planted tuning difficulty.

Two families: hyperplane-separated cluster mixtures that a default RBF
SVM already solves (expected label Defaults), and fine-grained
geometries (alternating rings, checkerboards) where the default gamma
is far too smooth so tuning helps consistently (expected label
Tuning). Nuisance structure is randomized per dataset in both
directions: sizes, dimensions, imbalance, rotation, distractor
columns, label noise, cluster counts, elongation, and class-centroid
offsets all vary, so simple distribution or graph measures overlap
across the families and only the tuning gain itself tracks the planted
label. The easy family is sampled larger than the hard one so that the
base-level cost of tuning it is comparable, not negligible.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng as _rng
from .data import Dataset, RawDataset, preprocess

__all__ = [
    "SynthDataset",
    "generate_corpus",
    "corpus_expected_labels",
    "save_corpus",
]

EASY_KINDS = ("linsep",)
HARD_KINDS = ("rings", "grid")


@dataclass(frozen=True)
class SynthDataset:
    dataset: Dataset
    kind: str
    expected_label: str


def _finish(name, X, y, rng, distractors, rotate, noise=0.0):
    n = len(X)
    if noise > 0.0:
        flips = rng.random(n) < noise
        y = np.where(flips, 1 - y, y)
    if distractors > 0:
        X = np.hstack([X, rng.normal(size=(n, distractors))])
    if rotate:
        q, _ = np.linalg.qr(rng.normal(size=(X.shape[1], X.shape[1])))
        X = X @ q
    order = rng.permutation(n)
    X, y = X[order], y[order]
    raw = RawDataset(
        name=name,
        columns=[(f"x{j}", "numeric", X[:, j].copy())
                 for j in range(X.shape[1])],
        labels=y.astype(np.int64),
        class_names=["c0", "c1"],
    )
    return preprocess(raw)


def _sizes(rng, n, imbalance):
    n1 = int(round(n / (1.0 + imbalance)))
    return n - n1, n1


def make_linsep(name, rng, n=400, dims=3, margin=0.7, clusters=2,
                aspect=4.0, noise=0.05, imbalance=1.0, distractors=0,
                rotate=True) -> Dataset:
    """Anisotropic Gaussian clusters on either side of a random
    hyperplane, kept apart by ``margin`` on each side, with a fraction
    ``noise`` of labels flipped. The two classes' clusters alternate
    along a tangent of the boundary (a staircase), so axis-parallel
    learners and neighborhood measures see an involved layout while one
    oblique plane still separates the geometry exactly."""
    w = rng.normal(size=dims)
    w /= np.linalg.norm(w)
    frame = np.eye(dims) - np.outer(w, w)
    tangent = frame @ rng.normal(size=dims)
    if np.linalg.norm(tangent) < 1e-9:
        tangent = np.zeros(dims)
    else:
        tangent /= np.linalg.norm(tangent)
    counts = _sizes(rng, n, imbalance)
    step = float(rng.uniform(1.3, 2.0))
    points = []
    labels = []
    for cls, side in ((0, -1.0), (1, 1.0)):
        quota = np.full(clusters, counts[cls] // clusters)
        quota[: counts[cls] % clusters] += 1
        for j, m in enumerate(quota):
            t_pos = (2 * j + cls - clusters + 0.5) * step
            center = (side * (margin + float(rng.uniform(0.4, 1.2))) * w
                      + t_pos * tangent
                      + rng.normal(scale=0.5, size=dims))
            axes = rng.normal(size=(dims, dims))
            scale = rng.uniform(0.5, aspect, size=dims)
            q, _ = np.linalg.qr(axes)
            pts = center + rng.normal(size=(m, dims)) @ (q * scale) @ q.T
            # reflect strays back across the margin plane of their side
            proj = pts @ w
            bad = side * proj < margin
            pts[bad] -= ((proj[bad] - side * margin)[:, None] * 2.0
                         * w[None, :])
            points.append(pts)
            labels.append(np.full(m, cls, np.int64))
    X = np.vstack(points)
    y = np.concatenate(labels)
    return _finish(name, X, y, rng, distractors, rotate, noise)


def _background(rng, m, sep, imbalance):
    """Two displaced Gaussian clouds, one per class: the coarse,
    linearly separable part of a hard dataset."""
    u = rng.normal(size=2)
    u /= np.linalg.norm(u)
    sizes = _sizes(rng, m, imbalance)
    pts = []
    cls = []
    for c, side in ((0, -1.0), (1, 1.0)):
        p = rng.normal(scale=0.9, size=(sizes[c], 2))
        p += side * (sep / 2.0) * u
        pts.append(p)
        cls.append(np.full(sizes[c], c, np.int64))
    return np.vstack(pts), np.concatenate(cls)


def make_rings(name, rng, n=300, n_rings=4, thickness=0.06, aspect=1.0,
               background=0.6, sep=2.8, noise=0.0, imbalance=1.0,
               distractors=1, rotate=True) -> Dataset:
    """Concentric thin rings with alternating classes, embedded in a
    coarse two-cloud background. A smooth kernel resolves the clouds
    but not the rings, so only the background share of the BAC is
    reachable without shrinking the kernel width to one ring gap."""
    m_bg = int(round(n * background))
    m_pat = n - m_bg
    pat_counts = list(_sizes(rng, m_pat, imbalance))
    points = []
    labels = []
    per_ring = [[], []]
    for ring in range(n_rings):
        per_ring[ring % 2].append(ring)
    # rescale the radii so the pattern spans the background region
    scale = 2.6 / n_rings
    for cls in (0, 1):
        rings = per_ring[cls]
        quota = np.full(len(rings), pat_counts[cls] // len(rings))
        quota[: pat_counts[cls] % len(rings)] += 1
        for ring, m in zip(rings, quota):
            radius = (1.0 + ring + rng.normal(0.0, thickness, size=m))
            angle = rng.uniform(0.0, 2.0 * np.pi, size=m)
            pts = np.column_stack([radius * np.cos(angle) * aspect,
                                   radius * np.sin(angle)]) * scale
            points.append(pts)
            labels.append(np.full(m, cls, np.int64))
    bg_pts, bg_cls = _background(rng, m_bg, sep, imbalance)
    X = np.vstack(points + [bg_pts])
    y = np.concatenate(labels + [bg_cls])
    return _finish(name, X, y, rng, distractors, rotate, noise)


def make_grid(name, rng, n=300, cells=3, spread=0.12, background=0.6,
              sep=2.8, noise=0.0, imbalance=1.0, distractors=1,
              rotate=True) -> Dataset:
    """Checkerboard of tight clusters with diagonally alternating
    classes (the XOR pattern generalized to cells x cells), embedded in
    a coarse two-cloud background like the rings family."""
    m_bg = int(round(n * background))
    m_pat = n - m_bg
    pat_counts = list(_sizes(rng, m_pat, imbalance))
    centers = [(i, j) for i in range(cells) for j in range(cells)]
    cls_of = {c: (c[0] + c[1]) % 2 for c in centers}
    mid = (cells - 1) / 2.0
    points = []
    labels = []
    for cls, total in ((0, pat_counts[0]), (1, pat_counts[1])):
        cell_list = [c for c in centers if cls_of[c] == cls]
        quota = np.full(len(cell_list), total // len(cell_list))
        quota[: total % len(cell_list)] += 1
        for (ci, cj), m in zip(cell_list, quota):
            pts = rng.normal(scale=spread, size=(m, 2))
            pts += np.array([ci - mid, cj - mid], dtype=np.float64)
            points.append(pts)
            labels.append(np.full(m, cls, np.int64))
    bg_pts, bg_cls = _background(rng, m_bg, sep, imbalance)
    X = np.vstack(points + [bg_pts])
    y = np.concatenate(labels + [bg_cls])
    return _finish(name, X, y, rng, distractors, rotate, noise)


def _easy(i, rng) -> SynthDataset:
    d = make_linsep(
        f"linsep{i:02d}", rng,
        n=int(rng.integers(240, 401)),
        dims=int(rng.integers(2, 6)),
        margin=float(rng.uniform(0.55, 0.9)),
        clusters=int(rng.integers(2, 6)),
        aspect=float(rng.uniform(1.5, 4.0)),
        noise=float(rng.uniform(0.08, 0.18)),
        imbalance=float(rng.uniform(1.0, 2.0)),
        distractors=int(rng.integers(0, 3)),
    )
    return SynthDataset(d, "linsep", "Defaults")


def _hard(i, rng) -> SynthDataset:
    if i % 4 == 1:
        d = make_rings(
            f"rings{i:02d}", rng,
            n=int(rng.integers(200, 361)),
            n_rings=int(rng.integers(3, 5)),
            thickness=float(rng.uniform(0.03, 0.06)),
            aspect=float(rng.uniform(1.0, 1.6)),
            background=float(rng.uniform(0.6, 0.75)),
            sep=float(rng.uniform(2.8, 4.0)),
            noise=float(rng.uniform(0.0, 0.06)),
            imbalance=float(rng.uniform(1.0, 2.0)),
            distractors=int(rng.integers(0, 3)),
        )
        return SynthDataset(d, "rings", "Tuning")
    d = make_grid(
        f"grid{i:02d}", rng,
        n=int(rng.integers(200, 361)),
        cells=int(rng.integers(3, 5)),
        spread=float(rng.uniform(0.08, 0.13)),
        background=float(rng.uniform(0.6, 0.75)),
        sep=float(rng.uniform(2.8, 4.0)),
        noise=float(rng.uniform(0.0, 0.06)),
        imbalance=float(rng.uniform(1.0, 2.0)),
        distractors=int(rng.integers(0, 3)),
    )
    return SynthDataset(d, "grid", "Tuning")


def generate_corpus(n_datasets: int = 40, seed: int = 7) -> list:
    """Deterministic planted corpus: half expected Defaults, half
    expected Tuning, in interleaved order."""
    if n_datasets < 2:
        raise ValueError("need at least 2 datasets")
    out = []
    for i in range(n_datasets):
        rng = _rng.stream("synth", seed, i)
        out.append(_easy(i, rng) if i % 2 == 0 else _hard(i, rng))
    return out


def corpus_expected_labels(corpus) -> dict:
    return {s.dataset.name: s.expected_label for s in corpus}


def save_corpus(corpus, directory) -> list:
    """Write each dataset as a canonical CSV plus an
    ``expected_labels.json`` sidecar; returns the dataset file paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for s in corpus:
        path = directory / f"{s.dataset.name}.csv"
        s.dataset.to_csv(path)
        paths.append(path)
    sidecar = {
        s.dataset.name: {"kind": s.kind, "expected_label": s.expected_label}
        for s in corpus
    }
    with open(directory / "expected_labels.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths
