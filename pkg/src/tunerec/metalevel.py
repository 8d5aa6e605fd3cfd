"""Meta-level learning: assemble meta-datasets, evaluate meta-learners
under the experimental setups, rank meta-features by forest importance,
and recommend Tuning or Defaults for new datasets.

Class convention: Tuning is class 0, Defaults is class 1 and the
positive class for AUC. Reported per-example scores are always for the
Tuning class.
"""

import csv
import pickle
import time
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .data import Dataset
from .evaluation import auc, stratified_kfold
from .labeling import MetaLabel
from .learners import LearnerSpec, RandomForestClassifier, declared_space, make_learner
from .metafeatures import MetaFeatureVector, extract_all
from .tuning import sample_setting

__all__ = [
    "CLASSES",
    "SETUPS",
    "UnsupportedSetupError",
    "MetaExample",
    "MetaDataset",
    "MetaCVResult",
    "ImportanceReport",
    "MetaModel",
    "Recommendation",
    "assemble",
    "run_meta_cv",
    "sfs_select",
    "smote",
    "rf_importance",
    "train_final",
    "recommend",
    "save_meta_model",
    "load_meta_model",
    "write_meta_dataset",
    "read_meta_dataset",
]

CLASSES = ("Tuning", "Defaults")
SETUPS = ("none", "featsel", "tuned", "smote", "smote+featsel",
          "smote+tuned")

_MODEL_FORMAT_VERSION = 1


class UnsupportedSetupError(ValueError):
    """The requested setup cannot apply to this learner (for example
    meta-tuning a learner that declares no hyperparameter space)."""


@dataclass(frozen=True)
class MetaExample:
    dataset: str
    features: MetaFeatureVector
    label: MetaLabel


@dataclass(frozen=True)
class MetaDataset:
    """Datasets as examples: one meta-feature vector and one
    Tuning/Defaults label each, under a single schema."""

    alpha: float
    examples: tuple
    schema: tuple

    def __post_init__(self):
        names = [e.dataset for e in self.examples]
        if len(set(names)) != len(names):
            raise ValueError("duplicate dataset names in meta-dataset")
        for e in self.examples:
            if e.features.names != self.schema:
                raise ValueError(
                    f"example {e.dataset!r} does not match the schema"
                )
        if len(set(e.label.label for e in self.examples)) < 2:
            raise ValueError("meta-dataset must contain both classes")

    def __len__(self):
        return len(self.examples)

    def features_matrix(self) -> np.ndarray:
        return np.vstack([e.features.array() for e in self.examples])

    def label_array(self) -> np.ndarray:
        return np.array([CLASSES.index(e.label.label)
                         for e in self.examples], dtype=np.int64)

    def class_counts(self) -> dict:
        y = self.label_array()
        return {c: int((y == i).sum()) for i, c in enumerate(CLASSES)}


def assemble(vectors, labels, alpha) -> MetaDataset:
    """Join vectors and labels on dataset name at one alpha.

    Every labeled dataset must have a vector (vectors without labels
    are ignored); the result must contain both classes.
    """
    by_name = {}
    for v in vectors:
        if v.dataset in by_name:
            raise ValueError(f"duplicate vector for dataset {v.dataset!r}")
        by_name[v.dataset] = v
    examples = []
    for lab in labels:
        if lab.alpha != alpha:
            raise ValueError(
                f"label for {lab.dataset!r} was made at alpha={lab.alpha}, "
                f"not {alpha}"
            )
        if lab.dataset not in by_name:
            raise ValueError(f"no meta-feature vector for labeled dataset "
                             f"{lab.dataset!r}")
        examples.append(MetaExample(lab.dataset, by_name[lab.dataset], lab))
    if not examples:
        raise ValueError("no labeled datasets to assemble")
    schema = examples[0].features.names
    return MetaDataset(alpha=alpha, examples=tuple(examples), schema=schema)


@dataclass(frozen=True)
class _Scaler:
    """Column standardization fitted on a training split only."""

    mean: np.ndarray
    sd: np.ndarray

    @staticmethod
    def fit(X) -> "_Scaler":
        sd = X.std(axis=0, ddof=1) if len(X) > 1 else np.ones(X.shape[1])
        return _Scaler(mean=X.mean(axis=0), sd=np.where(sd > 0, sd, 1.0))

    def transform(self, X) -> np.ndarray:
        return (X - self.mean) / self.sd


def smote(X, y, rate: int = 2, k: int = 5, seed: int = 0,
          audit=None, row_ids=None):
    """Oversample the minority class by interpolation.

    Each original minority point contributes ``rate - 1`` synthetic
    points, placed uniformly on the segment toward one of its ``k``
    nearest minority neighbors (k capped at minority size - 1), so the
    resulting minority count is ``rate`` times the original. When
    ``audit`` and ``row_ids`` are given, the interpolation bases are
    checked to stay inside the allowed rows.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if rate < 2:
        raise ValueError("rate must be at least 2")
    counts = np.bincount(y)
    minority = int(np.argmin(counts))
    idx = np.flatnonzero(y == minority)
    if len(idx) < 2:
        raise ValueError("minority class needs at least 2 examples")
    k = min(k, len(idx) - 1)
    Xm = X[idx]
    sq = np.einsum("ij,ij->i", Xm, Xm)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (Xm @ Xm.T)
    np.fill_diagonal(d2, np.inf)
    neighbors = np.argsort(d2, axis=1, kind="stable")[:, :k]

    rng = _rng.stream("smote", seed)
    synth = []
    bases = []
    for _ in range(rate - 1):
        for i in range(len(idx)):
            j = neighbors[i, int(rng.integers(0, k))]
            t = rng.uniform(0.0, 1.0)
            synth.append(Xm[i] + t * (Xm[j] - Xm[i]))
            bases.extend([idx[i], idx[j]])
    if audit is not None and row_ids is not None:
        row_ids = np.asarray(row_ids)
        audit.check_subset("smote-bases", row_ids[np.array(bases)], row_ids)
    X_aug = np.vstack([X, np.vstack(synth)])
    y_aug = np.concatenate([y, np.full(len(synth), minority, np.int64)])
    return X_aug, y_aug


def _pooled_inner_auc(X, y, spec, setting, feats, k, seed):
    """Defaults-class AUC pooled over an inner stratified k-fold."""
    folds = stratified_kfold(y, k, _rng.derive_seed("inner-meta", seed))
    pooled_truth = []
    pooled_scores = []
    for f in range(k):
        tr = folds.train_indices(f)
        te = folds.test_indices(f)
        model = make_learner(LearnerSpec(spec.kind, setting),
                             seed=_rng.derive_seed("inner-model", seed, f))
        model.fit(X[tr][:, feats], y[tr], n_classes=2)
        pooled_truth.append(y[te])
        pooled_scores.append(model.predict_scores(X[te][:, feats])[:, 1])
    return auc(np.concatenate(pooled_truth), np.concatenate(pooled_scores))


def sfs_select(X, y, spec, seed: int = 0, min_improvement: float = 0.01,
               inner_k: int = 3) -> list:
    """Greedy forward feature selection by inner-CV AUC.

    The first feature is always taken (the best singleton); afterwards
    a feature is added only while the best candidate improves the AUC
    by at least ``min_improvement``. Returns indices in selection
    order, nonempty and duplicate-free.
    """
    n_features = X.shape[1]
    if n_features < 2:
        raise ValueError("feature selection needs at least 2 features")
    selected = []
    current = -np.inf
    remaining = list(range(n_features))
    while remaining:
        best_j = None
        best_auc = -np.inf
        for j in remaining:
            candidate = selected + [j]
            try:
                score = _pooled_inner_auc(
                    X, y, spec, spec.setting, np.array(candidate),
                    inner_k, _rng.derive_seed("sfs", seed, len(candidate)),
                )
            except Exception:
                score = 0.0
            if score > best_auc:
                best_auc = score
                best_j = j
        if selected and best_auc - current < min_improvement:
            break
        selected.append(best_j)
        remaining.remove(best_j)
        current = best_auc
    return selected


def _tune_meta(X, y, spec, seed: int, budget: int, inner_k: int = 3):
    """Random search of the learner's declared space, judged by pooled
    inner-CV AUC; earliest evaluation wins ties."""
    space = declared_space(spec.kind, n_features=X.shape[1])
    if len(space) == 0:
        raise UnsupportedSetupError(
            f"learner {spec.kind!r} has no tunable hyperparameters"
        )
    rng = _rng.stream("meta-tune", seed)
    feats = np.arange(X.shape[1])
    best_setting = None
    best_score = -np.inf
    for t in range(budget):
        setting = sample_setting(space, rng)
        try:
            score = _pooled_inner_auc(X, y, spec, setting, feats, inner_k,
                                      _rng.derive_seed("tune-eval", seed, t))
        except Exception:
            score = 0.0
        if score > best_score:
            best_score = score
            best_setting = setting
    return best_setting


def _apply_setup(X_tr, y_tr, spec, setup, seed, smote_rate, smote_k,
                 tune_budget, audit=None, row_ids=None):
    """Training-split-only setup application. Returns the augmented
    split, the selected feature indices, and the learner setting."""
    if "smote" in setup.split("+"):
        X_tr, y_tr = smote(X_tr, y_tr, rate=smote_rate, k=smote_k,
                           seed=_rng.derive_seed("setup-smote", seed),
                           audit=audit, row_ids=row_ids)
    feats = np.arange(X_tr.shape[1])
    setting = spec.setting
    if "featsel" in setup.split("+"):
        feats = np.array(sfs_select(
            X_tr, y_tr, spec, seed=_rng.derive_seed("setup-sfs", seed)))
    if "tuned" in setup.split("+"):
        setting = _tune_meta(X_tr, y_tr, spec,
                             seed=_rng.derive_seed("setup-tune", seed),
                             budget=tune_budget)
    return X_tr, y_tr, feats, setting


def _check_setup(spec, setup):
    if setup not in SETUPS:
        raise ValueError(f"unknown setup {setup!r}; choose from {SETUPS}")
    if "tuned" in setup.split("+") and len(declared_space(spec.kind)) == 0:
        raise UnsupportedSetupError(
            f"setup {setup!r} needs a tunable space but {spec.kind!r} "
            "declares none"
        )


@dataclass(frozen=True)
class MetaCVResult:
    """Repeated stratified CV outcome of one (learner, setup) cell."""

    learner: str
    setup: str
    rep_aucs: tuple
    pooled_scores: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)

    @property
    def mean_auc(self) -> float:
        return float(np.mean(self.rep_aucs))

    @property
    def sd_auc(self) -> float:
        if len(self.rep_aucs) < 2:
            return 0.0
        return float(np.std(self.rep_aucs, ddof=1))


def run_meta_cv(md: MetaDataset, spec: LearnerSpec, setup: str = "none",
                repetitions: int = 30, seed: int = 0, folds: int = 10,
                smote_rate: int = 2, smote_k: int = 5,
                tune_budget: int = 300, audit=None) -> MetaCVResult:
    """Repeated stratified CV of a meta-learner under one setup.

    Per repetition: fresh stratified folds; per training split, fit a
    scaler, then apply the setup (SMOTE first when combined; feature
    selection and meta-tuning judged by inner 3-fold AUC and never
    combined); score the held-out fold. The repetition's AUC pools all
    out-of-fold Defaults-class scores. ``pooled_scores`` holds the
    out-of-fold Tuning-class score per example and repetition.
    """
    _check_setup(spec, setup)
    X = md.features_matrix()
    y = md.label_array()
    n = len(y)
    rep_aucs = []
    pooled = np.zeros((repetitions, n))
    for rep in range(repetitions):
        assignment = stratified_kfold(
            y, folds, _rng.derive_seed("meta-folds", seed, rep))
        defaults_scores = np.zeros(n)
        for f in range(folds):
            tr = assignment.train_indices(f)
            te = assignment.test_indices(f)
            if audit is not None:
                audit.check_split(n, tr, te)
            scaler = _Scaler.fit(X[tr])
            X_tr, y_tr, feats, setting = _apply_setup(
                scaler.transform(X[tr]), y[tr], spec, setup,
                seed=_rng.derive_seed("meta-setup", seed, rep, f),
                smote_rate=smote_rate, smote_k=smote_k,
                tune_budget=tune_budget, audit=audit, row_ids=tr,
            )
            if audit is not None:
                audit.check_subset("sfs-features", feats,
                                   np.arange(X.shape[1]))
            model = make_learner(
                LearnerSpec(spec.kind, setting),
                seed=_rng.derive_seed("meta-model", seed, rep, f))
            model.fit(X_tr[:, feats], y_tr, n_classes=2)
            scores = model.predict_scores(scaler.transform(X[te])[:, feats])
            defaults_scores[te] = scores[:, 1]
        rep_aucs.append(auc(y, defaults_scores))
        pooled[rep] = 1.0 - defaults_scores
    return MetaCVResult(learner=spec.kind, setup=setup,
                        rep_aucs=tuple(rep_aucs), pooled_scores=pooled,
                        labels=y)


@dataclass(frozen=True)
class ImportanceReport:
    """Forest importance ranking: (name, mean Gini decrease over
    repetitions, sd), sorted descending with schema order breaking
    ties."""

    ranking: tuple
    per_repetition: np.ndarray = field(repr=False)
    schema: tuple = ()

    def top(self, n: int) -> tuple:
        return tuple(name for name, _, _ in self.ranking[:n])


def rf_importance(md: MetaDataset, repetitions: int = 30, seed: int = 0,
                  ntree: int = 500) -> ImportanceReport:
    """Mean decrease in Gini impurity per meta-feature, averaged over
    repeated forest fits on the full meta-dataset."""
    X = md.features_matrix()
    y = md.label_array()
    per_rep = np.zeros((repetitions, X.shape[1]))
    for rep in range(repetitions):
        forest = RandomForestClassifier(
            ntree=ntree, random_state=_rng.derive_seed("rf-imp", seed, rep))
        forest.fit(X, y, n_classes=2)
        per_rep[rep] = forest.importances_
    means = per_rep.mean(axis=0)
    sds = (per_rep.std(axis=0, ddof=1) if repetitions > 1
           else np.zeros(X.shape[1]))
    order = np.argsort(-means, kind="stable")
    ranking = tuple((md.schema[j], float(means[j]), float(sds[j]))
                    for j in order)
    return ImportanceReport(ranking=ranking, per_repetition=per_rep,
                            schema=md.schema)


@dataclass(frozen=True)
class Recommendation:
    dataset: str
    label: str
    score: float
    threshold: float

    def __post_init__(self):
        if (self.label == "Tuning") != (self.score >= self.threshold):
            raise ValueError("label inconsistent with score and threshold")


@dataclass
class MetaModel:
    """A deployable meta-model: schema, fitted scaler, selected
    features, the trained learner, and the decision threshold."""

    schema: tuple
    alpha: float
    learner: str
    setup: str
    scaler: _Scaler
    feature_idx: np.ndarray
    model: object
    threshold: float = 0.5
    format_version: int = _MODEL_FORMAT_VERSION

    def tuning_score(self, values: np.ndarray) -> float:
        row = self.scaler.transform(values.reshape(1, -1))
        return float(self.model.predict_scores(
            row[:, self.feature_idx])[0, 0])


def train_final(md: MetaDataset, spec: LearnerSpec, setup: str = "none",
                seed: int = 0, threshold: float = 0.5,
                smote_rate: int = 2, smote_k: int = 5,
                tune_budget: int = 300) -> MetaModel:
    """Fit one meta-model on the whole meta-dataset under a setup."""
    _check_setup(spec, setup)
    X = md.features_matrix()
    y = md.label_array()
    scaler = _Scaler.fit(X)
    X_tr, y_tr, feats, setting = _apply_setup(
        scaler.transform(X), y, spec, setup,
        seed=_rng.derive_seed("final-setup", seed),
        smote_rate=smote_rate, smote_k=smote_k, tune_budget=tune_budget,
    )
    model = make_learner(LearnerSpec(spec.kind, setting),
                         seed=_rng.derive_seed("final-model", seed))
    model.fit(X_tr[:, feats], y_tr, n_classes=2)
    return MetaModel(schema=md.schema, alpha=md.alpha, learner=spec.kind,
                     setup=setup, scaler=scaler, feature_idx=feats,
                     model=model, threshold=threshold)


def recommend(model: MetaModel, target) -> Recommendation:
    """Predict Tuning or Defaults for a dataset or an already
    extracted vector; the vector schema must match the model's."""
    if isinstance(target, MetaFeatureVector):
        vector = target
    elif isinstance(target, Dataset):
        vector = extract_all(target, include_rl=len(model.schema) == 90)
    else:
        raise TypeError("target must be a Dataset or MetaFeatureVector")
    if vector.names != model.schema:
        raise ValueError(
            f"vector for {vector.dataset!r} has {len(vector.names)} "
            f"features but the model expects {len(model.schema)}"
        )
    score = model.tuning_score(vector.array())
    label = "Tuning" if score >= model.threshold else "Defaults"
    return Recommendation(dataset=vector.dataset, label=label, score=score,
                          threshold=model.threshold)


def save_meta_model(model: MetaModel, path) -> None:
    with open(path, "wb") as fh:
        pickle.dump({"format_version": _MODEL_FORMAT_VERSION,
                     "model": model}, fh)


def load_meta_model(path) -> MetaModel:
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    version = payload.get("format_version")
    if version != _MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version}")
    return payload["model"]


def write_meta_dataset(md: MetaDataset, path, header_lines=()) -> None:
    """One row per dataset: name, meta-features under the schema
    header, then the label."""
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(f"# alpha={md.alpha!r}\n")
        writer = csv.writer(fh)
        writer.writerow(["dataset", *md.schema, "label"])
        for e in md.examples:
            writer.writerow([e.dataset,
                             *(repr(float(x)) for x in e.features.array()),
                             e.label.label])


def read_meta_dataset(path) -> MetaDataset:
    """Rebuild a meta-dataset from CSV. Only the label class is stored,
    so the labels carry placeholder p-values consistent with it."""
    alpha = None
    rows = []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("# alpha="):
                alpha = float(line.split("=", 1)[1])
            elif not line.startswith("#"):
                rows.append(line)
    if alpha is None:
        raise ValueError(f"{path}: missing alpha header")
    reader = csv.reader(rows)
    header = next(reader)
    if header[0] != "dataset" or header[-1] != "label":
        raise ValueError(f"{path}: unexpected meta-dataset header")
    schema = tuple(header[1:-1])
    examples = []
    for row in reader:
        name = row[0]
        values = dict(zip(schema, (float(x) for x in row[1:-1])))
        label = MetaLabel(
            dataset=name, label=row[-1], alpha=alpha,
            p_value=0.0 if row[-1] == "Tuning" else 1.0,
            chosen_default="", paired_n=0,
        )
        examples.append(MetaExample(
            name, MetaFeatureVector(dataset=name, values=values), label))
    return MetaDataset(alpha=alpha, examples=tuple(examples), schema=schema)
