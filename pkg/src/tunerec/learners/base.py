"""Shared estimator plumbing: the fit/predict API, learner specs,
declared hyperparameter spaces, and model (de)serialization."""

import pickle
from dataclasses import dataclass, field

import numpy as np

from ..spaces import HPParam, HPSpace, HPSetting, svm_space

__all__ = [
    "LEARNER_KINDS",
    "LearnerSpec",
    "BaseClassifier",
    "declared_space",
    "make_learner",
    "save_model",
    "load_model",
]

LEARNER_KINDS = (
    "svm_rbf",
    "cart",
    "random_forest",
    "knn",
    "naive_bayes",
    "linear",
    "stump",
    # baseline anchors, not tunable and never landmarked
    "constant",
    "random",
)

_MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LearnerSpec:
    """A learner kind plus a concrete hyperparameter setting.

    Setting keys must be a subset of the kind's declared space; values
    are validated against the declared ranges.
    """

    kind: str
    setting: HPSetting = field(default_factory=HPSetting)

    def __post_init__(self):
        if self.kind not in LEARNER_KINDS:
            raise ValueError(f"unknown learner kind {self.kind!r}")
        if not isinstance(self.setting, HPSetting):
            object.__setattr__(self, "setting", HPSetting(self.setting))
        declared_space(self.kind).validate(self.setting)


class BaseClassifier:
    """Minimal estimator API shared by every learner.

    Subclasses store constructor arguments verbatim (``get_params``
    returns them), implement ``fit(X, y, n_classes=None)`` and
    ``predict_scores(X)``; scores are per-class, nonnegative, and sum
    to 1 per row. ``predict`` is the argmax with ties broken by lowest
    class index.
    """

    def get_params(self) -> dict:
        return {
            k: v for k, v in vars(self).items() if not k.endswith("_")
        }

    def set_params(self, **params) -> "BaseClassifier":
        for k, v in params.items():
            if k.endswith("_") or k not in vars(self):
                raise ValueError(f"unknown parameter {k!r}")
            setattr(self, k, v)
        return self

    def _setup_fit(self, X, y, n_classes):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("X must be 2-d")
        if len(y) != X.shape[0]:
            raise ValueError("X and y have different lengths")
        if len(y) == 0:
            raise ValueError("empty training set")
        self.n_features_ = X.shape[1]
        self.n_classes_ = int(n_classes) if n_classes else int(y.max()) + 1
        if y.min() < 0 or y.max() >= self.n_classes_:
            raise ValueError("labels outside [0, n_classes)")
        return X, y

    def _check_predict(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features_:
            raise ValueError(
                f"instance width {X.shape[1] if X.ndim == 2 else '?'} does "
                f"not match training width {self.n_features_}"
            )
        return X

    def fit(self, X, y, n_classes=None):
        raise NotImplementedError

    def predict_scores(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_scores(X), axis=1)


def declared_space(kind: str, n_features: int | None = None) -> HPSpace:
    """The tunable hyperparameter space for a learner kind.

    Learners without tunable hyperparameters (naive Bayes, linear,
    stump, and the baseline anchors) declare an empty space.
    """
    if kind == "svm_rbf":
        space = svm_space()
        if n_features:
            return HPSpace((
                space.params[0],
                HPParam("gamma", "real", 2.0 ** -15, 2.0 ** 15,
                        scale="log2", default=1.0 / n_features),
            ))
        return space
    if kind == "cart":
        return HPSpace((
            HPParam("cp", "real", 0.0001, 0.1, default=0.01),
            HPParam("minsplit", "integer", 1, 50, default=20),
            HPParam("minbucket", "integer", 1, 50, default=7),
            HPParam("maxdepth", "integer", 1, 30, default=30),
        ))
    if kind == "random_forest":
        return HPSpace((
            HPParam("ntree", "integer", 1, 1024, default=500),
            HPParam("nodesize", "integer", 1, 20, default=1),
        ))
    if kind == "knn":
        return HPSpace((
            HPParam("k", "integer", 1, 50, default=7),
        ))
    if kind in ("naive_bayes", "linear", "stump", "constant", "random"):
        return HPSpace(())
    raise ValueError(f"unknown learner kind {kind!r}")


def make_learner(spec: LearnerSpec, seed: int | None = None) -> BaseClassifier:
    """Instantiate a learner from its spec, filling unset
    hyperparameters with the declared defaults."""
    from .svm import SMOSVC
    from .tree import DecisionTreeClassifier, DecisionStump
    from .forest import RandomForestClassifier
    from .neighbors import KNeighborsClassifier
    from .naive_bayes import GaussianNB
    from .linear import LogisticRegressionGD
    from .baselines import ConstantClassifier, RandomClassifier

    if not isinstance(spec, LearnerSpec):
        spec = LearnerSpec(*spec) if isinstance(spec, tuple) else LearnerSpec(spec)
    space = declared_space(spec.kind)
    params = {p.name: p.default for p in space}
    params.update(spec.setting.values)

    if spec.kind == "svm_rbf":
        return SMOSVC(C=params["C"], gamma=params["gamma"])
    if spec.kind == "cart":
        return DecisionTreeClassifier(
            cp=params["cp"], minsplit=params["minsplit"],
            minbucket=params["minbucket"], maxdepth=params["maxdepth"],
        )
    if spec.kind == "random_forest":
        return RandomForestClassifier(
            ntree=params["ntree"], nodesize=params["nodesize"],
            random_state=seed,
        )
    if spec.kind == "knn":
        return KNeighborsClassifier(k=params["k"])
    if spec.kind == "naive_bayes":
        return GaussianNB()
    if spec.kind == "linear":
        return LogisticRegressionGD()
    if spec.kind == "stump":
        return DecisionStump()
    if spec.kind == "constant":
        return ConstantClassifier()
    if spec.kind == "random":
        return RandomClassifier(random_state=seed)
    raise ValueError(f"unknown learner kind {spec.kind!r}")


def save_model(model, path) -> None:
    """Serialize any trained learner (or meta-model) with a format
    version so stale caches are detected on load."""
    payload = {"format_version": _MODEL_FORMAT_VERSION, "model": model}
    with open(path, "wb") as fh:
        pickle.dump(payload, fh)


def load_model(path):
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    if payload.get("format_version") != _MODEL_FORMAT_VERSION:
        raise ValueError(
            f"{path}: model format {payload.get('format_version')!r} not "
            f"supported (expected {_MODEL_FORMAT_VERSION})"
        )
    return payload["model"]
