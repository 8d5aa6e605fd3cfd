"""Random-search hyperparameter tuning under nested cross-validation.

This is the base level of the pipeline: for every (seed, outer fold) it
searches the SVM space on the outer-training split using inner folds,
retrains the winner, and scores it against every default setting on the
outer-test fold. The paired records it produces are the meta-knowledge
everything downstream consumes.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .evaluation import bac, stratified_kfold
from .learners import LearnerSpec, make_learner
from .records import EvaluationRecord, RecordStore
from .spaces import HPSpace, HPSetting, svm_space

__all__ = [
    "TuningConfig",
    "TuningOutcome",
    "sample_setting",
    "random_search",
    "run_base_level",
    "reference_default",
    "builtin_defaults",
    "resolve_gamma",
]

REFERENCE_DEFAULT_ID = "default"


def reference_default() -> tuple:
    """The reference default setting: C=1, gamma=1/N (None marks the
    dataset-dependent gamma, resolved against the encoded matrix)."""
    return (REFERENCE_DEFAULT_ID, HPSetting({"C": 1.0, "gamma": None}))


def builtin_defaults() -> list:
    """Reference default plus one additional fixed default.

    The extra setting (C=2^5, gamma=2^-5) is a placeholder standing in
    for externally supplied optimized defaults; it does not come from
    any published source and real runs should configure their own.
    """
    return [
        reference_default(),
        ("default2", HPSetting({"C": 2.0 ** 5, "gamma": 2.0 ** -5})),
    ]


def resolve_gamma(setting: HPSetting, n_features: int) -> HPSetting:
    if setting.get("gamma") is None:
        values = dict(setting.values)
        values["gamma"] = 1.0 / n_features
        return HPSetting(values)
    return setting


@dataclass(frozen=True)
class TuningConfig:
    """Run configuration for the base level (outer/inner fold counts,
    budget, seeds, optional per-dataset walltime in seconds)."""

    budget: int = 300
    outer_k: int = 10
    inner_k: int = 3
    seeds: tuple = tuple(range(1, 11))
    walltime_per_dataset: float | None = None

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if not self.seeds:
            raise ValueError("seeds must be nonempty")

    @property
    def total_evaluations(self) -> int:
        return self.outer_k * self.inner_k * self.budget * len(self.seeds)


@dataclass
class TuningOutcome:
    """All base-level records for one dataset.

    ``complete`` is False when the walltime budget interrupted the run;
    incomplete outcomes are excluded from labeling.
    """

    dataset: str
    tuned_records: list
    default_records: list
    budget: int
    seeds: tuple
    outer_k: int
    inner_k: int
    total_evaluations: int
    complete: bool = True
    default_ids: tuple = field(default_factory=tuple)

    def default_records_for(self, default_id: str) -> list:
        key = f"default:{default_id}"
        return [r for r in self.default_records if r.strategy == key]

    @staticmethod
    def from_records(dataset, records, config, default_ids) -> "TuningOutcome":
        """Rebuild an outcome from (possibly cached) records, checking
        that tuned and default records cover identical (seed, fold)
        pairs."""
        tuned = [r for r in records if r.dataset == dataset and r.strategy == "tuned"]
        defaults = [r for r in records
                    if r.dataset == dataset and r.strategy.startswith("default:")]
        expected = {(s, f) for s in config.seeds for f in range(config.outer_k)}
        covered = {(r.seed, r.outer_fold) for r in tuned}
        complete = covered == expected
        for did in default_ids:
            cells = {(r.seed, r.outer_fold)
                     for r in defaults if r.strategy == f"default:{did}"}
            complete = complete and cells == expected
        return TuningOutcome(
            dataset=dataset, tuned_records=tuned, default_records=defaults,
            budget=config.budget, seeds=tuple(config.seeds),
            outer_k=config.outer_k, inner_k=config.inner_k,
            total_evaluations=config.total_evaluations, complete=complete,
            default_ids=tuple(default_ids),
        )


def sample_setting(space: HPSpace, rng: np.random.Generator) -> HPSetting:
    """Draw one setting: log2-scaled reals as 2**U(log2 lo, log2 hi),
    linear reals uniform, integers uniform inclusive, categoricals
    uniform."""
    if len(space) == 0:
        raise ValueError("cannot sample from an empty space")
    values = {}
    for p in space:
        if p.type == "categorical":
            values[p.name] = p.options[int(rng.integers(0, len(p.options)))]
        elif p.type == "integer":
            values[p.name] = int(rng.integers(p.lo, p.hi + 1))
        elif p.scale == "log2":
            u = rng.uniform(np.log2(p.lo), np.log2(p.hi))
            values[p.name] = float(2.0 ** u)
        else:
            values[p.name] = float(rng.uniform(p.lo, p.hi))
    return HPSetting(values)


def _fit_score(setting, d_train, d_test, kind="svm_rbf"):
    """Train one model and return its BAC on the test split."""
    setting = resolve_gamma(setting, d_train.n_features)
    model = make_learner(LearnerSpec(kind, setting))
    model.fit(d_train.features, d_train.labels, n_classes=d_train.n_classes)
    return bac(d_test.labels, model.predict(d_test.features))


def random_search(d, space, budget, inner_folds, rng, audit=None,
                  outer_context=None):
    """Evaluate ``budget`` sampled settings by mean BAC over the inner
    folds of ``d``; returns (best setting, history).

    History entries are (setting, mean inner BAC, failed); failed
    evaluations score 0 and count against the budget. Ties break toward
    the earliest evaluation.
    """
    inner_splits = []
    for f in range(inner_folds.k):
        tr = inner_folds.train_indices(f)
        te = inner_folds.test_indices(f)
        if audit is not None and outer_context is not None:
            outer_train, outer_test = outer_context
            audit.check_nested(outer_train, outer_test,
                               outer_train[tr], outer_train[te])
        inner_splits.append((d.subset(tr), d.subset(te)))

    best_setting = None
    best_score = -np.inf
    history = []
    for _ in range(int(budget)):
        setting = sample_setting(space, rng)
        failed = False
        scores = []
        for d_tr, d_te in inner_splits:
            try:
                scores.append(_fit_score(setting, d_tr, d_te))
            except Exception:
                failed = True
                scores.append(0.0)
        mean_score = float(np.mean(scores))
        history.append((setting, mean_score, failed))
        if mean_score > best_score:
            best_score = mean_score
            best_setting = setting
    return best_setting, history


def run_base_level(d, defaults, config: TuningConfig,
                   store: RecordStore | None = None,
                   audit=None) -> TuningOutcome:
    """Produce the full paired meta-knowledge for one dataset.

    ``defaults`` is a list of (id, HPSetting) and must include the
    reference default (C=1, gamma=1/N). Completed (strategy, seed,
    fold) cells already present in ``store`` are skipped, which makes
    interrupted runs resumable.
    """
    if not defaults:
        raise ValueError("defaults must be nonempty")
    default_ids = [did for did, _ in defaults]
    if len(set(default_ids)) != len(default_ids):
        raise ValueError("duplicate default ids")

    def is_reference(setting):
        gamma = setting.get("gamma")
        return setting.get("C") == 1.0 and (
            gamma is None or gamma == 1.0 / d.n_features
        )

    if not any(is_reference(setting) for _, setting in defaults):
        raise ValueError(
            "defaults must include the reference default C=1, gamma=1/N"
        )

    space = svm_space()
    tuned_records = []
    default_records = []
    started = time.perf_counter()
    complete = True

    def walltime_exceeded():
        return (config.walltime_per_dataset is not None
                and time.perf_counter() - started > config.walltime_per_dataset)

    for seed in config.seeds:
        if not complete:
            break
        outer = stratified_kfold(d, config.outer_k, seed)
        for fold in range(config.outer_k):
            if walltime_exceeded():
                complete = False
                break
            tuned_key = (d.name, "tuned", seed, fold)
            keys = [tuned_key] + [
                (d.name, f"default:{did}", seed, fold) for did in default_ids
            ]
            if store is not None and all(k in store for k in keys):
                continue

            train_idx = outer.train_indices(fold)
            test_idx = outer.test_indices(fold)
            if audit is not None:
                audit.check_split(d.n_instances, train_idx, test_idx)
            d_tr = d.subset(train_idx)
            d_te = d.subset(test_idx)

            if store is None or tuned_key not in store:
                t0 = time.perf_counter()
                inner = stratified_kfold(
                    d_tr, config.inner_k,
                    _rng.derive_seed("inner-folds", d.name, seed, fold),
                )
                search_rng = _rng.stream("search", d.name, seed, fold)
                best, _history = random_search(
                    d_tr, space, config.budget, inner, search_rng,
                    audit=audit, outer_context=(train_idx, test_idx),
                )
                score = _fit_score(best, d_tr, d_te)
                rec = EvaluationRecord(
                    dataset=d.name, strategy="tuned", seed=seed,
                    outer_fold=fold, score=score,
                    runtime=time.perf_counter() - t0,
                    setting=dict(resolve_gamma(best, d.n_features).values),
                )
                tuned_records.append(rec)
                if store is not None:
                    store.append(rec)

            for did, setting in defaults:
                key = (d.name, f"default:{did}", seed, fold)
                if store is not None and key in store:
                    continue
                t0 = time.perf_counter()
                score = _fit_score(setting, d_tr, d_te)
                rec = EvaluationRecord(
                    dataset=d.name, strategy=f"default:{did}", seed=seed,
                    outer_fold=fold, score=score,
                    runtime=time.perf_counter() - t0,
                    setting=dict(resolve_gamma(setting, d.n_features).values),
                )
                default_records.append(rec)
                if store is not None:
                    store.append(rec)

    if store is not None:
        return TuningOutcome.from_records(
            d.name, list(store.records_for(d.name)), config, default_ids
        )
    outcome = TuningOutcome.from_records(
        d.name, tuned_records + default_records, config, default_ids
    )
    outcome.complete = outcome.complete and complete
    return outcome
