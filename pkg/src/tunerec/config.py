"""Run configuration for the pipeline.

A run is described by a flat INI file with sections; :func:`load_config`
parses and validates it into a frozen :class:`RunConfig`. Validation
collects every violation before raising, so a bad file is fixed in one
pass. The config carries a short content hash that output writers embed
in their header comments.
"""

import configparser
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .labeling import ALPHAS
from .learners import LEARNER_KINDS
from .metalevel import SETUPS
from .spaces import HPSetting
from .tuning import REFERENCE_DEFAULT_ID, TuningConfig, reference_default

__all__ = [
    "ConfigError",
    "RunConfig",
    "load_config",
    "load_defaults_file",
    "default_config_text",
]

# Meta-learners evaluated by default: every kind with a probability
# output; the baseline anchors are opted into explicitly when wanted.
DEFAULT_META_LEARNERS = (
    "svm_rbf",
    "cart",
    "random_forest",
    "knn",
    "naive_bayes",
    "linear",
)


class ConfigError(ValueError):
    """Invalid run configuration; the message lists every violation."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__(
            "invalid configuration:\n"
            + "\n".join(f"  - {v}" for v in self.violations)
        )


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for a full run.

    ``extra_defaults`` holds the additional default settings beyond the
    reference default (C=1, gamma=1/N), which is always included.
    """

    dataset_dir: Path
    output_dir: Path
    budget: int = 300
    outer_k: int = 10
    inner_k: int = 3
    seeds: tuple = tuple(range(1, 11))
    walltime_per_dataset: float | None = None
    alphas: tuple = ALPHAS
    meta_learners: tuple = DEFAULT_META_LEARNERS
    meta_setups: tuple = SETUPS
    meta_repetitions: int = 30
    meta_seed: int = 1
    meta_folds: int = 10
    meta_tune_budget: int = 300
    include_rl: bool = True
    extra_defaults: tuple = ()

    def tuning_config(self) -> TuningConfig:
        return TuningConfig(
            budget=self.budget,
            outer_k=self.outer_k,
            inner_k=self.inner_k,
            seeds=self.seeds,
            walltime_per_dataset=self.walltime_per_dataset,
        )

    def defaults(self) -> list:
        """Reference default first, then the configured extras."""
        return [reference_default()] + [
            (did, HPSetting(dict(values))) for did, values in self.extra_defaults
        ]

    @property
    def config_hash(self) -> str:
        """Short digest of the experiment parameters.

        Paths are deliberately excluded: relocating inputs or outputs
        does not change what was computed.
        """
        payload = {
            "budget": self.budget,
            "outer_k": self.outer_k,
            "inner_k": self.inner_k,
            "seeds": list(self.seeds),
            "walltime_per_dataset": self.walltime_per_dataset,
            "alphas": [repr(a) for a in self.alphas],
            "meta_learners": list(self.meta_learners),
            "meta_setups": list(self.meta_setups),
            "meta_repetitions": self.meta_repetitions,
            "meta_seed": self.meta_seed,
            "meta_folds": self.meta_folds,
            "meta_tune_budget": self.meta_tune_budget,
            "include_rl": self.include_rl,
            "defaults": [
                [did, sorted((k, repr(v)) for k, v in values)]
                for did, values in self.extra_defaults
            ],
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _parse_int_list(text: str) -> tuple:
    """Comma-separated integers; ``a-b`` expands to the inclusive range."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    return tuple(values)


def _parse_str_list(text: str) -> tuple:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def load_defaults_file(path) -> tuple:
    """Parse extra default settings from a JSON file.

    The file holds a list of objects with keys ``id``, ``C`` and
    ``gamma`` (``null`` gamma means the dataset-dependent 1/N). Returns
    ``((id, ((key, value), ...)), ...)``; raises :class:`ConfigError`
    listing every problem.
    """
    violations = []
    try:
        with open(path, encoding="utf-8") as fh:
            entries = json.load(fh)
    except FileNotFoundError:
        raise ConfigError([f"defaults file not found: {path}"])
    except json.JSONDecodeError as exc:
        raise ConfigError([f"defaults file is not valid JSON: {exc}"])
    if not isinstance(entries, list):
        raise ConfigError(["defaults file must hold a JSON list"])

    parsed = []
    seen = set()
    for i, entry in enumerate(entries):
        where = f"defaults[{i}]"
        entry_ok = True

        def flag(problem):
            nonlocal entry_ok
            entry_ok = False
            violations.append(f"{where}: {problem}")

        if not isinstance(entry, dict):
            flag("not an object")
            continue
        did = entry.get("id")
        if not isinstance(did, str) or not did:
            flag("missing or empty 'id'")
            continue
        if did == REFERENCE_DEFAULT_ID:
            flag(f"id {REFERENCE_DEFAULT_ID!r} is reserved for the"
                 " reference default")
        if did in seen:
            flag(f"duplicate id {did!r}")
        seen.add(did)
        c = entry.get("C")
        if not isinstance(c, (int, float)) or isinstance(c, bool) or c <= 0:
            flag("'C' must be a positive number")
        gamma = entry.get("gamma")
        if gamma is not None and (
            not isinstance(gamma, (int, float)) or isinstance(gamma, bool)
            or gamma <= 0
        ):
            flag("'gamma' must be null or positive")
        unknown = set(entry) - {"id", "C", "gamma"}
        if unknown:
            flag(f"unknown keys {sorted(unknown)}")
        if entry_ok:
            parsed.append((did, (
                ("C", float(c)),
                ("gamma", None if gamma is None else float(gamma)),
            )))
    if violations:
        raise ConfigError(violations)
    return tuple(parsed)


def load_config(path) -> RunConfig:
    """Parse and validate an INI run configuration.

    Section/option layout matches :func:`default_config_text`. The
    ``TUNEREC_OUTPUT_DIR`` environment variable, when set, overrides the
    configured output directory.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise ConfigError([f"config file not found: {path}"])

    violations = []

    def get(section, option, fallback):
        return parser.get(section, option, fallback=fallback).strip()

    dataset_dir = get("data", "dataset_dir", "datasets")
    defaults_path = get("data", "defaults_file", "")
    output_dir = get("output", "dir", "results")
    env_output = os.environ.get("TUNEREC_OUTPUT_DIR")
    if env_output:
        output_dir = env_output

    def parse(section, option, fallback, conv, describe):
        raw = get(section, option, fallback)
        try:
            return conv(raw)
        except (ValueError, TypeError):
            violations.append(
                f"[{section}] {option} = {raw!r}: expected {describe}"
            )
            return conv(fallback)

    budget = parse("tuning", "budget", "300", int, "an integer")
    outer_k = parse("tuning", "outer_k", "10", int, "an integer")
    inner_k = parse("tuning", "inner_k", "3", int, "an integer")
    seeds = parse("tuning", "seeds", "1-10", _parse_int_list,
                  "integers like '1,2,3' or '1-10'")
    walltime_raw = get("tuning", "walltime_per_dataset", "")
    walltime = None
    if walltime_raw:
        try:
            walltime = float(walltime_raw)
            if walltime <= 0:
                violations.append(
                    "[tuning] walltime_per_dataset must be positive"
                )
        except ValueError:
            violations.append(
                f"[tuning] walltime_per_dataset = {walltime_raw!r}:"
                " expected seconds"
            )

    alphas = parse(
        "labeling", "alphas", "0.01, 0.05, 0.10",
        lambda t: tuple(float(p) for p in t.split(",") if p.strip()),
        "comma-separated significance levels",
    )
    meta_learners = parse("meta", "learners",
                          ", ".join(DEFAULT_META_LEARNERS),
                          _parse_str_list, "learner kinds")
    meta_setups = parse("meta", "setups", ", ".join(SETUPS),
                        _parse_str_list, "setups")
    meta_repetitions = parse("meta", "repetitions", "30", int, "an integer")
    meta_seed = parse("meta", "seed", "1", int, "an integer")
    meta_folds = parse("meta", "folds", "10", int, "an integer")
    meta_tune_budget = parse("meta", "tune_budget", "300", int, "an integer")
    include_rl_raw = get("meta", "include_rl", "true").lower()
    include_rl = include_rl_raw in ("true", "yes", "on", "1")
    if include_rl_raw not in ("true", "yes", "on", "1",
                              "false", "no", "off", "0"):
        violations.append(
            f"[meta] include_rl = {include_rl_raw!r}: expected a boolean"
        )

    if budget < 1:
        violations.append("[tuning] budget must be >= 1")
    if outer_k < 2:
        violations.append("[tuning] outer_k must be >= 2")
    if inner_k < 2:
        violations.append("[tuning] inner_k must be >= 2")
    if not seeds:
        violations.append("[tuning] seeds must be nonempty")
    elif len(set(seeds)) != len(seeds):
        violations.append("[tuning] seeds must be distinct")
    for a in alphas:
        if a not in ALPHAS:
            violations.append(
                f"[labeling] alpha {a!r} not in the supported set"
                f" {sorted(ALPHAS)}"
            )
    if not alphas:
        violations.append("[labeling] alphas must be nonempty")
    for kind in meta_learners:
        if kind not in LEARNER_KINDS:
            violations.append(f"[meta] unknown learner kind {kind!r}")
    if not meta_learners:
        violations.append("[meta] learners must be nonempty")
    for setup in meta_setups:
        if setup not in SETUPS:
            violations.append(f"[meta] unknown setup {setup!r}")
    if not meta_setups:
        violations.append("[meta] setups must be nonempty")
    if meta_repetitions < 1:
        violations.append("[meta] repetitions must be >= 1")
    if meta_folds < 2:
        violations.append("[meta] folds must be >= 2")
    if meta_tune_budget < 1:
        violations.append("[meta] tune_budget must be >= 1")

    extra_defaults = ()
    if defaults_path:
        # Relative paths resolve against the config file's directory.
        target = Path(defaults_path)
        if not target.is_absolute():
            target = Path(path).parent / target
        try:
            extra_defaults = load_defaults_file(target)
        except ConfigError as exc:
            violations.extend(exc.violations)

    if violations:
        raise ConfigError(violations)

    # Relative directories resolve against the config file's location,
    # so a run directory can be moved or archived wholesale.
    base = Path(path).parent

    def anchored(p):
        p = Path(p)
        return p if p.is_absolute() else base / p

    return RunConfig(
        dataset_dir=anchored(dataset_dir),
        output_dir=anchored(output_dir),
        budget=budget,
        outer_k=outer_k,
        inner_k=inner_k,
        seeds=seeds,
        walltime_per_dataset=walltime,
        alphas=alphas,
        meta_learners=meta_learners,
        meta_setups=meta_setups,
        meta_repetitions=meta_repetitions,
        meta_seed=meta_seed,
        meta_folds=meta_folds,
        meta_tune_budget=meta_tune_budget,
        include_rl=include_rl,
        extra_defaults=extra_defaults,
    )


def default_config_text() -> str:
    """A commented template with every option at its default."""
    return """\
# tunerec run configuration

[data]
# Directory holding the classification datasets (.csv or .arff).
dataset_dir = datasets
# Optional JSON file with extra default settings, e.g.
#   [{"id": "optimized1", "C": 32.0, "gamma": 0.03125}]
# The reference default (C=1, gamma=1/N) is always evaluated.
defaults_file =

[tuning]
budget = 300
outer_k = 10
inner_k = 3
# Comma list or inclusive range.
seeds = 1-10
# Seconds per dataset; empty means unlimited.
walltime_per_dataset =

[labeling]
alphas = 0.01, 0.05, 0.10

[meta]
learners = svm_rbf, cart, random_forest, knn, naive_bayes, linear
setups = none, featsel, tuned, smote, smote+featsel, smote+tuned
repetitions = 30
seed = 1
folds = 10
tune_budget = 300
include_rl = true

[output]
# Overridden by the TUNEREC_OUTPUT_DIR environment variable.
dir = results
"""
