"""Project meta-level decisions back to base-level cost and quality.

Every strategy picks one branch per dataset (tuned or a default) and
inherits that branch's recorded mean BAC and mean per-cell runtime, so
strategies are comparable on exactly the work the base level already
measured. Defaults-branch scores follow the labeling rule: the best
default for that dataset. Two defaults baselines are emitted because a
single uniform policy and a per-dataset choice answer different
questions.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .labeling import best_default

__all__ = [
    "PerDataset",
    "StrategyResult",
    "ProjectionReport",
    "project",
    "defaults_comparison_curves",
    "write_projection_csv",
    "write_projection_scatter",
    "write_curves_csv",
    "write_curves_chart",
]

FIXED_STRATEGIES = ("Tuning", "Defaults", "Defaults.per.dataset", "Random",
                    "Oracle")


@dataclass(frozen=True)
class PerDataset:
    bac: float
    runtime: float
    extraction: float
    branch: str


@dataclass(frozen=True)
class StrategyResult:
    strategy: str
    per_dataset: dict = field(repr=False)

    @property
    def mean_bac(self) -> float:
        return float(np.mean([e.bac for e in self.per_dataset.values()]))

    @property
    def mean_runtime(self) -> float:
        return float(np.mean([e.runtime for e in self.per_dataset.values()]))


@dataclass(frozen=True)
class ProjectionReport:
    strategies: dict

    def __getitem__(self, name) -> StrategyResult:
        return self.strategies[name]


def _branches(outcome):
    """Mean BAC and mean per-cell runtime of the tuned branch and of
    every default, plus the per-dataset best default id."""
    tuned = outcome.tuned_records
    tuned_bac = float(np.mean([r.score for r in tuned]))
    tuned_rt = float(np.mean([r.runtime for r in tuned]))
    defaults = {}
    for did in outcome.default_ids:
        recs = outcome.default_records_for(did)
        defaults[did] = (float(np.mean([r.score for r in recs])),
                         float(np.mean([r.runtime for r in recs])))
    best_id, _ = best_default(outcome)
    return tuned_bac, tuned_rt, defaults, best_id


def project(predictions, outcomes, extraction_times=None,
            random_seed: int = 0) -> ProjectionReport:
    """Build the strategy comparison report.

    ``predictions`` maps a meta-strategy name to a per-dataset label
    map (a single flat dataset-to-label map is also accepted); every
    predicted dataset needs a complete outcome in ``outcomes``. Fixed
    strategies: Tuning (always tune), Defaults (the one default with
    the best overall mean, applied uniformly), Defaults.per.dataset
    (each dataset's own best default), Random (seeded fair coin per
    dataset), Oracle (the better branch per dataset). Meta strategies
    add the dataset's meta-feature extraction time to their runtime
    when ``extraction_times`` is given.
    """
    if isinstance(outcomes, dict):
        outcome_map = outcomes
    else:
        outcome_map = {o.dataset: o for o in outcomes}
    for name, o in outcome_map.items():
        if not o.complete:
            raise ValueError(f"outcome for dataset {name!r} is incomplete")
    if predictions and all(isinstance(v, str) for v in predictions.values()):
        predictions = {"model": predictions}
    for strategy, mapping in predictions.items():
        missing = sorted(set(mapping) - set(outcome_map))
        if missing:
            raise ValueError(
                f"meta:{strategy} predicts datasets without outcomes: "
                f"{missing}"
            )
        unknown = [lab for lab in mapping.values()
                   if lab not in ("Tuning", "Defaults")]
        if unknown:
            raise ValueError(f"unknown predicted labels {sorted(set(unknown))}")
    extraction_times = extraction_times or {}

    datasets = sorted(outcome_map)
    branches = {name: _branches(outcome_map[name]) for name in datasets}

    # The uniform-policy default: best mean BAC over all cells of all
    # datasets, ties to the lowest id.
    policy_scores = {}
    for name in datasets:
        o = outcome_map[name]
        for did in o.default_ids:
            policy_scores.setdefault(did, []).extend(
                r.score for r in o.default_records_for(did))
    shared = [did for did, scores in policy_scores.items()
              if len(scores) == max(len(s) for s in policy_scores.values())]
    global_default = max(sorted(shared),
                         key=lambda did: np.mean(policy_scores[did]))

    def tuned_entry(name, extraction=0.0):
        bac, rt, _, _ = branches[name]
        return PerDataset(bac, rt + extraction, extraction, "tuned")

    def default_entry(name, did, extraction=0.0):
        _, _, defaults, _ = branches[name]
        bac, rt = defaults[did]
        return PerDataset(bac, rt + extraction, extraction,
                          f"default:{did}")

    strategies = {}
    strategies["Tuning"] = StrategyResult(
        "Tuning", {name: tuned_entry(name) for name in datasets})
    strategies["Defaults"] = StrategyResult(
        "Defaults", {name: default_entry(name, global_default)
                     for name in datasets})
    strategies["Defaults.per.dataset"] = StrategyResult(
        "Defaults.per.dataset",
        {name: default_entry(name, branches[name][3]) for name in datasets})

    random_map = {}
    for name in datasets:
        coin = int(_rng.stream("random-baseline", random_seed, name)
                   .integers(0, 2))
        random_map[name] = (tuned_entry(name) if coin == 0
                            else default_entry(name, branches[name][3]))
    strategies["Random"] = StrategyResult("Random", random_map)

    oracle_map = {}
    for name in datasets:
        tuned_bac, _, defaults, best_id = branches[name]
        oracle_map[name] = (tuned_entry(name)
                            if tuned_bac >= defaults[best_id][0]
                            else default_entry(name, best_id))
    strategies["Oracle"] = StrategyResult("Oracle", oracle_map)

    for strategy, mapping in predictions.items():
        entries = {}
        for name in sorted(mapping):
            extraction = float(extraction_times.get(name, 0.0))
            if mapping[name] == "Tuning":
                entries[name] = tuned_entry(name, extraction)
            else:
                entries[name] = default_entry(name, branches[name][3],
                                              extraction)
        strategies[f"meta:{strategy}"] = StrategyResult(f"meta:{strategy}",
                                                        entries)
    return ProjectionReport(strategies=strategies)


@dataclass(frozen=True)
class CurveRow:
    dataset: str
    reference_bac: float
    multiple_defaults_bac: float
    tuned_bac: float


def defaults_comparison_curves(outcomes, reference_default: str = "default"):
    """Per-dataset mean BAC under the reference default, the best of
    multiple defaults, and tuning, sorted descending by the reference
    curve (name breaks ties) so the rows plot directly."""
    if isinstance(outcomes, dict):
        outcomes = list(outcomes.values())
    if not outcomes:
        raise ValueError("no outcomes to compare")
    rows = []
    for o in outcomes:
        if not o.complete:
            raise ValueError(f"outcome for dataset {o.dataset!r} is "
                             "incomplete")
        if reference_default not in o.default_ids:
            raise ValueError(
                f"outcome for {o.dataset!r} lacks the reference default "
                f"{reference_default!r}"
            )
        tuned_bac, _, defaults, best_id = _branches(o)
        rows.append(CurveRow(
            dataset=o.dataset,
            reference_bac=defaults[reference_default][0],
            multiple_defaults_bac=defaults[best_id][0],
            tuned_bac=tuned_bac,
        ))
    rows.sort(key=lambda r: (-r.reference_bac, r.dataset))
    return rows


def write_projection_csv(report: ProjectionReport, path, header_lines=()):
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["strategy", "dataset", "bac", "runtime",
                         "extraction", "branch"])
        for strategy in sorted(report.strategies):
            result = report.strategies[strategy]
            for name in sorted(result.per_dataset):
                e = result.per_dataset[name]
                writer.writerow([strategy, name, repr(e.bac),
                                 repr(e.runtime), repr(e.extraction),
                                 e.branch])
            writer.writerow([strategy, "<mean>", repr(result.mean_bac),
                             repr(result.mean_runtime), "", ""])


def write_curves_csv(rows, path, header_lines=()):
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["dataset", "reference_default_bac",
                         "multiple_defaults_bac", "tuned_bac"])
        for r in rows:
            writer.writerow([r.dataset, repr(r.reference_bac),
                             repr(r.multiple_defaults_bac),
                             repr(r.tuned_bac)])


def _figure():
    import matplotlib
    matplotlib.use("svg")
    matplotlib.rcParams["svg.hashsalt"] = "tunerec"
    import matplotlib.pyplot as plt
    return plt


def write_curves_chart(rows, path):
    """Line chart of the three BAC curves over rank-ordered datasets."""
    plt = _figure()
    x = np.arange(len(rows))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(x, [r.tuned_bac for r in rows], label="random search",
            color="#d62728", lw=1.2)
    ax.plot(x, [r.multiple_defaults_bac for r in rows],
            label="multiple defaults", color="#1f77b4", lw=1.2)
    ax.plot(x, [r.reference_bac for r in rows], label="reference defaults",
            color="#2ca02c", lw=1.2)
    ax.set_xlabel("datasets (sorted by reference-defaults BAC)")
    ax.set_ylabel("mean BAC")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def write_projection_scatter(report: ProjectionReport, path):
    """Scatter of mean runtime (log scale) against mean BAC per
    strategy."""
    plt = _figure()
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for strategy in sorted(report.strategies):
        result = report.strategies[strategy]
        ax.scatter(result.mean_runtime, result.mean_bac, label=strategy,
                   s=36)
        ax.annotate(strategy, (result.mean_runtime, result.mean_bac),
                    fontsize=7, xytext=(4, 4), textcoords="offset points")
    ax.set_xscale("log")
    ax.set_xlabel("mean runtime per dataset (s)")
    ax.set_ylabel("mean BAC")
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
