"""Command-line pipeline driver.

Each subcommand turns documented input artifacts into documented output
artifacts under the configured output directory, so a full run is a
chain of small, restartable stages:

    ingest     datasets/           -> ingest.csv
    tune       ingest.csv          -> records.jsonl (append-only cache)
    extract    ingest.csv          -> metafeatures.csv, extraction_times.csv
    label      records.jsonl       -> labels.csv
    assemble   metafeatures + labels -> meta_<alpha>.csv
    meta-eval  meta_<alpha>.csv    -> meta_eval.csv
    importance meta_<alpha>.csv    -> importance_<alpha>.csv
    train-final meta_<alpha>.csv   -> model_<alpha>_<learner>_<setup>.pkl
    recommend  model + new dataset -> one line on stdout
    project    records + meta CSV  -> projection.csv/.svg, curves.csv/.svg
    report     meta_eval + friends -> report_*.csv/.svg

Exit codes: 0 success, 1 validation problem, 2 runtime failure, 3
partial result (some datasets flagged incomplete or failed).
"""

import argparse
import csv
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, default_config_text, load_config
from .data import DataError, Dataset, check_eligibility, load_dataset, preprocess
from .labeling import label_meta_example, read_labels, write_labels
from .learners import LearnerSpec
from .metafeatures import (
    MetaFeatureError,
    describe_schema,
    extract_all,
    read_vectors,
    write_vectors,
)
from .metalevel import (
    UnsupportedSetupError,
    assemble,
    load_meta_model,
    read_meta_dataset,
    recommend,
    rf_importance,
    run_meta_cv,
    save_meta_model,
    train_final,
    write_meta_dataset,
)
from .projection import (
    defaults_comparison_curves,
    project,
    write_curves_chart,
    write_curves_csv,
    write_projection_csv,
    write_projection_scatter,
)
from .records import RecordStore
from .synth import generate_corpus, save_corpus
from .tuning import TuningOutcome, run_base_level

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_PARTIAL = 3


class MissingArtifactError(ValueError):
    """An upstream artifact is absent; the message names its producer."""


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise MissingArtifactError(
            f"{path} not found; it is produced by `tunerec {producer}`"
            " - run that first"
        )
    return path


def _header(cfg) -> list:
    return [f"tunerec {__version__} config={cfg.config_hash}"]


def _alpha_tag(alpha: float) -> str:
    return f"{alpha:g}"


def _write_csv(path, header_lines, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)


def _read_csv(path) -> tuple:
    with open(path, newline="") as fh:
        rows = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(rows)
    header = next(reader)
    return header, list(reader)


def _stamp_svg(path, header_lines) -> None:
    # SVG is XML; a trailing comment is legal and keeps the provenance
    # contract uniform across artifact types.
    with open(path, "a", encoding="utf-8") as fh:
        for line in header_lines:
            fh.write(f"<!-- {line} -->\n")


def _load_prepared(path) -> Dataset:
    """Load a dataset file; canonical CSVs skip re-preprocessing."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, encoding="utf-8") as fh:
            first = fh.readline()
        if first.startswith("# tunerec-canonical-v1"):
            return Dataset.from_csv(path)
    d = preprocess(load_dataset(path))
    d.validate()
    return d


# ---------------------------------------------------------------------------
# roster (ingest.csv)

_ROSTER_COLUMNS = ("dataset", "file", "n_instances", "n_features",
                   "n_classes", "eligible", "reasons")


def _read_roster(cfg) -> list:
    """Rows of ingest.csv as dicts; `file` is relative to dataset_dir."""
    path = _require(cfg.output_dir / "ingest.csv", "ingest")
    header, rows = _read_csv(path)
    if tuple(header) != _ROSTER_COLUMNS:
        raise DataError(f"{path}: unexpected columns {header}")
    return [dict(zip(_ROSTER_COLUMNS, row)) for row in rows]


def _eligible_entries(cfg) -> list:
    """(name, path) for every eligible roster dataset, name-sorted."""
    return [(row["dataset"], cfg.dataset_dir / row["file"])
            for row in _read_roster(cfg) if row["eligible"] == "yes"]


def cmd_ingest(cfg, args) -> int:
    if not cfg.dataset_dir.is_dir():
        raise MissingArtifactError(
            f"dataset directory {cfg.dataset_dir} does not exist"
        )
    files = sorted(
        p for p in cfg.dataset_dir.iterdir()
        if p.suffix.lower() in (".csv", ".arff")
    )
    if not files:
        raise MissingArtifactError(
            f"no .csv or .arff files in {cfg.dataset_dir}"
        )
    rows = []
    problems = 0
    for path in files:
        try:
            d = _load_prepared(path)
            report = check_eligibility(d)
            reasons = "; ".join(msg for _, msg in report.violated_criteria)
            eligible = "yes" if report.eligible else "no"
            rows.append((d.name, path.name, d.n_instances, d.n_features,
                         d.n_classes, eligible, reasons))
            if not report.eligible:
                problems += 1
        except DataError as exc:
            rows.append((path.stem, path.name, "", "", "", "no", str(exc)))
            problems += 1
    rows.sort(key=lambda r: r[0])
    _write_csv(cfg.output_dir / "ingest.csv", _header(cfg),
               _ROSTER_COLUMNS, rows)
    eligible_n = sum(1 for r in rows if r[5] == "yes")
    print(f"[ingest] {eligible_n}/{len(rows)} datasets eligible"
          f" -> {cfg.output_dir / 'ingest.csv'}")
    for r in rows:
        if r[5] == "no":
            print(f"[ingest] excluded {r[0]}: {r[6]}")
    return EXIT_OK if problems == 0 else EXIT_PARTIAL


# ---------------------------------------------------------------------------
# tune

class _WorkerStore:
    """In-memory stand-in for RecordStore inside worker processes:
    pre-seeded with the records already on disk, collecting new ones."""

    def __init__(self, existing):
        self._records = list(existing)
        self._keys = {r.key for r in existing}
        self.new = []

    def __contains__(self, key) -> bool:
        return tuple(key) in self._keys

    def append(self, rec) -> None:
        if rec.key in self._keys:
            raise ValueError(f"duplicate record key {rec.key}")
        self._keys.add(rec.key)
        self._records.append(rec)
        self.new.append(rec)

    def records_for(self, dataset: str) -> list:
        return [r for r in self._records if r.dataset == dataset]


def _tune_one(task):
    name, path, tcfg, defaults, existing = task
    d = _load_prepared(path)
    shim = _WorkerStore(existing)
    outcome = run_base_level(d, defaults, tcfg, store=shim)
    return name, shim.new, outcome.complete


def _missing_cells(store, name, tcfg, default_ids) -> bool:
    strategies = ["tuned"] + [f"default:{did}" for did in default_ids]
    return any(
        (name, strat, seed, fold) not in store
        for strat in strategies
        for seed in tcfg.seeds
        for fold in range(tcfg.outer_k)
    )


def cmd_tune(cfg, args) -> int:
    entries = _eligible_entries(cfg)
    if not entries:
        raise MissingArtifactError("no eligible datasets in ingest.csv")
    tcfg = cfg.tuning_config()
    defaults = cfg.defaults()
    default_ids = [did for did, _ in defaults]
    store = RecordStore(cfg.output_dir / "records.jsonl")

    pending = [(name, path) for name, path in entries
               if _missing_cells(store, name, tcfg, default_ids)]
    new_total = 0
    incomplete = []

    if args.jobs > 1 and pending:
        tasks = [(name, path, tcfg, defaults, store.records_for(name))
                 for name, path in pending]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for name, new_records, complete in pool.map(_tune_one, tasks):
                for rec in new_records:
                    store.append(rec)
                new_total += len(new_records)
                if not complete:
                    incomplete.append(name)
                print(f"[tune] {name}: {len(new_records)} new evaluations")
    else:
        for name, path in pending:
            before = len(store)
            d = _load_prepared(path)
            outcome = run_base_level(d, defaults, tcfg, store=store)
            n_new = len(store) - before
            new_total += n_new
            if not outcome.complete:
                incomplete.append(name)
            print(f"[tune] {name}: {n_new} new evaluations")

    print(f"[tune] {new_total} new evaluations"
          f" ({len(entries) - len(pending)} datasets already cached)")
    if incomplete:
        print(f"[tune] incomplete (walltime): {', '.join(incomplete)}")
        return EXIT_PARTIAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# extract

def _extract_one(task):
    name, path, include_rl = task
    d = _load_prepared(path)
    t0 = time.perf_counter()
    vector = extract_all(d, include_rl=include_rl)
    return name, vector, time.perf_counter() - t0


def cmd_extract(cfg, args) -> int:
    entries = _eligible_entries(cfg)
    if not entries:
        raise MissingArtifactError("no eligible datasets in ingest.csv")
    tasks = [(name, path, cfg.include_rl) for name, path in entries]
    vectors = []
    timings = []
    failures = []

    def consume(results):
        for (name, _, _), result in zip(tasks, results):
            if isinstance(result, MetaFeatureError):
                failures.append((name, str(result)))
                print(f"[extract] {name} failed: {result}")
            else:
                _, vector, seconds = result
                vectors.append(vector)
                timings.append((name, repr(seconds)))
                print(f"[extract] {name}: {len(vector)} meta-features"
                      f" in {seconds:.2f}s")

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            consume(list(pool.map(_guarded_extract, tasks)))
    else:
        results = []
        for task in tasks:
            try:
                results.append(_extract_one(task))
            except MetaFeatureError as exc:
                results.append(exc)
        consume(results)

    if not vectors:
        raise RuntimeError("meta-feature extraction failed for every dataset")
    write_vectors(vectors, cfg.output_dir / "metafeatures.csv", _header(cfg))
    _write_csv(cfg.output_dir / "extraction_times.csv", _header(cfg),
               ("dataset", "seconds"), timings)
    print(f"[extract] wrote {len(vectors)} vectors"
          f" -> {cfg.output_dir / 'metafeatures.csv'}")
    return EXIT_PARTIAL if failures else EXIT_OK


def _guarded_extract(task):
    try:
        return _extract_one(task)
    except MetaFeatureError as exc:
        return exc


# ---------------------------------------------------------------------------
# label / assemble

def _outcomes_from_store(cfg, names=None) -> dict:
    path = _require(cfg.output_dir / "records.jsonl", "tune")
    store = RecordStore(path)
    tcfg = cfg.tuning_config()
    default_ids = [did for did, _ in cfg.defaults()]
    recorded = sorted({r.dataset for r in store})
    if names is not None:
        recorded = [n for n in recorded if n in set(names)]
    return {
        name: TuningOutcome.from_records(name, store.records_for(name),
                                         tcfg, default_ids)
        for name in recorded
    }


def cmd_label(cfg, args) -> int:
    roster_names = [name for name, _ in _eligible_entries(cfg)]
    outcomes = _outcomes_from_store(cfg, roster_names)
    if not outcomes:
        raise MissingArtifactError(
            "records.jsonl has no records for eligible datasets;"
            " run `tunerec tune` first"
        )
    skipped = sorted(n for n, o in outcomes.items() if not o.complete)
    labels = []
    for alpha in cfg.alphas:
        for name in sorted(outcomes):
            if name in skipped:
                continue
            labels.append(label_meta_example(outcomes[name], alpha))
    if not labels:
        raise RuntimeError("no complete outcomes to label")
    write_labels(labels, cfg.output_dir / "labels.csv", _header(cfg))
    for alpha in cfg.alphas:
        per = [l for l in labels if l.alpha == alpha]
        n_tuning = sum(1 for l in per if l.label == "Tuning")
        print(f"[label] alpha={_alpha_tag(alpha)}: "
              f"{n_tuning} Tuning / {len(per) - n_tuning} Defaults")
    if skipped:
        print(f"[label] skipped incomplete: {', '.join(skipped)}")
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_assemble(cfg, args) -> int:
    vectors = read_vectors(
        _require(cfg.output_dir / "metafeatures.csv", "extract"))
    all_labels = read_labels(
        _require(cfg.output_dir / "labels.csv", "label"))
    for alpha in cfg.alphas:
        subset = [l for l in all_labels if l.alpha == alpha]
        if not subset:
            raise DataError(
                f"labels.csv has no rows at alpha={_alpha_tag(alpha)};"
                " rerun `tunerec label`"
            )
        md = assemble(vectors, subset, alpha)
        out = cfg.output_dir / f"meta_{_alpha_tag(alpha)}.csv"
        write_meta_dataset(md, out, _header(cfg))
        counts = md.class_counts()
        print(f"[assemble] alpha={_alpha_tag(alpha)}: {len(md)} examples "
              f"({counts['Tuning']} Tuning / {counts['Defaults']} Defaults)"
              f" -> {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# meta-eval / importance / train-final / recommend

def _meta_dataset(cfg, alpha):
    return read_meta_dataset(
        _require(cfg.output_dir / f"meta_{_alpha_tag(alpha)}.csv",
                 "assemble"))


def _pick_alphas(cfg, args):
    if getattr(args, "alpha", None) is None:
        return cfg.alphas
    if args.alpha not in cfg.alphas:
        raise ConfigError([
            f"alpha {args.alpha} is not in the configured set"
            f" {sorted(cfg.alphas)}"
        ])
    return (args.alpha,)


def _default_alpha(cfg, args) -> float:
    """Explicit --alpha (validated), else 0.05 when configured."""
    if args.alpha is not None:
        return _pick_alphas(cfg, args)[0]
    return 0.05 if 0.05 in cfg.alphas else cfg.alphas[0]


def _repetitions(cfg, args) -> int:
    value = args.repetitions if args.repetitions is not None \
        else cfg.meta_repetitions
    if value < 1:
        raise ConfigError(["repetitions must be >= 1"])
    return value


def cmd_meta_eval(cfg, args) -> int:
    alphas = _pick_alphas(cfg, args)
    learners = (args.learner,) if args.learner else cfg.meta_learners
    setups = (args.setup,) if args.setup else cfg.meta_setups
    repetitions = _repetitions(cfg, args)
    explicit = bool(args.learner and args.setup)

    rows = []
    for alpha in alphas:
        md = _meta_dataset(cfg, alpha)
        for kind in learners:
            for setup in setups:
                try:
                    result = run_meta_cv(
                        md, LearnerSpec(kind), setup,
                        repetitions=repetitions, seed=cfg.meta_seed,
                        folds=cfg.meta_folds,
                        tune_budget=cfg.meta_tune_budget,
                    )
                except UnsupportedSetupError:
                    if explicit:
                        raise
                    print(f"[meta-eval] skipping {kind} + {setup}:"
                          " no tunable hyperparameters")
                    continue
                for rep, value in enumerate(result.rep_aucs):
                    rows.append((_alpha_tag(alpha), kind, setup, rep,
                                 repr(value)))
                print(f"[meta-eval] alpha={_alpha_tag(alpha)} {kind:>13s}"
                      f" {setup:<14s} AUC {result.mean_auc:.3f}"
                      f" +- {result.sd_auc:.3f}")
    if not rows:
        raise RuntimeError("no (learner, setup) combination was evaluated")
    _write_csv(cfg.output_dir / "meta_eval.csv", _header(cfg),
               ("alpha", "learner", "setup", "repetition", "auc"), rows)
    print(f"[meta-eval] wrote {cfg.output_dir / 'meta_eval.csv'}")
    return EXIT_OK


def cmd_importance(cfg, args) -> int:
    repetitions = _repetitions(cfg, args)
    for alpha in _pick_alphas(cfg, args):
        md = _meta_dataset(cfg, alpha)
        report = rf_importance(md, repetitions=repetitions,
                               seed=cfg.meta_seed)
        out = cfg.output_dir / f"importance_{_alpha_tag(alpha)}.csv"
        _write_csv(out, _header(cfg),
                   ("rank", "feature", "mean_importance", "sd"),
                   [(i + 1, name, repr(mean), repr(sd))
                    for i, (name, mean, sd) in enumerate(report.ranking)])
        top = ", ".join(report.top(5))
        print(f"[importance] alpha={_alpha_tag(alpha)} top-5: {top}")
        print(f"[importance] wrote {out}")
    return EXIT_OK


def cmd_train_final(cfg, args) -> int:
    alpha = _default_alpha(cfg, args)
    md = _meta_dataset(cfg, alpha)
    model = train_final(md, LearnerSpec(args.learner), args.setup,
                        seed=cfg.meta_seed,
                        tune_budget=cfg.meta_tune_budget)
    out = Path(args.out) if args.out else (
        cfg.output_dir
        / f"model_{_alpha_tag(alpha)}_{args.learner}_{args.setup}.pkl"
    )
    save_meta_model(model, out)
    print(f"[train-final] alpha={_alpha_tag(alpha)} {args.learner}"
          f" + {args.setup} on {len(md)} examples -> {out}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    model = load_meta_model(_require(Path(args.model), "train-final"))
    d = _load_prepared(Path(args.dataset))
    t0 = time.perf_counter()
    vector = extract_all(d, include_rl=len(model.schema) == 90)
    seconds = time.perf_counter() - t0
    rec = recommend(model, vector)
    print(f"{rec.dataset}: {rec.label} (tuning score {rec.score:.4f},"
          f" threshold {rec.threshold:g}, extraction {seconds:.2f}s)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# project / report

def _read_extraction_times(cfg) -> dict:
    path = cfg.output_dir / "extraction_times.csv"
    if not path.exists():
        return {}
    _, rows = _read_csv(path)
    return {name: float(seconds) for name, seconds in rows}


def cmd_project(cfg, args) -> int:
    alpha = _default_alpha(cfg, args)
    md = _meta_dataset(cfg, alpha)
    names = [e.dataset for e in md.examples]
    outcomes = _outcomes_from_store(cfg, names)
    missing = sorted(set(names) - set(outcomes))
    if missing:
        raise MissingArtifactError(
            f"records.jsonl lacks outcomes for {', '.join(missing)};"
            " run `tunerec tune`"
        )
    repetitions = _repetitions(cfg, args)
    result = run_meta_cv(md, LearnerSpec(args.learner), args.setup,
                         repetitions=repetitions, seed=cfg.meta_seed,
                         folds=cfg.meta_folds,
                         tune_budget=cfg.meta_tune_budget)
    mean_scores = result.pooled_scores.mean(axis=0)
    predicted = {name: ("Tuning" if score >= 0.5 else "Defaults")
                 for name, score in zip(names, mean_scores)}
    report = project({args.learner: predicted}, outcomes,
                     extraction_times=_read_extraction_times(cfg),
                     random_seed=cfg.meta_seed)

    out_csv = cfg.output_dir / "projection.csv"
    write_projection_csv(report, out_csv, _header(cfg))
    scatter = cfg.output_dir / "projection.svg"
    write_projection_scatter(report, scatter)
    _stamp_svg(scatter, _header(cfg))

    curves = defaults_comparison_curves(outcomes.values())
    curves_csv = cfg.output_dir / "curves.csv"
    write_curves_csv(curves, curves_csv, _header(cfg))
    chart = cfg.output_dir / "curves.svg"
    write_curves_chart(curves, chart)
    _stamp_svg(chart, _header(cfg))

    for name in sorted(report.strategies):
        s = report[name]
        print(f"[project] {name:<22s} BAC {s.mean_bac:.4f}"
              f" runtime {s.mean_runtime:10.2f}s")
    print(f"[project] wrote {out_csv}, {scatter}, {curves_csv}, {chart}")
    return EXIT_OK


def cmd_report(cfg, args) -> int:
    header, rows = _read_csv(_require(cfg.output_dir / "meta_eval.csv",
                                      "meta-eval"))
    expected = ["alpha", "learner", "setup", "repetition", "auc"]
    if header != expected:
        raise DataError(f"meta_eval.csv has unexpected columns {header}")
    cells = {}
    for alpha, learner, setup, _rep, value in rows:
        cells.setdefault((alpha, learner, setup), []).append(float(value))
    summary = []
    for (alpha, learner, setup), values in sorted(cells.items()):
        arr = np.asarray(values)
        sd = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
        summary.append((alpha, learner, setup, len(arr),
                        repr(float(arr.mean())), repr(sd)))
    out = cfg.output_dir / "report_auc.csv"
    _write_csv(out, _header(cfg),
               ("alpha", "learner", "setup", "repetitions",
                "mean_auc", "sd_auc"), summary)
    written = [out]

    chart = cfg.output_dir / "report_auc.svg"
    _auc_chart(summary, chart)
    _stamp_svg(chart, _header(cfg))
    written.append(chart)

    for alpha_path in sorted(cfg.output_dir.glob("importance_*.csv")):
        _, irows = _read_csv(alpha_path)
        tag = alpha_path.stem.split("_", 1)[1]
        bar = cfg.output_dir / f"report_importance_{tag}.svg"
        _importance_chart(irows[:15], bar,
                          f"forest importance (alpha={tag})")
        _stamp_svg(bar, _header(cfg))
        written.append(bar)

    print("[report] wrote " + ", ".join(str(p) for p in written))
    return EXIT_OK


def _figure():
    import matplotlib
    matplotlib.use("svg", force=True)
    import matplotlib.pyplot as plt
    matplotlib.rcParams["svg.hashsalt"] = "tunerec"
    return plt


def _auc_chart(summary, path) -> None:
    """Mean AUC per meta-learner, one line per (alpha, setup)."""
    plt = _figure()
    learners = sorted({learner for _, learner, _, _, _, _ in summary})
    fig, ax = plt.subplots(figsize=(8, 4.5))
    series = {}
    for alpha, learner, setup, _n, mean, _sd in summary:
        series.setdefault((alpha, setup), {})[learner] = float(mean)
    x = np.arange(len(learners))
    for (alpha, setup), by_learner in sorted(series.items()):
        y = [by_learner.get(l, np.nan) for l in learners]
        ax.plot(x, y, marker="o",
                label=f"alpha={alpha}, {setup}")
    ax.set_xticks(x)
    ax.set_xticklabels(learners, rotation=20, ha="right")
    ax.set_ylabel("mean AUC")
    ax.axhline(0.5, color="gray", linestyle=":", linewidth=1)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


def _importance_chart(rows, path, title) -> None:
    plt = _figure()
    names = [r[1] for r in rows][::-1]
    means = [float(r[2]) for r in rows][::-1]
    fig, ax = plt.subplots(figsize=(7, 0.3 * len(rows) + 1.5))
    ax.barh(np.arange(len(names)), means, color="#4878d0")
    ax.set_yticks(np.arange(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xlabel("mean importance")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------------------
# describe / synth

def cmd_describe(args) -> int:
    for name, text in describe_schema(include_rl=True):
        print(f"{name}: {text}")
    return EXIT_OK


def cmd_synth(cfg, args) -> int:
    corpus = generate_corpus(args.n, seed=args.seed)
    paths = save_corpus(corpus, cfg.dataset_dir)
    kinds = {}
    for s in corpus:
        kinds[s.kind] = kinds.get(s.kind, 0) + 1
    detail = ", ".join(f"{v} {k}" for k, v in sorted(kinds.items()))
    print(f"[synth] wrote {len(paths)} datasets ({detail})"
          f" -> {cfg.dataset_dir}")
    return EXIT_OK


def cmd_init(args) -> int:
    path = Path(args.path)
    if path.exists() and not args.force:
        print(f"error: {path} already exists; pass --force to overwrite",
              file=sys.stderr)
        return EXIT_VALIDATION
    path.write_text(default_config_text(), encoding="utf-8")
    print(f"[init] wrote {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / dispatch

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tunerec",
        description="Decide whether SVM hyperparameter tuning will pay"
                    " off for a dataset.",
        epilog="The TUNEREC_OUTPUT_DIR environment variable overrides"
               " the configured output directory.",
    )
    parser.add_argument("--version", action="version",
                        version=f"tunerec {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="subcommand")

    def add(name, help_text, needs_config=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if needs_config:
            p.add_argument("--config", default="run.ini",
                           help="run configuration file (default run.ini)")
        return p

    p = add("init", "write a template configuration file",
            needs_config=False)
    p.add_argument("path", nargs="?", default="run.ini")
    p.add_argument("--force", action="store_true",
                   help="overwrite an existing file")

    add("ingest", "scan the dataset directory and write the eligibility"
                  " roster")

    p = add("tune", "run nested-CV random-search tuning and the default"
                    " settings on every eligible dataset")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes (datasets are independent)")

    p = add("extract", "compute meta-feature vectors for every eligible"
                       " dataset")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes (datasets are independent)")

    add("label", "apply the Wilcoxon labeling rule per dataset and alpha")
    add("assemble", "join meta-features with labels into per-alpha"
                    " meta-datasets")

    p = add("meta-eval", "repeated stratified CV of the meta-learners")
    p.add_argument("--alpha", type=float, help="restrict to one alpha")
    p.add_argument("--learner", help="restrict to one learner kind")
    p.add_argument("--setup", help="restrict to one setup")
    p.add_argument("--repetitions", type=int,
                   help="override the configured repetition count")

    p = add("importance", "rank meta-features by forest importance")
    p.add_argument("--alpha", type=float, help="restrict to one alpha")
    p.add_argument("--repetitions", type=int,
                   help="override the configured repetition count")

    p = add("train-final", "fit one meta-model on the full meta-dataset")
    p.add_argument("--alpha", type=float,
                   help="labeling alpha (default 0.05 when configured)")
    p.add_argument("--learner", default="random_forest")
    p.add_argument("--setup", default="none")
    p.add_argument("--out", help="model file path")

    p = add("recommend", "predict Tuning or Defaults for a new dataset",
            needs_config=False)
    p.add_argument("--model", required=True, help="trained meta-model file")
    p.add_argument("--dataset", required=True, help="dataset file")

    p = add("project", "compare recommendation strategies by projected"
                       " BAC and runtime")
    p.add_argument("--alpha", type=float,
                   help="labeling alpha (default 0.05 when configured)")
    p.add_argument("--learner", default="random_forest")
    p.add_argument("--setup", default="none")
    p.add_argument("--repetitions", type=int,
                   help="override the configured repetition count")

    add("report", "render CSV/SVG summaries of the evaluation artifacts")
    add("describe", "print the meta-feature schema with descriptions",
        needs_config=False)

    p = add("synth", "generate the synthetic benchmark corpus into the"
                     " dataset directory")
    p.add_argument("--n", type=int, default=40, help="number of datasets")
    p.add_argument("--seed", type=int, default=7)

    return parser


_NEEDS_CONFIG = {
    "ingest": cmd_ingest,
    "tune": cmd_tune,
    "extract": cmd_extract,
    "label": cmd_label,
    "assemble": cmd_assemble,
    "meta-eval": cmd_meta_eval,
    "importance": cmd_importance,
    "train-final": cmd_train_final,
    "project": cmd_project,
    "report": cmd_report,
    "synth": cmd_synth,
}

_CONFIG_FREE = {
    "init": cmd_init,
    "recommend": cmd_recommend,
    "describe": cmd_describe,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_VALIDATION
    try:
        if args.command in _CONFIG_FREE:
            return _CONFIG_FREE[args.command](args)
        cfg = load_config(args.config)
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        return _NEEDS_CONFIG[args.command](cfg, args)
    except (ConfigError, MissingArtifactError, DataError,
            UnsupportedSetupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - boundary of the process
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
