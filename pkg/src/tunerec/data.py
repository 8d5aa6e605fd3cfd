"""Load, validate, and preprocess tabular classification datasets.

Every other module consumes the canonical form produced here: a dense
float matrix with zero-mean, unit-sd columns (sample sd, n-1
denominator), 0-based class indices in first-appearance order, and
per-column provenance metadata.
"""

import csv
import io
import json
import os
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ColumnInfo",
    "Dataset",
    "RawDataset",
    "EligibilityReport",
    "load_dataset",
    "preprocess",
    "check_eligibility",
    "DataError",
]

MISSING_CATEGORY = "__missing__"
_LOGICAL_TOKENS = {"true": 1.0, "false": 0.0, "t": 1.0, "f": 0.0,
                   "yes": 1.0, "no": 0.0}


class DataError(ValueError):
    """Raised for parse failures and malformed dataset contents."""


@dataclass(frozen=True)
class ColumnInfo:
    """Metadata for one encoded column.

    ``origin`` names the original attribute; ``kind`` is one of
    ``numeric``, ``one-hot-category``, ``binary-from-logical``.
    """

    name: str
    origin: str
    kind: str


@dataclass(frozen=True)
class RawDataset:
    """A parsed but not yet preprocessed dataset.

    ``columns`` is a list of (name, kind, values) with kind in
    {numeric, categorical, logical}; numeric values are floats with NaN
    for missing, the others are string arrays with None for missing.
    """

    name: str
    columns: list
    labels: np.ndarray
    class_names: list

    @property
    def n_instances(self):
        return len(self.labels)

    @property
    def n_features(self):
        return len(self.columns)

    @property
    def n_classes(self):
        return len(self.class_names)


@dataclass
class Dataset:
    """Canonical preprocessed dataset.

    Parameters
    ----------
    name : str
        Identifier, usually the source file stem.
    features : ndarray of shape (n_instances, n_features)
        Dense real matrix; every column has mean 0 and sample sd 1.
    labels : ndarray of shape (n_instances,)
        0-based class indices in first-appearance order.
    columns : list of ColumnInfo
        Per-encoded-column provenance.
    class_names : list of str
        Class names by index.
    original_kinds : dict
        Original attribute name -> kind in {numeric, categorical,
        logical}, for the attributes that survived preprocessing.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    columns: list
    class_names: list
    original_kinds: dict = field(default_factory=dict)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def subset(self, indices, name=None) -> "Dataset":
        """Row subset sharing all metadata (class count included, so
        models trained on a fold still know every class)."""
        indices = np.asarray(indices)
        return Dataset(
            name=name or self.name,
            features=self.features[indices],
            labels=self.labels[indices],
            columns=self.columns,
            class_names=self.class_names,
            original_kinds=self.original_kinds,
        )

    def validate(self) -> None:
        if self.features.ndim != 2:
            raise DataError("features must be a 2-d matrix")
        if len(self.labels) != self.features.shape[0]:
            raise DataError("labels and features have different row counts")
        if np.isnan(self.features).any():
            raise DataError("missing values remain after preprocessing")
        counts = np.bincount(self.labels, minlength=self.n_classes)
        if (counts == 0).any():
            raise DataError("some class index never appears in labels")

    # Canonical serialization: one CSV with JSON metadata comments, so a
    # preprocessed dataset can be cached and reloaded bit-identically.
    def to_csv(self, path) -> None:
        meta = {
            "name": self.name,
            "columns": [[c.name, c.origin, c.kind] for c in self.columns],
            "class_names": list(self.class_names),
            "original_kinds": dict(self.original_kinds),
        }
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("# tunerec-canonical-v1\n")
            fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
            writer = csv.writer(fh)
            writer.writerow([c.name for c in self.columns] + ["class"])
            for row, label in zip(self.features, self.labels):
                writer.writerow([repr(float(v)) for v in row]
                                + [self.class_names[label]])

    @staticmethod
    def from_csv(path) -> "Dataset":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline()
            if not header.startswith("# tunerec-canonical-v1"):
                raise DataError(f"{path}: not a canonical dataset file")
            meta = json.loads(fh.readline()[2:])
            reader = csv.reader(fh)
            names = next(reader)
            rows = list(reader)
        class_names = meta["class_names"]
        features = np.array([[float(v) for v in r[:-1]] for r in rows])
        labels = np.array([class_names.index(r[-1]) for r in rows], dtype=np.int64)
        columns = [ColumnInfo(*c) for c in meta["columns"]]
        if names[:-1] != [c.name for c in columns]:
            raise DataError(f"{path}: header does not match metadata")
        return Dataset(meta["name"], features, labels, columns,
                       class_names, meta["original_kinds"])


@dataclass(frozen=True)
class EligibilityReport:
    """Outcome of the dataset-selection criteria.

    ``violated_criteria`` holds (code, message) pairs for the
    machine-checkable criteria a, b, e; ``notes`` records the
    provenance criteria c and d, which are reported but never block.
    """

    eligible: bool
    violated_criteria: list
    notes: list = field(default_factory=list)


def _infer_kind(values) -> str:
    """Classify a raw string column as numeric, logical or categorical."""
    observed = [v for v in values if v is not None]
    if not observed:
        return "numeric"
    numeric = True
    for v in observed:
        try:
            float(v)
        except ValueError:
            numeric = False
            break
    if numeric:
        return "numeric"
    if all(v.strip().lower() in _LOGICAL_TOKENS for v in observed):
        return "logical"
    return "categorical"


def _parse_cell(cell: str):
    cell = cell.strip()
    if cell == "" or cell == "?":
        return None
    return cell


def _load_csv(path, target_column):
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        rows = []
        for i, row in enumerate(reader):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{path}: row {i + 2} has {len(row)} cells, "
                    f"expected {len(header)}"
                )
            rows.append([_parse_cell(c) for c in row])
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, rows, {}


def _split_arff_row(line: str) -> list:
    return next(csv.reader(io.StringIO(line), skipinitialspace=True))


def _load_arff(path, target_column):
    """Minimal ARFF reader: @attribute declarations (numeric/real/
    integer, string, or {nominal}) and dense comma-separated @data."""
    header = []
    declared = {}
    rows = []
    in_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            if in_data:
                if line.startswith("{"):
                    raise DataError(f"{path}: sparse ARFF is not supported")
                cells = [_parse_cell(c) for c in _split_arff_row(line)]
                if len(cells) != len(header):
                    raise DataError(
                        f"{path}: line {lineno} has {len(cells)} values, "
                        f"expected {len(header)}"
                    )
                rows.append(cells)
                continue
            lower = line.lower()
            if lower.startswith("@relation"):
                continue
            if lower.startswith("@attribute"):
                rest = line[len("@attribute"):].strip()
                if rest.startswith(("'", '"')):
                    quote = rest[0]
                    end = rest.index(quote, 1)
                    name, decl = rest[1:end], rest[end + 1:].strip()
                else:
                    parts = rest.split(None, 1)
                    if len(parts) != 2:
                        raise DataError(f"{path}: line {lineno}: bad @attribute")
                    name, decl = parts
                header.append(name)
                decl_l = decl.strip().lower()
                if decl_l in ("numeric", "real", "integer"):
                    declared[name] = "numeric"
                elif decl_l.startswith("{"):
                    declared[name] = "categorical"
                elif decl_l == "string":
                    declared[name] = "categorical"
                else:
                    raise DataError(
                        f"{path}: line {lineno}: unsupported type {decl!r}"
                    )
            elif lower.startswith("@data"):
                if not header:
                    raise DataError(f"{path}: @data before any @attribute")
                in_data = True
            else:
                raise DataError(f"{path}: line {lineno}: unrecognized {line!r}")
    if not rows:
        raise DataError(f"{path}: no data rows")
    return header, rows, declared


def load_dataset(path, format: str | None = None,
                 target_column: str | None = None) -> RawDataset:
    """Parse a CSV or ARFF file into a :class:`RawDataset`.

    ``format`` defaults to the file extension; ``target_column``
    defaults to a column named ``class`` if present, else the last
    column. Nominal targets map to 0-based indices in first-appearance
    order.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise DataError(f"{path}: file does not exist")
    if format is None:
        format = "arff" if path.lower().endswith(".arff") else "csv"
    if format == "csv":
        header, rows, declared = _load_csv(path, target_column)
    elif format == "arff":
        header, rows, declared = _load_arff(path, target_column)
    else:
        raise DataError(f"unknown format {format!r}")

    if target_column is None:
        target_column = "class" if "class" in header else header[-1]
    if target_column not in header:
        raise DataError(f"{path}: target column {target_column!r} not found")
    target_idx = header.index(target_column)

    labels_raw = [row[target_idx] for row in rows]
    if any(v is None for v in labels_raw):
        raise DataError(f"{path}: missing values in the target column")
    class_names = []
    for v in labels_raw:
        if v not in class_names:
            class_names.append(v)
    if len(class_names) < 2:
        raise DataError(f"{path}: fewer than 2 distinct classes")
    labels = np.array([class_names.index(v) for v in labels_raw], dtype=np.int64)

    columns = []
    for j, name in enumerate(header):
        if j == target_idx:
            continue
        values = [row[j] for row in rows]
        kind = declared.get(name) or _infer_kind(values)
        if kind == "numeric":
            col = np.array(
                [np.nan if v is None else float(v) for v in values], dtype=float
            )
        else:
            col = np.array(values, dtype=object)
        columns.append((name, kind, col))

    stem = os.path.splitext(os.path.basename(path))[0]
    return RawDataset(stem, columns, labels, class_names)


def _is_constant(kind, values) -> bool:
    if kind == "numeric":
        observed = values[~np.isnan(values)]
        return len(np.unique(observed)) <= 1
    observed = [v for v in values if v is not None]
    return len(set(observed)) <= 1


def _is_identifier(kind, values) -> bool:
    """A non-numeric column whose observed values are all distinct."""
    if kind == "numeric":
        return False
    observed = [v for v in values if v is not None]
    return len(observed) > 0 and len(set(observed)) == len(observed)


def preprocess(raw) -> Dataset:
    """Produce the canonical numeric form.

    In order: (1) constant and identifier columns removed; (2) logical
    attributes mapped to {0, 1}; (3) missing numerics imputed by the
    column median, missing categoricals mapped to a fresh category;
    (4) categoricals expanded 1-of-N with columns named
    ``<attr>=<category>``; (5) every column standardized to mean 0 and
    sample sd 1. Re-preprocessing a canonical dataset is a no-op up to
    floating point.
    """
    if isinstance(raw, Dataset):
        raw = RawDataset(
            raw.name,
            [(c.name, "numeric", raw.features[:, j].astype(float))
             for j, c in enumerate(raw.columns)],
            raw.labels,
            raw.class_names,
        )
    n = raw.n_instances
    if n < 2:
        raise DataError("need at least 2 instances to standardize")

    encoded = []  # (ColumnInfo, float column)
    original_kinds = {}
    for name, kind, values in raw.columns:
        if _is_constant(kind, values) or _is_identifier(kind, values):
            continue
        original_kinds[name] = kind
        if kind == "logical":
            col = np.array(
                [np.nan if v is None else _LOGICAL_TOKENS[v.strip().lower()]
                 for v in values],
                dtype=float,
            )
            kind = "numeric"
            info_kind = "binary-from-logical"
        elif kind == "numeric":
            col = values.astype(float)
            info_kind = "numeric"
        else:
            cats = [MISSING_CATEGORY if v is None else v for v in values]
            seen = []
            for v in cats:
                if v not in seen:
                    seen.append(v)
            for cat in seen:
                onehot = np.array([1.0 if v == cat else 0.0 for v in cats])
                encoded.append(
                    (ColumnInfo(f"{name}={cat}", name, "one-hot-category"),
                     onehot)
                )
            continue
        if np.isnan(col).any():
            median = float(np.median(col[~np.isnan(col)]))
            col = np.where(np.isnan(col), median, col)
        encoded.append((ColumnInfo(name, name, info_kind), col))

    if not encoded:
        raise DataError(f"{raw.name}: no usable columns after removal")

    infos = [info for info, _ in encoded]
    matrix = np.column_stack([col for _, col in encoded])
    mean = matrix.mean(axis=0)
    sd = matrix.std(axis=0, ddof=1)
    if (sd == 0).any():
        # One-hot of a non-constant attribute and imputed numerics keep
        # variance; this can only happen on adversarial input.
        keep = sd > 0
        infos = [info for info, k in zip(infos, keep) if k]
        matrix = matrix[:, keep]
        mean, sd = mean[keep], sd[keep]
        if matrix.shape[1] == 0:
            raise DataError(f"{raw.name}: no usable columns after removal")
    matrix = (matrix - mean) / sd

    d = Dataset(raw.name, matrix, raw.labels.copy(), infos,
                list(raw.class_names), original_kinds)
    d.validate()
    return d


def check_eligibility(d: Dataset, feature_cap: int = 1500,
                      min_instances: int = 100, max_instances: int = 50000,
                      min_class_size: int = 10) -> EligibilityReport:
    """Evaluate the machine-checkable selection criteria.

    (a) at most ``feature_cap`` features -- both the pre-encoding
    attribute count and the encoded column count are evaluated and a
    disagreement is flagged in the message; (b) instance count within
    [min_instances, max_instances]; (e) every class with at least
    ``min_class_size`` instances. Criteria (c) and (d) concern dataset
    provenance, are not machine checkable, and never block.
    """
    violated = []
    n_original = len(d.original_kinds) if d.original_kinds else d.n_features
    n_encoded = d.n_features
    if n_encoded > feature_cap:
        msg = f"{n_encoded} encoded features exceed the cap of {feature_cap}"
        if n_original <= feature_cap:
            msg += (f" (pre-encoding count {n_original} is within the cap; "
                    "the counts disagree)")
        violated.append(("a", msg))
    elif n_original > feature_cap:
        violated.append(
            ("a", f"{n_original} original attributes exceed the cap of "
                  f"{feature_cap} (encoded count {n_encoded} is within the "
                  "cap; the counts disagree)")
        )
    if not min_instances <= d.n_instances <= max_instances:
        violated.append(
            ("b", f"{d.n_instances} instances outside "
                  f"[{min_instances}, {max_instances}]")
        )
    counts = np.bincount(d.labels, minlength=d.n_classes)
    small = [f"{d.class_names[c]} ({counts[c]})"
             for c in range(d.n_classes) if counts[c] < min_class_size]
    if small:
        violated.append(
            ("e", "classes below the minimum of "
                  f"{min_class_size} instances: {', '.join(small)}")
        )
    notes = [
        ("c", "not machine-checkable (dataset provenance); never blocks"),
        ("d", "not machine-checkable (dataset provenance); never blocks"),
    ]
    return EligibilityReport(eligible=not violated,
                             violated_criteria=violated, notes=notes)
