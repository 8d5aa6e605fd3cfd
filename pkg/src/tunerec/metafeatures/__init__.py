"""Dataset characterization: 80 meta-features in 7 categories plus 10
relative-landmarking differences.

``extract_all`` normalizes instance order (sort by row hash) before
extraction so every value is permutation invariant, then concatenates
the categories in canonical order: SM, ST, IN, MB, LM, DC, CN, RL.
"""

import csv
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .common import MetaFeatureError
from .complexity import extract_data_complexity
from .info_theory import extract_infotheoretic
from .landmarking import extract_landmarking
from .model_based import extract_model_based
from .network import extract_complex_network
from .relative import RL_PAIRS, extract_relative_landmarking
from .simple import extract_simple
from .statistical import extract_statistical

__all__ = [
    "MetaFeatureError",
    "MetaFeatureVector",
    "extract_all",
    "extract_simple",
    "extract_statistical",
    "extract_infotheoretic",
    "extract_model_based",
    "extract_landmarking",
    "extract_data_complexity",
    "extract_complex_network",
    "extract_relative_landmarking",
    "schema",
    "describe_schema",
    "canonical_order",
    "write_vectors",
    "read_vectors",
]

_SM_NAMES = (
    "SM.classes", "SM.attributes", "SM.numeric", "SM.nominal",
    "SM.samples", "SM.dimension", "SM.numRate", "SM.nomRate",
    "SM.symbols_min", "SM.symbols_max", "SM.symbols_mean",
    "SM.symbols_sd", "SM.symbols_sum",
    "SM.classes_min", "SM.classes_max", "SM.classes_mean",
    "SM.classes_sd",
)
_ST_NAMES = ("ST.sks", "ST.sksP", "ST.kts", "ST.ktsP", "ST.absC",
             "ST.canC", "ST.frac")
_IN_NAMES = ("IN.clEnt", "IN.nClEnt", "IN.atrEnt", "IN.nAtrEnt",
             "IN.jEnt", "IN.mutInf", "IN.eqAtr", "IN.noiSig")
_MB_NAMES = (
    "MB.nodes", "MB.leaves", "MB.nodeAtr", "MB.nodeIns", "MB.leafCor",
    "MB.lev_min", "MB.lev_max", "MB.lev_mean", "MB.lev_sd",
    "MB.bran_min", "MB.bran_max", "MB.bran_mean", "MB.bran_sd",
    "MB.att_min", "MB.att_max", "MB.att_mean", "MB.att_sd",
)
_LM_NAMES = ("LM.nb", "LM.stump_min", "LM.stump_max", "LM.stump_mean",
             "LM.stump_sd", "LM.stMinGain", "LM.stRand", "LM.nn")
_DC_NAMES = ("DC.f1", "DC.f1v", "DC.f2", "DC.f3", "DC.f4", "DC.l1",
             "DC.l2", "DC.l3", "DC.n1", "DC.n2", "DC.n3", "DC.n4",
             "DC.t1", "DC.t2")
_CN_NAMES = ("CN.edges", "CN.degree", "CN.density", "CN.maxComp",
             "CN.closeness", "CN.betweenness", "CN.clsCoef", "CN.hubs",
             "CN.avgPath")
_RL_NAMES = tuple(f"RL.diff.{a}.{b}" for a, b in RL_PAIRS)

_CATEGORIES = (
    ("SM", _SM_NAMES, extract_simple),
    ("ST", _ST_NAMES, extract_statistical),
    ("IN", _IN_NAMES, extract_infotheoretic),
    ("MB", _MB_NAMES, extract_model_based),
    ("LM", _LM_NAMES, extract_landmarking),
    ("DC", _DC_NAMES, extract_data_complexity),
    ("CN", _CN_NAMES, extract_complex_network),
)

_DESCRIPTIONS = {
    "SM.classes": "Number of classes",
    "SM.attributes": "Number of original attributes",
    "SM.numeric": "Number of numeric attributes",
    "SM.nominal": "Number of nominal attributes",
    "SM.samples": "Number of instances",
    "SM.dimension": "Instances per attribute",
    "SM.numRate": "Share of numeric attributes",
    "SM.nomRate": "Share of nominal attributes",
    "SM.symbols_min": "Fewest categories over nominal attributes",
    "SM.symbols_max": "Most categories over nominal attributes",
    "SM.symbols_mean": "Mean categories per nominal attribute",
    "SM.symbols_sd": "Sd of categories per nominal attribute",
    "SM.symbols_sum": "Total categories over nominal attributes",
    "SM.classes_min": "Smallest relative class frequency",
    "SM.classes_max": "Largest relative class frequency",
    "SM.classes_mean": "Mean relative class frequency",
    "SM.classes_sd": "Sd of relative class frequencies",
    "ST.sks": "Mean attribute skewness",
    "ST.sksP": "Mean attribute skewness after min-max rescaling",
    "ST.kts": "Mean attribute excess kurtosis",
    "ST.ktsP": "Mean attribute excess kurtosis after min-max rescaling",
    "ST.absC": "Mean absolute correlation between attribute pairs",
    "ST.canC": "First canonical correlation against the class",
    "ST.frac": "First canonical correlation's share of the total",
    "IN.clEnt": "Class entropy (bits)",
    "IN.nClEnt": "Class entropy over its maximum",
    "IN.atrEnt": "Mean discretized-attribute entropy",
    "IN.nAtrEnt": "Mean attribute entropy over its maximum",
    "IN.jEnt": "Mean attribute-class joint entropy",
    "IN.mutInf": "Mean attribute-class mutual information",
    "IN.eqAtr": "Class entropy over mutual information",
    "IN.noiSig": "Non-informative attribute entropy over mutual information",
    "MB.nodes": "Decision-tree node count",
    "MB.leaves": "Decision-tree leaf count",
    "MB.nodeAtr": "Tree nodes per attribute",
    "MB.nodeIns": "Tree nodes per instance",
    "MB.leafCor": "Tree leaves per instance",
    "MB.lev_min": "Shallowest leaf depth",
    "MB.lev_max": "Deepest leaf depth",
    "MB.lev_mean": "Mean leaf depth",
    "MB.lev_sd": "Sd of leaf depths",
    "MB.bran_min": "Shortest branch length",
    "MB.bran_max": "Longest branch length",
    "MB.bran_mean": "Mean branch length",
    "MB.bran_sd": "Sd of branch lengths",
    "MB.att_min": "Fewest splits on one attribute",
    "MB.att_max": "Most splits on one attribute",
    "MB.att_mean": "Mean splits per attribute",
    "MB.att_sd": "Sd of splits per attribute",
    "LM.nb": "Naive Bayes CV accuracy",
    "LM.stump_min": "Worst per-attribute stump CV accuracy",
    "LM.stump_max": "Best per-attribute stump CV accuracy",
    "LM.stump_mean": "Mean per-attribute stump CV accuracy",
    "LM.stump_sd": "Sd of per-attribute stump CV accuracies",
    "LM.stMinGain": "Stump CV accuracy on the minimum gain-ratio attribute",
    "LM.stRand": "Stump CV accuracy on a seeded random attribute",
    "LM.nn": "1-nearest-neighbor CV accuracy",
    "DC.f1": "Maximum Fisher's discriminant ratio",
    "DC.f1v": "Directional-vector maximum Fisher's discriminant ratio",
    "DC.f2": "Overlap volume of per-class bounding boxes",
    "DC.f3": "Maximum individual feature efficiency",
    "DC.f4": "Collective feature efficiency",
    "DC.l1": "Mean error distance to a linear boundary",
    "DC.l2": "Training error of a linear classifier",
    "DC.l3": "Nonlinearity of a linear classifier",
    "DC.n1": "Fraction of points on the class boundary",
    "DC.n2": "Intra- over inter-class nearest-neighbor distance",
    "DC.n3": "Leave-one-out 1-NN error rate",
    "DC.n4": "Nonlinearity of the 1-NN classifier",
    "DC.t1": "Fraction of maximal covering spheres",
    "DC.t2": "Instances per encoded dimension",
    "CN.edges": "Edge count of the instance graph",
    "CN.degree": "Mean vertex degree",
    "CN.density": "Edge density",
    "CN.maxComp": "Connected component count",
    "CN.closeness": "Mean closeness centrality",
    "CN.betweenness": "Mean betweenness centrality",
    "CN.clsCoef": "Mean local clustering coefficient",
    "CN.hubs": "Mean hub score",
    "CN.avgPath": "Mean shortest-path length",
}
_RL_LEARNER = {"svm": "SVM", "nn": "1-NN", "nb": "naive Bayes",
               "stump": "stump", "lm": "linear"}
for _a, _b in RL_PAIRS:
    _DESCRIPTIONS[f"RL.diff.{_a}.{_b}"] = (
        f"Accuracy of {_RL_LEARNER[_a]} minus {_RL_LEARNER[_b]}"
    )


def schema(include_rl: bool = True) -> tuple:
    """Canonical feature-name order: 80 names, 90 with the relative
    measures."""
    names = sum((list(n) for _, n, _ in _CATEGORIES), [])
    if include_rl:
        names += list(_RL_NAMES)
    return tuple(names)


def describe_schema(include_rl: bool = True) -> list:
    """(name, description) pairs in canonical order."""
    return [(name, _DESCRIPTIONS[name]) for name in schema(include_rl)]


@dataclass(frozen=True)
class MetaFeatureVector:
    """One dataset's characterization: an ordered name-to-value map."""

    dataset: str
    values: dict = field(repr=False)

    def __post_init__(self):
        expected = schema(include_rl=len(self.values) == 90)
        got = tuple(self.values)
        if got != expected:
            raise ValueError(
                f"vector for {self.dataset!r} has {len(got)} names that do "
                "not match the canonical schema"
            )
        for name, value in self.values.items():
            if not math.isfinite(value):
                raise ValueError(f"{name} is not finite for {self.dataset!r}")
        # Plain floats throughout, so serialization is repr-stable.
        object.__setattr__(
            self, "values", {k: float(v) for k, v in self.values.items()}
        )

    @property
    def names(self) -> tuple:
        return tuple(self.values)

    def array(self) -> np.ndarray:
        return np.array(list(self.values.values()), dtype=np.float64)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, name):
        return self.values[name]


def canonical_order(d) -> np.ndarray:
    """Instance permutation sorting rows by the hash of their bytes,
    making downstream seeded operations independent of input order."""
    digests = []
    for i in range(d.n_instances):
        h = hashlib.sha256()
        h.update(d.features[i].tobytes())
        h.update(int(d.labels[i]).to_bytes(8, "big", signed=True))
        digests.append(h.digest())
    return np.array(sorted(range(d.n_instances), key=digests.__getitem__),
                    dtype=np.int64)


def extract_all(d, include_rl: bool = True) -> MetaFeatureVector:
    """Extract every category in canonical order.

    Any category failure raises MetaFeatureError naming the category
    and dataset; values are checked finite, so a returned vector never
    carries NaN or Inf.
    """
    dc = d.subset(canonical_order(d))
    categories = list(_CATEGORIES)
    if include_rl:
        categories.append(("RL", _RL_NAMES, extract_relative_landmarking))
    values = {}
    for cat, names, fn in categories:
        try:
            out = fn(dc)
        except Exception as exc:
            raise MetaFeatureError(
                f"{cat} extraction failed for dataset {d.name!r}: {exc}"
            ) from exc
        if tuple(out) != names:
            raise MetaFeatureError(
                f"{cat} extractor returned names out of schema order"
            )
        for name, value in out.items():
            if not math.isfinite(value):
                raise MetaFeatureError(
                    f"{name} is not finite for dataset {d.name!r}"
                )
        values.update(out)
    return MetaFeatureVector(dataset=d.name, values=values)


def write_vectors(vectors, path, header_lines=()):
    """One CSV row per dataset under the canonical schema header."""
    if not vectors:
        raise ValueError("no vectors to write")
    names = vectors[0].names
    for v in vectors:
        if v.names != names:
            raise ValueError("vectors mix schemas")
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["dataset", *names])
        for v in vectors:
            writer.writerow([v.dataset, *(repr(float(x)) for x in v.array())])


def read_vectors(path):
    with open(path, newline="") as fh:
        rows = [line for line in fh if not line.startswith("#")]
    reader = csv.reader(rows)
    header = next(reader)
    if header[0] != "dataset":
        raise ValueError("first column must be 'dataset'")
    names = tuple(header[1:])
    vectors = []
    for row in reader:
        values = dict(zip(names, (float(x) for x in row[1:])))
        vectors.append(MetaFeatureVector(dataset=row[0], values=values))
    return vectors
