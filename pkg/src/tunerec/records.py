"""Line-delimited store for base-level evaluation records.

One JSON object per line keyed by (dataset, strategy, seed, outer_fold),
so an interrupted run can be restarted and will skip completed keys.
"""

import json
import os
from dataclasses import dataclass, field, asdict

__all__ = ["EvaluationRecord", "RecordStore"]


@dataclass(frozen=True)
class EvaluationRecord:
    """One scored (strategy, seed, outer fold) cell for one dataset.

    ``strategy`` is ``"tuned"`` or ``"default:<id>"``; ``score`` is the
    outer-test BAC; ``runtime`` is wall-clock seconds for the work that
    produced the score (search + final fit for tuned records, a single
    fit + evaluation for default records).
    """

    dataset: str
    strategy: str
    seed: int
    outer_fold: int
    score: float
    runtime: float
    setting: dict = field(default_factory=dict)
    failed: bool = False

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        if self.runtime < 0:
            raise ValueError(f"negative runtime {self.runtime}")

    @property
    def key(self):
        return (self.dataset, self.strategy, self.seed, self.outer_fold)


class RecordStore:
    """Append-only JSONL persistence for :class:`EvaluationRecord`."""

    def __init__(self, path):
        self.path = os.fspath(path)
        self._keys = set()
        self._records = []
        if os.path.exists(self.path):
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = EvaluationRecord(**json.loads(line))
                    self._add(rec)

    def _add(self, rec: EvaluationRecord):
        if rec.key in self._keys:
            raise ValueError(f"duplicate record key {rec.key}")
        self._keys.add(rec.key)
        self._records.append(rec)

    def __len__(self):
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._keys

    def records_for(self, dataset: str) -> list:
        return [r for r in self._records if r.dataset == dataset]

    def append(self, rec: EvaluationRecord) -> None:
        self._add(rec)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(asdict(rec), sort_keys=True) + "\n")
