import pytest

from tunerec.records import EvaluationRecord, RecordStore


def _rec(**kw):
    base = dict(dataset="d", strategy="tuned", seed=1, outer_fold=0,
                score=0.5, runtime=0.1)
    base.update(kw)
    return EvaluationRecord(**base)


def test_record_validation():
    with pytest.raises(ValueError, match="outside"):
        _rec(score=1.5)
    with pytest.raises(ValueError, match="negative runtime"):
        _rec(runtime=-1.0)
    assert _rec().key == ("d", "tuned", 1, 0)


def test_store_appends_and_rejects_duplicates(tmp_path):
    store = RecordStore(tmp_path / "r.jsonl")
    store.append(_rec())
    store.append(_rec(outer_fold=1))
    assert len(store) == 2
    assert ("d", "tuned", 1, 0) in store
    assert ["d"] == sorted({r.dataset for r in store})
    with pytest.raises(ValueError, match="duplicate"):
        store.append(_rec())


def test_store_reloads_from_disk(tmp_path):
    path = tmp_path / "r.jsonl"
    store = RecordStore(path)
    store.append(_rec(setting={"C": 2.0, "gamma": 0.1}))
    store.append(_rec(dataset="e", strategy="default:default", failed=True))

    with open(path, "a") as fh:
        fh.write("\n")  # blank lines are tolerated

    again = RecordStore(path)
    assert len(again) == 2
    assert again.records_for("d")[0].setting == {"C": 2.0, "gamma": 0.1}
    assert again.records_for("e")[0].failed is True


def test_store_duplicate_lines_fail_at_load(tmp_path):
    path = tmp_path / "r.jsonl"
    store = RecordStore(path)
    store.append(_rec())
    line = path.read_text()
    path.write_text(line + line)
    with pytest.raises(ValueError, match="duplicate"):
        RecordStore(path)
