"""Prefix encoding: fixed-width numeric matrices with column provenance.

Static attributes are always one-hot/passed through; dynamic attributes are
encoded per strategy: per-level frequency counts plus numeric statistics
(aggregation), per-position blocks padded to k (index), or the final event
only (last-state). Two derived temporal attributes, seconds since the
previous event and the 1-based event number, can be appended as built-in
dynamic numerics.
"""
from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .prefixing import Prefix

AGGREGATION = "aggregation"
INDEX = "index"
LAST_STATE = "last-state"
STRATEGIES = (AGGREGATION, INDEX, LAST_STATE)

OTHER = "other"
MISSING = "missing"

STAT_ORDER = ("min", "max", "mean", "sum", "std")

ACTIVITY_ATTR = "activity"
TIME_SINCE_LAST = "timesincelastevent"
EVENT_NR = "event_nr"


@dataclass(frozen=True)
class FeatureColumn:
    name: str
    origin: str  # source attribute name
    kind: str  # static-onehot | static-numeric | agg-count | agg-stat |
    #            index-onehot | index-numeric | laststate-onehot | laststate-numeric
    level: str | None = None
    event_index: int | None = None  # 1-based, index encoding only
    stat: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "origin": self.origin, "kind": self.kind,
                "level": self.level, "event_index": self.event_index,
                "stat": self.stat}

    @staticmethod
    def from_json(obj: dict) -> "FeatureColumn":
        return FeatureColumn(name=obj["name"], origin=obj["origin"],
                             kind=obj["kind"], level=obj.get("level"),
                             event_index=obj.get("event_index"),
                             stat=obj.get("stat"))


CATEGORICAL_KINDS = ("static-onehot", "agg-count", "index-onehot", "laststate-onehot")


@dataclass
class FeatureMatrix:
    columns: list  # of FeatureColumn
    rows: np.ndarray  # (n, len(columns)) float64
    row_ids: list  # of (case_id, prefix_len)
    labels: np.ndarray  # (n,) int

    @property
    def names(self):
        return [c.name for c in self.columns]

    def __post_init__(self):
        if self.rows.shape != (len(self.row_ids), len(self.columns)):
            raise ValueError("matrix shape does not match columns/row ids")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("matrix contains non-finite values after imputation")
        if len(set(self.row_ids)) != len(self.row_ids):
            raise ValueError("duplicate (case_id, prefix_len) row ids")


def _vocabulary(levels) -> list:
    return sorted(levels) + [OTHER, MISSING]


def _level_slot(vocab: list, value) -> int:
    if value is None:
        return len(vocab) - 1  # missing
    try:
        return vocab.index(value)
    except ValueError:
        return len(vocab) - 2  # other


def _temporal_series(prefix: Prefix, name: str) -> list:
    if name == EVENT_NR:
        return [float(i + 1) for i in range(prefix.prefix_len)]
    ts = [e.timestamp for e in prefix.events]
    return [0.0] + [(b - a) / 1000.0 for a, b in zip(ts, ts[1:])]


@dataclass
class EncoderModel:
    """Train-frozen vocabularies and imputation means for one bucket."""
    strategy: str
    schema: tuple  # AttributeSpec sequence the encoder was fitted on
    static_cat_vocab: dict  # attr -> ordered vocabulary incl. reserved levels
    static_num_mean: dict  # attr -> train mean (0.0 if never observed)
    dyn_cat_vocab: dict  # attr (incl. activity) -> vocabulary
    dyn_num_mean: dict  # attr (incl. temporal built-ins) -> train mean
    k: int | None = None  # index length, index strategy only
    include_temporal: bool = True
    columns: list = field(default_factory=list)

    def dyn_cat_attrs(self) -> list:
        names = [ACTIVITY_ATTR]
        names += [a.name for a in self.schema
                  if a.scope == "dynamic" and a.kind == "categorical"]
        return names

    def dyn_num_attrs(self) -> list:
        names = [a.name for a in self.schema
                 if a.scope == "dynamic" and a.kind == "numeric"]
        if self.include_temporal:
            names += [TIME_SINCE_LAST, EVENT_NR]
        return names

    def schema_hash(self) -> str:
        payload = json.dumps([c.to_json() for c in self.columns], sort_keys=True)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _build_columns(enc: EncoderModel) -> list:
    cols = []
    for a in enc.schema:
        if a.scope != "static":
            continue
        if a.kind == "categorical":
            for level in enc.static_cat_vocab[a.name]:
                cols.append(FeatureColumn(name=f"{a.name}_{level}", origin=a.name,
                                          kind="static-onehot", level=level))
        else:
            cols.append(FeatureColumn(name=a.name, origin=a.name,
                                      kind="static-numeric"))

    cat_attrs = enc.dyn_cat_attrs()
    num_attrs = enc.dyn_num_attrs()
    if enc.strategy == AGGREGATION:
        for attr in cat_attrs:
            for level in enc.dyn_cat_vocab[attr]:
                cols.append(FeatureColumn(name=f"{attr}_{level}", origin=attr,
                                          kind="agg-count", level=level))
        for attr in num_attrs:
            for stat in STAT_ORDER:
                cols.append(FeatureColumn(name=f"{stat}_{attr}", origin=attr,
                                          kind="agg-stat", stat=stat))
    elif enc.strategy == INDEX:
        for attr in cat_attrs:
            for i in range(1, enc.k + 1):
                for level in enc.dyn_cat_vocab[attr]:
                    cols.append(FeatureColumn(name=f"{attr}_{i}_{level}",
                                              origin=attr, kind="index-onehot",
                                              level=level, event_index=i))
        for attr in num_attrs:
            for i in range(1, enc.k + 1):
                cols.append(FeatureColumn(name=f"{attr}_{i}", origin=attr,
                                          kind="index-numeric", event_index=i))
    else:  # last-state
        for attr in cat_attrs:
            for level in enc.dyn_cat_vocab[attr]:
                cols.append(FeatureColumn(name=f"{attr}_{level}", origin=attr,
                                          kind="laststate-onehot", level=level))
        for attr in num_attrs:
            cols.append(FeatureColumn(name=attr, origin=attr,
                                      kind="laststate-numeric"))
    return cols


def fit_encoder(bucket, schema, strategy: str, k: int | None = None,
                include_temporal: bool = True) -> EncoderModel:
    """Freeze vocabularies (+ reserved 'other'/'missing') and imputation means.

    Column order is deterministic: attributes in schema order, levels
    lexicographic, statistics in the fixed min/max/mean/sum/std order.
    """
    if not bucket:
        raise ValueError("empty bucket")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown encoding strategy {strategy!r}")
    if strategy == INDEX and k is None:
        raise ValueError("index encoding requires k")

    static_cat_vocab = {}
    static_num_mean = {}
    for a in schema:
        if a.scope != "static":
            continue
        values = [p.static_values.get(a.name) for p in bucket]
        if a.kind == "categorical":
            static_cat_vocab[a.name] = _vocabulary(
                {v for v in values if v is not None})
        else:
            observed = [v for v in values if v is not None]
            static_num_mean[a.name] = float(np.mean(observed)) if observed else 0.0

    dyn_cat_vocab = {ACTIVITY_ATTR: _vocabulary(
        {e.activity for p in bucket for e in p.events})}
    dyn_num_mean = {}
    for a in schema:
        if a.scope != "dynamic":
            continue
        if a.kind == "categorical":
            seen = {e.dynamic_values.get(a.name) for p in bucket for e in p.events}
            dyn_cat_vocab[a.name] = _vocabulary({v for v in seen if v is not None})
        else:
            observed = [e.dynamic_values.get(a.name)
                        for p in bucket for e in p.events]
            observed = [v for v in observed if v is not None]
            dyn_num_mean[a.name] = float(np.mean(observed)) if observed else 0.0
    if include_temporal:
        for name in (TIME_SINCE_LAST, EVENT_NR):
            series = [v for p in bucket for v in _temporal_series(p, name)]
            dyn_num_mean[name] = float(np.mean(series))

    enc = EncoderModel(strategy=strategy, schema=tuple(schema),
                       static_cat_vocab=static_cat_vocab,
                       static_num_mean=static_num_mean,
                       dyn_cat_vocab=dyn_cat_vocab,
                       dyn_num_mean=dyn_num_mean,
                       k=int(k) if strategy == INDEX else None,
                       include_temporal=include_temporal)
    enc.columns = _build_columns(enc)
    return enc


def _check_schema(enc: EncoderModel, prefix: Prefix) -> None:
    static_names = {a.name for a in enc.schema if a.scope == "static"}
    if set(prefix.static_values) != static_names:
        raise ValueError("schema mismatch: static attributes differ")
    dyn_names = {a.name for a in enc.schema if a.scope == "dynamic"}
    for e in prefix.events:
        if set(e.dynamic_values) != dyn_names:
            raise ValueError("schema mismatch: dynamic attributes differ")


def _dyn_numeric_series(enc: EncoderModel, prefix: Prefix, attr: str) -> list:
    if attr in (TIME_SINCE_LAST, EVENT_NR):
        return _temporal_series(prefix, attr)
    mean = enc.dyn_num_mean[attr]
    return [e.dynamic_values[attr] if e.dynamic_values[attr] is not None else mean
            for e in prefix.events]


def _dyn_cat_value(prefix: Prefix, attr: str, event_idx: int):
    e = prefix.events[event_idx]
    return e.activity if attr == ACTIVITY_ATTR else e.dynamic_values[attr]


def encode_instance(enc: EncoderModel, prefix: Prefix) -> np.ndarray:
    """Encode one prefix; identical to its row inside an encoded bucket."""
    _check_schema(enc, prefix)
    out = []
    for a in enc.schema:
        if a.scope != "static":
            continue
        if a.kind == "categorical":
            vocab = enc.static_cat_vocab[a.name]
            block = [0.0] * len(vocab)
            block[_level_slot(vocab, prefix.static_values[a.name])] = 1.0
            out.extend(block)
        else:
            v = prefix.static_values[a.name]
            out.append(float(v) if v is not None else enc.static_num_mean[a.name])

    cat_attrs = enc.dyn_cat_attrs()
    num_attrs = enc.dyn_num_attrs()
    if enc.strategy == AGGREGATION:
        for attr in cat_attrs:
            vocab = enc.dyn_cat_vocab[attr]
            counts = [0.0] * len(vocab)
            for i in range(prefix.prefix_len):
                counts[_level_slot(vocab, _dyn_cat_value(prefix, attr, i))] += 1.0
            out.extend(counts)
        for attr in num_attrs:
            series = np.asarray(_dyn_numeric_series(enc, prefix, attr))
            out.extend([float(series.min()), float(series.max()),
                        float(series.mean()), float(series.sum()),
                        float(series.std())])
    elif enc.strategy == INDEX:
        for attr in cat_attrs:
            vocab = enc.dyn_cat_vocab[attr]
            for i in range(enc.k):
                block = [0.0] * len(vocab)
                if i < prefix.prefix_len:
                    block[_level_slot(vocab, _dyn_cat_value(prefix, attr, i))] = 1.0
                out.extend(block)
        for attr in num_attrs:
            series = _dyn_numeric_series(enc, prefix, attr)
            mean = enc.dyn_num_mean[attr]
            for i in range(enc.k):
                out.append(float(series[i]) if i < prefix.prefix_len else mean)
    else:  # last-state
        last = prefix.prefix_len - 1
        for attr in cat_attrs:
            vocab = enc.dyn_cat_vocab[attr]
            block = [0.0] * len(vocab)
            block[_level_slot(vocab, _dyn_cat_value(prefix, attr, last))] = 1.0
            out.extend(block)
        for attr in num_attrs:
            series = _dyn_numeric_series(enc, prefix, attr)
            out.append(float(series[last]))

    return np.asarray(out, dtype=np.float64)


def encode_bucket(enc: EncoderModel, bucket) -> FeatureMatrix:
    if not bucket:
        raise ValueError("empty bucket")
    rows = np.vstack([encode_instance(enc, p) for p in bucket])
    return FeatureMatrix(columns=list(enc.columns), rows=rows,
                         row_ids=[(p.case_id, p.prefix_len) for p in bucket],
                         labels=np.asarray([p.label for p in bucket], dtype=int))


# ---------------------------------------------------------------------------
# exports

def write_matrix_csv(matrix: FeatureMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(matrix.names + ["__label"])
        for i in range(matrix.rows.shape[0]):
            writer.writerow([repr(float(v)) for v in matrix.rows[i]]
                            + [int(matrix.labels[i])])


def read_matrix_csv(path, features_path=None) -> FeatureMatrix:
    """Read a matrix CSV back; provenance restored from the features JSON
    when available, else columns degrade to bare static-numeric records."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[-1] != "__label":
            raise ValueError("matrix CSV must end with a __label column")
        names = header[:-1]
        data, labels = [], []
        for row in reader:
            data.append([float(v) for v in row[:-1]])
            labels.append(int(row[-1]))
    if features_path is not None:
        columns = read_features_json(features_path)
        if [c.name for c in columns] != names:
            raise ValueError("features JSON does not match matrix header")
    else:
        columns = [FeatureColumn(name=n, origin=n, kind="static-numeric")
                   for n in names]
    return FeatureMatrix(columns=columns,
                         rows=np.asarray(data, dtype=np.float64),
                         row_ids=[("row", i) for i in range(len(data))],
                         labels=np.asarray(labels, dtype=int))


def write_features_json(columns, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([c.to_json() for c in columns], fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_features_json(path) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        return [FeatureColumn.from_json(o) for o in json.load(fh)]
