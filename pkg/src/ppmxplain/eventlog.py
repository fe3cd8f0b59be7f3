"""Event logs: parsing, validation, labeling, statistics, synthesis, splitting.

An event log is a list of traces (one per process case), each trace an
ordered list of events. Besides the three mandatory columns (case id,
activity, timestamp) a log carries static attributes (constant per case)
and dynamic attributes (one value per event), each categorical or numeric.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

MANDATORY_COLUMNS = ("case_id", "activity", "timestamp")

POSITIVE = 1
NEGATIVE = 0


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    scope: str  # "static" | "dynamic"
    kind: str  # "categorical" | "numeric"

    def __post_init__(self):
        if self.scope not in ("static", "dynamic"):
            raise ValueError(f"bad attribute scope: {self.scope!r}")
        if self.kind not in ("categorical", "numeric"):
            raise ValueError(f"bad attribute kind: {self.kind!r}")
        if self.name in MANDATORY_COLUMNS:
            raise ValueError(
                f"mandatory column {self.name!r} must not be declared as an attribute")


@dataclass(frozen=True)
class Event:
    activity: str
    timestamp: int  # epoch milliseconds
    dynamic_values: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Trace:
    case_id: str
    static_values: dict
    events: tuple  # of Event, time-sorted

    def __len__(self):
        return len(self.events)

    @property
    def start_time(self) -> int:
        return self.events[0].timestamp

    @property
    def duration_ms(self) -> int:
        return self.events[-1].timestamp - self.events[0].timestamp

    def activity_sequence(self) -> tuple:
        return tuple(e.activity for e in self.events)


@dataclass(frozen=True)
class EventLog:
    schema: tuple  # of AttributeSpec
    traces: tuple  # of Trace

    def static_attrs(self):
        return [a for a in self.schema if a.scope == "static"]

    def dynamic_attrs(self):
        return [a for a in self.schema if a.scope == "dynamic"]

    def attribute(self, name: str) -> AttributeSpec:
        for a in self.schema:
            if a.name == name:
                return a
        raise ValueError(f"unknown attribute {name!r}")


@dataclass(frozen=True)
class LabelingRule:
    kind: str  # "duration-threshold" | "activity-occurs" | "static-attribute-equals"
    parameters: dict
    positive_class: str = "positive"
    negative_class: str = "negative"

    KINDS = ("duration-threshold", "activity-occurs", "static-attribute-equals")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown labeling rule kind {self.kind!r}")

    @staticmethod
    def from_json(obj: dict) -> "LabelingRule":
        obj = dict(obj)
        kind = obj.pop("kind", None)
        pos = obj.pop("positive_class", "positive")
        neg = obj.pop("negative_class", "negative")
        return LabelingRule(kind=kind, parameters=obj,
                            positive_class=pos, negative_class=neg)

    def to_json(self) -> dict:
        out = {"kind": self.kind,
               "positive_class": self.positive_class,
               "negative_class": self.negative_class}
        out.update(self.parameters)
        return out


@dataclass(frozen=True)
class LabeledLog:
    log: EventLog
    labels: dict  # case_id -> POSITIVE | NEGATIVE

    def label_of(self, case_id: str) -> int:
        return self.labels[case_id]


@dataclass
class LogStatistics:
    trace_count: int
    shortest_trace_len: int
    avg_trace_len: float
    longest_trace_len: int
    trace_variant_count: int
    positive_class_ratio: float
    event_class_count: int
    static_col_count: int
    dynamic_col_count: int
    categorical_col_count: int
    numeric_col_count: int
    categorical_levels_static: int
    categorical_levels_dynamic: int


@dataclass
class SynthConfig:
    """Generator knobs for a desk-scale synthetic labeled log.

    ``signal_attribute`` names the attribute that drives the label;
    the label agrees with that attribute's binary indicator with
    probability ``signal_strength`` (1.0 means the label equals the
    indicator, 0.5 means pure noise).
    """
    trace_count: int = 100
    min_len: int = 3
    max_len: int = 8
    activity_alphabet_size: int = 5
    static_categorical: int = 1
    static_numeric: int = 1
    dynamic_categorical: int = 1
    dynamic_numeric: int = 1
    static_levels: int = 3
    dynamic_levels: int = 3
    signal_attribute: str | None = None  # default: first static categorical
    signal_strength: float = 0.9
    seed: int = 0

    def __post_init__(self):
        if self.min_len < 1:
            raise ValueError("min_len must be >= 1")
        if self.min_len > self.max_len:
            raise ValueError("contradictory bounds: min_len > max_len")
        if not 0.0 <= self.signal_strength <= 1.0:
            raise ValueError("signal_strength must lie in [0, 1]")
        if self.trace_count < 1:
            raise ValueError("trace_count must be >= 1")

    @staticmethod
    def from_json(obj: dict) -> "SynthConfig":
        return SynthConfig(**obj)


# ---------------------------------------------------------------------------
# timestamps

def parse_timestamp(text: str) -> int:
    """ISO-8601 with offset -> epoch milliseconds."""
    raw = text.strip()
    if raw.endswith("Z"):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError:
        raise ValueError(f"unparseable timestamp: {text!r}") from None
    if dt.tzinfo is None:
        raise ValueError(f"unparseable timestamp (missing offset): {text!r}")
    return int(round(dt.timestamp() * 1000))


def format_timestamp(ms: int) -> str:
    dt = datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)
    return dt.isoformat(timespec="milliseconds")


# ---------------------------------------------------------------------------
# schema I/O

def load_schema(path) -> tuple:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return schema_from_json(obj)


def schema_from_json(obj: dict) -> tuple:
    specs = []
    for scope in ("static", "dynamic"):
        for name, kind in obj.get(scope, {}).items():
            specs.append(AttributeSpec(name=name, scope=scope, kind=kind))
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ValueError("attribute names must be unique within a schema")
    return tuple(specs)


def schema_to_json(schema) -> dict:
    out = {"static": {}, "dynamic": {}}
    for a in schema:
        out[a.scope][a.name] = a.kind
    return out


# ---------------------------------------------------------------------------
# CSV ingestion

def _parse_value(raw: str, spec: AttributeSpec):
    if raw is None or raw == "":
        return None  # explicit missing marker
    if spec.kind == "numeric":
        try:
            return float(raw)
        except ValueError:
            raise ValueError(
                f"non-numeric value {raw!r} in numeric column {spec.name!r}") from None
    return raw


def parse_event_log(csv_path, schema_path) -> EventLog:
    """Read an event-log CSV plus its JSON schema sidecar.

    The CSV must carry exactly the header ``case_id,activity,timestamp``
    plus every declared attribute column; rows are grouped by case id and
    events sorted by timestamp (ties keep input order).
    """
    schema = load_schema(schema_path)
    by_name = {a.name: a for a in schema}

    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty CSV: header row required") from None
        for col in MANDATORY_COLUMNS:
            if col not in header:
                raise ValueError(f"missing mandatory column {col!r}")
        for col in header:
            if col not in MANDATORY_COLUMNS and col not in by_name:
                raise ValueError(f"unknown column {col!r} not declared in schema")
        for name in by_name:
            if name not in header:
                raise ValueError(f"column {name!r} declared in schema missing from CSV")
        col_idx = {c: i for i, c in enumerate(header)}

        # case_id -> list of (timestamp, row_index, event, static row values)
        rows_by_case: dict = {}
        seen_rows = set()
        for row_index, row in enumerate(reader):
            if len(row) != len(header):
                raise ValueError(f"row {row_index}: expected {len(header)} fields")
            case_id = row[col_idx["case_id"]]
            if case_id == "":
                raise ValueError(f"row {row_index}: empty case id")
            key = (case_id, row_index)
            if key in seen_rows:
                raise ValueError(f"duplicate (case_id, row_index) conflict: {key}")
            seen_rows.add(key)
            ts = parse_timestamp(row[col_idx["timestamp"]])
            dynamic_values = {}
            static_row = {}
            for a in schema:
                val = _parse_value(row[col_idx[a.name]], a)
                if a.scope == "dynamic":
                    dynamic_values[a.name] = val
                else:
                    static_row[a.name] = val
            event = Event(activity=row[col_idx["activity"]], timestamp=ts,
                          dynamic_values=dynamic_values)
            rows_by_case.setdefault(case_id, []).append(
                (ts, row_index, event, static_row))

    traces = []
    for case_id, entries in rows_by_case.items():
        statics = {}
        for a in (s for s in schema if s.scope == "static"):
            values = [e[3][a.name] for e in entries]
            first = values[0]
            if any(v != first for v in values[1:]):
                raise ValueError(
                    f"static attribute varies within case {case_id!r}: {a.name!r}")
            statics[a.name] = first
        entries.sort(key=lambda e: (e[0], e[1]))  # stable by (timestamp, input order)
        traces.append(Trace(case_id=case_id, static_values=statics,
                            events=tuple(e[2] for e in entries)))

    log = EventLog(schema=schema, traces=tuple(traces))
    validate_log(log)
    return log


def validate_log(log: EventLog) -> None:
    case_ids = [t.case_id for t in log.traces]
    if len(set(case_ids)) != len(case_ids):
        raise ValueError("duplicate case ids in event log")
    dyn_names = {a.name for a in log.dynamic_attrs()}
    static_names = {a.name for a in log.static_attrs()}
    for t in log.traces:
        if len(t.events) < 1:
            raise ValueError(f"case {t.case_id!r} has no events")
        if set(t.static_values) != static_names:
            raise ValueError(f"case {t.case_id!r} does not match the static schema")
        last = None
        for e in t.events:
            if set(e.dynamic_values) != dyn_names:
                raise ValueError(
                    f"case {t.case_id!r} has an event not matching the dynamic schema")
            if last is not None and e.timestamp < last:
                raise ValueError(f"case {t.case_id!r}: events not time-sorted")
            last = e.timestamp


def write_event_log(log: EventLog, csv_path, schema_path=None) -> None:
    """Serialize a log back to the CSV + schema-JSON pair (round-trip safe)."""
    attr_names = [a.name for a in log.schema]
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(MANDATORY_COLUMNS) + attr_names)
        for t in log.traces:
            for e in t.events:
                row = [t.case_id, e.activity, format_timestamp(e.timestamp)]
                for a in log.schema:
                    v = t.static_values[a.name] if a.scope == "static" \
                        else e.dynamic_values[a.name]
                    if v is None:
                        row.append("")
                    elif a.kind == "numeric":
                        row.append(repr(float(v)))
                    else:
                        row.append(v)
                writer.writerow(row)
    if schema_path is not None:
        with open(schema_path, "w", encoding="utf-8") as fh:
            json.dump(schema_to_json(log.schema), fh, indent=2, sort_keys=True)
            fh.write("\n")


# ---------------------------------------------------------------------------
# statistics

def compute_statistics(labeled: LabeledLog) -> LogStatistics:
    log = labeled.log
    if not log.traces:
        raise ValueError("empty log")
    lengths = [len(t) for t in log.traces]
    variants = {t.activity_sequence() for t in log.traces}
    activities = {e.activity for t in log.traces for e in t.events}
    positives = sum(1 for t in log.traces
                    if labeled.labels[t.case_id] == POSITIVE)

    static_attrs = log.static_attrs()
    dynamic_attrs = log.dynamic_attrs()

    def distinct_levels(attrs, scope):
        total = 0
        for a in attrs:
            if a.kind != "categorical":
                continue
            seen = set()
            for t in log.traces:
                if scope == "static":
                    v = t.static_values[a.name]
                    if v is not None:
                        seen.add(v)
                else:
                    for e in t.events:
                        v = e.dynamic_values[a.name]
                        if v is not None:
                            seen.add(v)
            total += len(seen)
        return total

    return LogStatistics(
        trace_count=len(log.traces),
        shortest_trace_len=min(lengths),
        avg_trace_len=float(np.mean(lengths)),
        longest_trace_len=max(lengths),
        trace_variant_count=len(variants),
        positive_class_ratio=positives / len(log.traces),
        event_class_count=len(activities),
        static_col_count=len(static_attrs),
        dynamic_col_count=len(dynamic_attrs),
        categorical_col_count=sum(1 for a in log.schema if a.kind == "categorical"),
        numeric_col_count=sum(1 for a in log.schema if a.kind == "numeric"),
        categorical_levels_static=distinct_levels(static_attrs, "static"),
        categorical_levels_dynamic=distinct_levels(dynamic_attrs, "dynamic"),
    )


# ---------------------------------------------------------------------------
# labeling

def apply_labeling(log: EventLog, rule: LabelingRule) -> LabeledLog:
    """Label every complete trace according to the rule (deterministic)."""
    labels = {}
    if rule.kind == "duration-threshold":
        threshold = rule.parameters.get("threshold_ms")
        if threshold is None:
            raise ValueError("duration-threshold rule requires 'threshold_ms'")
        for t in log.traces:
            labels[t.case_id] = POSITIVE if t.duration_ms >= threshold else NEGATIVE
    elif rule.kind == "activity-occurs":
        act = rule.parameters.get("activity")
        if act is None:
            raise ValueError("activity-occurs rule requires 'activity'")
        for t in log.traces:
            labels[t.case_id] = POSITIVE if act in t.activity_sequence() else NEGATIVE
    else:  # static-attribute-equals
        attr = rule.parameters.get("attribute")
        value = rule.parameters.get("value")
        if attr is None:
            raise ValueError("static-attribute-equals rule requires 'attribute'")
        spec = log.attribute(attr)
        if spec.scope != "static":
            raise ValueError(f"attribute {attr!r} is not static")
        for t in log.traces:
            labels[t.case_id] = POSITIVE if t.static_values[attr] == value else NEGATIVE
    return LabeledLog(log=log, labels=labels)


# ---------------------------------------------------------------------------
# synthesis

_BASE_EPOCH_MS = 1704067200000  # 2024-01-01T00:00:00+00:00


def _signal_indicator(cfg: SynthConfig, spec: AttributeSpec, trace_static, trace_events):
    """Binary indicator of the planted signal attribute for one trace."""
    if spec.scope == "static":
        v = trace_static[spec.name]
        if spec.kind == "categorical":
            return v == "v00"
        return v > 0.0
    if spec.kind == "categorical":
        return any(e.dynamic_values[spec.name] == "v00" for e in trace_events)
    vals = [e.dynamic_values[spec.name] for e in trace_events]
    return float(np.mean(vals)) > 0.0


def generate_synthetic_log(cfg: SynthConfig) -> LabeledLog:
    """Seeded synthetic labeled log whose label tracks one planted attribute."""
    specs = []
    for i in range(cfg.static_categorical):
        specs.append(AttributeSpec(f"sc{i}", "static", "categorical"))
    for i in range(cfg.static_numeric):
        specs.append(AttributeSpec(f"sn{i}", "static", "numeric"))
    for i in range(cfg.dynamic_categorical):
        specs.append(AttributeSpec(f"dc{i}", "dynamic", "categorical"))
    for i in range(cfg.dynamic_numeric):
        specs.append(AttributeSpec(f"dn{i}", "dynamic", "numeric"))
    schema = tuple(specs)

    signal_name = cfg.signal_attribute
    if signal_name is None:
        if cfg.static_categorical < 1:
            raise ValueError("no static categorical attribute to plant the signal on; "
                             "set signal_attribute explicitly")
        signal_name = "sc0"
    signal_spec = next((a for a in schema if a.name == signal_name), None)
    if signal_spec is None:
        raise ValueError(f"signal attribute {signal_name!r} not in generated schema")

    rng = np.random.default_rng(cfg.seed)
    activities = [f"act{i:02d}" for i in range(cfg.activity_alphabet_size)]
    static_level_pool = [f"v{j:02d}" for j in range(cfg.static_levels)]
    dynamic_level_pool = [f"v{j:02d}" for j in range(cfg.dynamic_levels)]

    traces = []
    labels = {}
    for i in range(cfg.trace_count):
        case_id = f"case{i:05d}"
        statics = {}
        for a in schema:
            if a.scope != "static":
                continue
            if a.kind == "categorical":
                statics[a.name] = static_level_pool[rng.integers(cfg.static_levels)]
            else:
                statics[a.name] = float(rng.normal())
        length = int(rng.integers(cfg.min_len, cfg.max_len + 1))
        start = _BASE_EPOCH_MS + int(rng.integers(0, 90 * 86400)) * 1000
        ts = start
        events = []
        for _ in range(length):
            dyn = {}
            for a in schema:
                if a.scope != "dynamic":
                    continue
                if a.kind == "categorical":
                    dyn[a.name] = dynamic_level_pool[rng.integers(cfg.dynamic_levels)]
                else:
                    dyn[a.name] = float(rng.normal())
            events.append(Event(activity=activities[rng.integers(len(activities))],
                                timestamp=ts, dynamic_values=dyn))
            ts += int(rng.integers(60, 3600)) * 1000
        trace = Trace(case_id=case_id, static_values=statics, events=tuple(events))
        traces.append(trace)

        indicator = _signal_indicator(cfg, signal_spec, statics, events)
        agree = bool(rng.random() < cfg.signal_strength)
        labels[case_id] = POSITIVE if (indicator == agree) else NEGATIVE

    labeled = LabeledLog(log=EventLog(schema=schema, traces=tuple(traces)),
                         labels=labels)
    validate_log(labeled.log)
    return labeled


# ---------------------------------------------------------------------------
# splitting

def temporal_split(labeled: LabeledLog, train_ratio: float):
    """Split cases by first-event time: earliest ceil(ratio*n) cases train.

    Both partitions are returned with their traces sorted by start time,
    so downstream feature matrices inherit the temporal ordering. No case
    is split across partitions, and both partitions are non-empty.
    """
    if not 0.0 < train_ratio < 1.0:
        raise ValueError("train_ratio must lie strictly between 0 and 1")
    traces = list(labeled.log.traces)
    if len(traces) < 2:
        raise ValueError("temporal_split needs at least 2 cases")
    order = sorted(range(len(traces)), key=lambda i: (traces[i].start_time, i))
    n_train = math.ceil(train_ratio * len(traces))
    n_train = min(max(n_train, 1), len(traces) - 1)

    def part(indices):
        sel = [traces[i] for i in indices]
        return LabeledLog(
            log=EventLog(schema=labeled.log.schema, traces=tuple(sel)),
            labels={t.case_id: labeled.labels[t.case_id] for t in sel})

    return part(order[:n_train]), part(order[n_train:])


# ---------------------------------------------------------------------------
# labels I/O

def write_labels(labeled: LabeledLog, path) -> None:
    obj = {"labels": {cid: int(v) for cid, v in sorted(labeled.labels.items())}}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_labels(log: EventLog, path) -> LabeledLog:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    labels = {cid: int(v) for cid, v in obj["labels"].items()}
    missing = {t.case_id for t in log.traces} - set(labels)
    if missing:
        raise ValueError(f"labels file misses {len(missing)} case(s)")
    return LabeledLog(log=log, labels={t.case_id: labels[t.case_id]
                                       for t in log.traces})
