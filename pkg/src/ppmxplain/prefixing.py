"""Prefix logs: truncate traces at gap-stepped lengths up to a cap."""
from __future__ import annotations

from dataclasses import dataclass

from .eventlog import LabeledLog


@dataclass(frozen=True)
class PrefixSpec:
    max_prefix_len: int
    gap: int = 1

    def __post_init__(self):
        if self.max_prefix_len < 1:
            raise ValueError("max_prefix_len must be >= 1")
        if self.gap < 1:
            raise ValueError("gap must be >= 1")

    @staticmethod
    def from_json(obj: dict) -> "PrefixSpec":
        return PrefixSpec(max_prefix_len=int(obj["max_prefix_len"]),
                          gap=int(obj.get("gap", 1)))

    def to_json(self) -> dict:
        return {"max_prefix_len": self.max_prefix_len, "gap": self.gap}


@dataclass(frozen=True)
class Prefix:
    case_id: str
    prefix_len: int
    events: tuple  # first prefix_len events of the source trace
    static_values: dict
    label: int


@dataclass(frozen=True)
class PrefixLog:
    schema: tuple
    prefixes: tuple  # of Prefix
    spec: PrefixSpec


def prefix_lengths(trace_len: int, spec: PrefixSpec) -> list:
    """Admissible prefix lengths: 1, 1+g, 1+2g, ... capped at min(len, k)."""
    if trace_len < 1:
        raise ValueError("trace_len must be >= 1")
    cap = min(trace_len, spec.max_prefix_len)
    return list(range(1, cap + 1, spec.gap))


def build_prefix_log(labeled: LabeledLog, spec: PrefixSpec) -> PrefixLog:
    """One prefix per (trace, admissible length); label copied from the case."""
    if not labeled.log.traces:
        raise ValueError("empty log")
    prefixes = []
    for trace in labeled.log.traces:
        label = labeled.labels[trace.case_id]
        for length in prefix_lengths(len(trace), spec):
            prefixes.append(Prefix(case_id=trace.case_id,
                                   prefix_len=length,
                                   events=trace.events[:length],
                                   static_values=trace.static_values,
                                   label=label))
    return PrefixLog(schema=labeled.log.schema, prefixes=tuple(prefixes), spec=spec)
