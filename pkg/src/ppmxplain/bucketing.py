"""Bucketing: group prefixes offline, route running instances online."""
from __future__ import annotations

from dataclasses import dataclass

from .prefixing import Prefix, PrefixLog

SINGLE = "single"
PREFIX_LENGTH = "prefix_length"

SINGLE_KEY = "ALL"

# Listed in the source taxonomy but never experimented with; rejected explicitly.
_UNSUPPORTED = ("state", "state_based", "clustering", "domain_knowledge")


@dataclass(frozen=True)
class BucketingStrategy:
    kind: str

    def __post_init__(self):
        if self.kind in _UNSUPPORTED:
            raise ValueError(f"bucketing strategy {self.kind!r} is not supported")
        if self.kind not in (SINGLE, PREFIX_LENGTH):
            raise ValueError(f"unknown bucketing strategy {self.kind!r}")


@dataclass(frozen=True)
class BucketedLog:
    strategy: BucketingStrategy
    buckets: dict  # SINGLE_KEY -> prefixes, or prefix_len -> prefixes

    def keys(self):
        if self.strategy.kind == SINGLE:
            return [SINGLE_KEY]
        return sorted(self.buckets)


def assign_buckets(plog: PrefixLog, strategy: BucketingStrategy) -> BucketedLog:
    if not plog.prefixes:
        raise ValueError("empty prefix log")
    if strategy.kind == SINGLE:
        buckets = {SINGLE_KEY: list(plog.prefixes)}
    else:
        buckets = {}
        for p in plog.prefixes:
            buckets.setdefault(p.prefix_len, []).append(p)
    return BucketedLog(strategy=strategy, buckets=buckets)


def lookup_bucket(blog: BucketedLog, partial: Prefix):
    """Route a running instance: floor to the largest bucketed length."""
    if not blog.buckets:
        raise ValueError("empty bucketed log")
    if blog.strategy.kind == SINGLE:
        return SINGLE_KEY
    candidates = [k for k in blog.buckets if k <= partial.prefix_len]
    if not candidates:
        raise ValueError(f"no applicable bucket for a trace of length "
                         f"{partial.prefix_len}")
    return max(candidates)
