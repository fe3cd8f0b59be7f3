import pytest

from ppmxplain.bucketing import (SINGLE_KEY, BucketingStrategy, assign_buckets,
                                 lookup_bucket)
from ppmxplain.eventlog import SynthConfig, generate_synthetic_log
from ppmxplain.prefixing import Prefix, PrefixSpec, build_prefix_log


def plog_fixture(seed=8, k=12, g=5):
    labeled = generate_synthetic_log(
        SynthConfig(trace_count=40, min_len=1, max_len=14, seed=seed))
    return build_prefix_log(labeled, PrefixSpec(max_prefix_len=k, gap=g))


def dummy_prefix(length):
    return Prefix(case_id="running", prefix_len=length, events=(),
                  static_values={}, label=0)


def test_single_bucketing_one_bucket():
    plog = plog_fixture()
    blog = assign_buckets(plog, BucketingStrategy("single"))
    assert list(blog.buckets) == [SINGLE_KEY]
    assert len(blog.buckets[SINGLE_KEY]) == len(plog.prefixes)


def test_prefix_length_buckets_keyed_by_length():
    plog = plog_fixture()
    blog = assign_buckets(plog, BucketingStrategy("prefix_length"))
    assert set(blog.buckets) == {p.prefix_len for p in plog.prefixes}
    for key, bucket in blog.buckets.items():
        assert all(p.prefix_len == key for p in bucket)


def test_bucket_sizes_sum_to_prefix_count():
    plog = plog_fixture(seed=3)
    blog = assign_buckets(plog, BucketingStrategy("prefix_length"))
    assert sum(len(b) for b in blog.buckets.values()) == len(plog.prefixes)


def test_partition_no_duplicates():
    plog = plog_fixture(seed=5)
    blog = assign_buckets(plog, BucketingStrategy("prefix_length"))
    seen = set()
    for bucket in blog.buckets.values():
        for p in bucket:
            key = (p.case_id, p.prefix_len)
            assert key not in seen
            seen.add(key)
    assert seen == {(p.case_id, p.prefix_len) for p in plog.prefixes}


def test_lookup_single_returns_all():
    plog = plog_fixture()
    blog = assign_buckets(plog, BucketingStrategy("single"))
    assert lookup_bucket(blog, dummy_prefix(99)) == SINGLE_KEY


def test_lookup_floor_rule():
    plog = plog_fixture()
    blog = assign_buckets(plog, BucketingStrategy("prefix_length"))
    assert set(blog.buckets) == {1, 6, 11}
    assert lookup_bucket(blog, dummy_prefix(8)) == 6
    assert lookup_bucket(blog, dummy_prefix(6)) == 6
    assert lookup_bucket(blog, dummy_prefix(100)) == 11


def test_lookup_no_applicable_bucket():
    plog = plog_fixture()
    blog = assign_buckets(plog, BucketingStrategy("prefix_length"))
    blog.buckets.pop(1)
    with pytest.raises(ValueError, match="no applicable bucket"):
        lookup_bucket(blog, dummy_prefix(3))


def test_offline_online_agreement():
    plog = plog_fixture(seed=11)
    blog = assign_buckets(plog, BucketingStrategy("prefix_length"))
    for p in plog.prefixes:
        assert lookup_bucket(blog, p) == p.prefix_len


def test_unsupported_strategies_rejected():
    for kind in ("state_based", "clustering", "domain_knowledge"):
        with pytest.raises(ValueError, match="not supported"):
            BucketingStrategy(kind)
    with pytest.raises(ValueError, match="unknown"):
        BucketingStrategy("whatever")


def test_empty_prefix_log_rejected():
    plog = plog_fixture()
    empty = type(plog)(schema=plog.schema, prefixes=(), spec=plog.spec)
    with pytest.raises(ValueError, match="empty"):
        assign_buckets(empty, BucketingStrategy("single"))
