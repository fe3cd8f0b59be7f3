import pytest

from ppmxplain.eventlog import SynthConfig, generate_synthetic_log
from ppmxplain.prefixing import PrefixSpec, build_prefix_log, prefix_lengths


def test_every_length_when_gap_one():
    assert prefix_lengths(3, PrefixSpec(max_prefix_len=20, gap=1)) == [1, 2, 3]


def test_gap_steps_from_one():
    assert prefix_lengths(12, PrefixSpec(max_prefix_len=20, gap=5)) == [1, 6, 11]


def test_longest_trace_capped_at_max():
    # longest trace 185, cap 20, gap 5: the real Sepsis1-scale setting
    assert prefix_lengths(185, PrefixSpec(max_prefix_len=20, gap=5)) == [1, 6, 11, 16]


def test_lengths_strictly_increasing_and_bounded():
    for trace_len in (1, 2, 7, 33):
        for k in (1, 5, 50):
            for g in (1, 2, 9):
                lengths = prefix_lengths(trace_len, PrefixSpec(k, g))
                assert lengths == sorted(set(lengths))
                assert lengths[0] == 1
                assert lengths[-1] <= min(trace_len, k)


def test_build_prefix_log_counts(toy_labeled_log):
    plog = build_prefix_log(toy_labeled_log, PrefixSpec(max_prefix_len=4, gap=1))
    # traces of length 3 and 2 -> 3 + 2 prefixes
    assert len(plog.prefixes) == 5
    assert {(p.case_id, p.prefix_len) for p in plog.prefixes} == \
        {("c1", 1), ("c1", 2), ("c1", 3), ("c2", 1), ("c2", 2)}


def test_prefix_copies_label_and_statics(toy_labeled_log):
    plog = build_prefix_log(toy_labeled_log, PrefixSpec(max_prefix_len=4, gap=1))
    for p in plog.prefixes:
        assert p.label == toy_labeled_log.labels[p.case_id]
        source = next(t for t in toy_labeled_log.log.traces
                      if t.case_id == p.case_id)
        assert p.static_values == source.static_values
        assert p.events == source.events[:p.prefix_len]  # true prefix


def test_prefix_count_matches_length_formula():
    cfg = SynthConfig(trace_count=50, min_len=1, max_len=12, seed=17)
    labeled = generate_synthetic_log(cfg)
    for k, g in [(5, 1), (12, 5), (3, 2), (20, 4)]:
        spec = PrefixSpec(max_prefix_len=k, gap=g)
        plog = build_prefix_log(labeled, spec)
        expected = sum(len(prefix_lengths(len(t), spec))
                       for t in labeled.log.traces)
        assert len(plog.prefixes) == expected


def test_gap_one_maximizes_prefix_count():
    cfg = SynthConfig(trace_count=30, min_len=2, max_len=9, seed=4)
    labeled = generate_synthetic_log(cfg)
    longest = max(len(t) for t in labeled.log.traces)
    counts = [len(build_prefix_log(labeled,
                                   PrefixSpec(max_prefix_len=longest,
                                              gap=g)).prefixes)
              for g in (1, 2, 3, 5)]
    assert counts == sorted(counts, reverse=True)
    # g=1 with no cap: one prefix per event
    assert counts[0] == sum(len(t) for t in labeled.log.traces)


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        PrefixSpec(max_prefix_len=0)
    with pytest.raises(ValueError):
        PrefixSpec(max_prefix_len=3, gap=0)
    with pytest.raises(ValueError):
        prefix_lengths(0, PrefixSpec(max_prefix_len=3))
