import numpy as np
import pytest

from ppmxplain.encoding import FeatureColumn, FeatureMatrix
from ppmxplain.eventlog import (AttributeSpec, Event, EventLog, LabeledLog,
                                Trace)


def numeric_columns(m):
    return [FeatureColumn(name=f"f{j}", origin=f"f{j}", kind="static-numeric")
            for j in range(m)]


def matrix_from(X, y, columns=None):
    X = np.asarray(X, dtype=np.float64)
    return FeatureMatrix(columns=columns or numeric_columns(X.shape[1]),
                         rows=X,
                         row_ids=[(f"c{i}", 1) for i in range(X.shape[0])],
                         labels=np.asarray(y, dtype=int))


def make_trace(case_id, activities, start_ms=0, step_ms=60_000,
               statics=None, dynamics=None):
    """dynamics: attr -> list of per-event values (or None markers)."""
    events = []
    for i, act in enumerate(activities):
        dyn = {k: v[i] for k, v in (dynamics or {}).items()}
        events.append(Event(activity=act, timestamp=start_ms + i * step_ms,
                            dynamic_values=dyn))
    return Trace(case_id=case_id, static_values=statics or {},
                 events=tuple(events))


def make_log(traces, schema=()):
    return EventLog(schema=tuple(schema), traces=tuple(traces))


@pytest.fixture
def toy_labeled_log():
    schema = (AttributeSpec("region", "static", "categorical"),
              AttributeSpec("amount", "dynamic", "numeric"))
    t1 = make_trace("c1", ["A", "B", "C"], start_ms=0,
                    statics={"region": "north"},
                    dynamics={"amount": [1.0, 2.0, 3.0]})
    t2 = make_trace("c2", ["A", "C"], start_ms=10_000_000,
                    statics={"region": "south"},
                    dynamics={"amount": [5.0, None]})
    log = make_log([t1, t2], schema)
    return LabeledLog(log=log, labels={"c1": 1, "c2": 0})
