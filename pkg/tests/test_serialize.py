import json
from fractions import Fraction as F

import numpy as np
import pytest

from gcfinite import instances
from gcfinite.core import FiniteDomain, FunctionClass, Measure, Partition, SetFamily
from gcfinite.serialize import SCHEMA_VERSION, SchemaError, dumps, loads


@pytest.mark.parametrize(
    "obj",
    [
        Measure(np.array([F(1, 3), F(2, 3)], dtype=object)),
        FunctionClass.from_rows([[0, F(1, 2)], [F(-3, 4), 1]]),
        SetFamily.from_sets([{0, 2}, {1}], 3),
        Partition((0, 1, 1)),
        FiniteDomain(2),
    ],
)
def test_roundtrip(obj):
    text = dumps(obj)
    doc = json.loads(text)
    assert doc["schema_version"] == SCHEMA_VERSION
    back = loads(text)
    assert back == obj


def test_exact_numbers_are_strings():
    doc = json.loads(dumps(instances.fano()[1]))
    assert doc["weights"][0] == "1/7"


def test_errors_name_the_field():
    with pytest.raises(SchemaError, match="weights\\[1\\]"):
        loads('{"schema_version": 1, "kind": "measure", "weights": ["1/2", "0.5"]}')
    with pytest.raises(SchemaError, match="line"):
        loads("{not json")
    with pytest.raises(SchemaError, match="kind"):
        loads('{"schema_version": 1, "kind": "teapot"}')
    with pytest.raises(SchemaError, match="schema_version"):
        loads('{"schema_version": 99, "kind": "measure"}')
    with pytest.raises(SchemaError, match="sets\\[0\\]"):
        loads('{"schema_version": 1, "kind": "set_family", "size": 2, "sets": [[5]]}')
