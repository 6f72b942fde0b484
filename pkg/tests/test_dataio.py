import copy
import json
import subprocess
import sys
from pathlib import Path

import pytest
from helpers import datasets
from hypothesis import HealthCheck, given, settings, strategies as st

from mgslca.dataio import DatasetError, emit, fixture_path, load, parse

ROOT = Path(__file__).resolve().parents[1]


def fixture_doc():
    return json.loads(fixture_path().read_text("utf-8"))


def codes(text):
    ds, diags = parse(text)
    return ds, [d.code for d in diags]


def test_fixture_parses_cleanly():
    ds, diags = parse(fixture_path().read_bytes())
    assert ds is not None
    assert diags == []


def test_fixture_emits_byte_identical():
    raw = fixture_path().read_bytes()
    ds, _ = parse(raw)
    assert emit(ds) == raw


def test_fixture_generator_is_current():
    out = subprocess.run(
        [sys.executable, str(ROOT / "scripts" / "build_fixture.py"), "--check"], capture_output=True, text=True
    )
    assert out.returncode == 0, out.stdout + out.stderr


@pytest.mark.parametrize("text", ["", "   \n", b""])
def test_empty_document(text):
    ds, got = codes(text)
    assert ds is None
    assert got == ["MISSING_FIELD"]


def test_missing_version():
    assert codes("{}")[1] == ["MISSING_FIELD"]


def test_unsupported_version():
    assert codes('{"format_version": "9.9"}')[1] == ["VERSION_UNSUPPORTED"]


def test_minimal_document():
    ds, got = codes('{"format_version": "1.0"}')
    assert got == []
    assert ds.database.processes == ()


def test_unknown_field_is_a_warning():
    doc = fixture_doc()
    doc["flows"][0]["colour"] = "blue"
    ds, diags = parse(json.dumps(doc))
    assert ds is not None
    assert [(d.severity, d.code, d.path) for d in diags] == [("warning", "UNKNOWN_FIELD", "flows[0].colour")]


def test_dangling_flow_reference():
    doc = fixture_doc()
    doc["processes"][0]["exchanges"][0]["flow"] = "unobtainium"
    ds, diags = parse(json.dumps(doc))
    assert ds is None
    assert [(d.code, d.path) for d in diags] == [("DANGLING_REF", "processes[0].exchanges[0].flow")]


def test_bad_unit():
    doc = fixture_doc()
    doc["flows"][0]["unit"] = "furlong"
    assert "BAD_UNIT" in codes(json.dumps(doc))[1]


def test_duplicate_id():
    doc = fixture_doc()
    doc["processes"].append(copy.deepcopy(doc["processes"][0]))
    assert "DUPLICATE_ID" in codes(json.dumps(doc))[1]


def test_validation_findings_are_errors():
    doc = fixture_doc()
    doc["processes"][0]["reference_product"]["amount"] = 0
    assert codes(json.dumps(doc))[1] == ["NONPOSITIVE_REFERENCE"]


def test_syntax_error_reports_position():
    ds, diags = parse('{"format_version": "1.0",')
    assert ds is None
    assert diags[0].code == "SYNTAX"
    assert "line 1" in diags[0].message


def test_load_raises_with_diagnostics(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("[]")
    with pytest.raises(DatasetError) as e:
        load(p)
    assert [d.code for d in e.value.diagnostics] == ["SYNTAX"]


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(datasets())
def test_round_trip(ds):
    out = emit(ds)
    back, diags = parse(out)
    assert [d for d in diags if d.severity == "error"] == []
    assert back == ds
    assert emit(back) == out


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=200))
def test_random_bytes_never_crash(raw):
    ds, diags = parse(raw)
    assert ds is not None or diags


json_values = st.recursive(
    st.none() | st.booleans() | st.integers() | st.floats() | st.text(max_size=5),
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.text(max_size=5), inner, max_size=3),
    max_leaves=8,
)


def _paths(node, prefix=()):
    yield prefix
    if isinstance(node, dict):
        for k, v in node.items():
            yield from _paths(v, prefix + (k,))
    elif isinstance(node, list):
        for i, v in enumerate(node):
            yield from _paths(v, prefix + (i,))


FIXTURE_PATHS = list(_paths(fixture_doc()))[1:]


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(FIXTURE_PATHS), json_values, st.booleans())
def test_mutated_fixture_never_crashes(path, value, delete):
    doc = fixture_doc()
    node = doc
    for key in path[:-1]:
        node = node[key]
    if delete:
        del node[path[-1]]
    else:
        node[path[-1]] = value
    text = json.dumps(doc, allow_nan=True)
    ds, diags = parse(text)
    assert ds is not None or any(d.severity == "error" for d in diags)
    for d in diags:
        assert d.code and isinstance(d.path, str)
