import json
import os

import pytest

from agreetest.errors import ParseError
from agreetest.ensemble import (
    FLIP_ENTRY,
    PLANTED_DISAGREEMENT,
    CorruptionSpec,
    ensemble_to_dict,
    load_ensemble,
    load_global_function,
    save_ensemble,
    save_global_function,
)
from agreetest.ensemble.storage import ensemble_from_dict
from agreetest.sets import VertexSet, derive_stream


def same_tables(E, G):
    return sorted(E.sets()) == sorted(G.sets()) and all(
        E.materialize_local(S) == G.materialize_local(S) for S in E.sets()
    )


@pytest.fixture
def corrupted(small_ensemble):
    E = small_ensemble.corrupt(CorruptionSpec(FLIP_ENTRY, 0.2), derive_stream(1))
    return E.corrupt(
        CorruptionSpec(PLANTED_DISAGREEMENT, 0.5, planted=[VertexSet([2])]),
        derive_stream(2),
    )


def test_implicit_round_trip(tmpdir, corrupted):
    path = os.path.join(str(tmpdir), "ensemble.json")
    save_ensemble(corrupted, path)
    loaded = load_ensemble(path)
    assert loaded.kind == "implicit"
    assert loaded.params == corrupted.params
    assert loaded.layers == corrupted.layers
    assert same_tables(loaded, corrupted)


def test_explicit_round_trip(tmpdir, corrupted):
    path = os.path.join(str(tmpdir), "explicit.json")
    save_ensemble(corrupted.to_explicit(), path)
    loaded = load_ensemble(path)
    assert loaded.kind == "explicit"
    assert same_tables(loaded, corrupted)


def test_header(corrupted):
    header = ensemble_to_dict(corrupted)["header"]
    assert header["n"] == 8 and header["k"] == 4 and header["t"] == 2
    assert header["kind"] == "implicit"
    assert header["bias"] is None


def test_global_function_round_trip(tmpdir, small_global_d2):
    path = os.path.join(str(tmpdir), "global.json")
    save_global_function(small_global_d2, path)
    assert load_global_function(path) == small_global_d2


def test_malformed_json_names_line_and_column(tmpdir):
    path = os.path.join(str(tmpdir), "broken.json")
    with open(path, "w") as f:
        f.write('{\n "a": }\n')
    with pytest.raises(ParseError) as exc:
        load_ensemble(path)
    assert exc.value.path == path
    assert exc.value.line == 2
    assert exc.value.column == 7


def test_missing_field(corrupted):
    data = ensemble_to_dict(corrupted)
    del data["generator"]
    with pytest.raises(ParseError) as exc:
        ensemble_from_dict(data, path="e.json")
    assert "missing field" in exc.value.message


def test_unknown_kind(corrupted):
    data = ensemble_to_dict(corrupted)
    data["header"]["kind"] = "lazy"
    with pytest.raises(ParseError):
        ensemble_from_dict(data)


def test_incomplete_table(corrupted):
    data = json.loads(json.dumps(ensemble_to_dict(corrupted.to_explicit())))
    del data["records"][0]["f"]["0"]
    with pytest.raises(ParseError):
        ensemble_from_dict(data)
