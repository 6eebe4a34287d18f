import json

import pytest
from hypothesis import given, strategies as st

from dgkernels import corpus, io
from dgkernels.categories import validate_dg_category
from dgkernels.harness import corpus_files, serialization_corpus
from dgkernels.linalg import Field

F2, Q = Field(2), Field(0)


def _file(F, name):
    return next(p for p in corpus_files(F) if p.name == name)


@pytest.mark.parametrize("F", [F2, Q], ids=str)
def test_bundled_files_reserialize_identically(F):
    files = corpus_files(F)
    assert len(files) > 40
    for p in files:
        text = p.read_text(encoding="utf-8")
        assert io.serialize(io.parse(text, F).obj) == text, p.name


def test_round_trip_is_bit_exact(field):
    for obj in serialization_corpus(field)[:30]:
        text = io.serialize(obj)
        back = io.parse(text, field).obj
        assert io.same(obj, back)
        assert io.serialize(back) == text


def test_bad_differential_parses_but_fails_validation():
    A = corpus.category_from_table(
        Q, ["x", "y"], {("x", "y"): [("h", -1), ("c", 0), ("k", 1)]},
        differential={"h": {"c": 1}, "c": {"k": 1}}, name="d2")
    doc = io.parse(io.serialize(A))
    assert doc.kind == "category"
    assert not validate_dg_category(doc.obj).ok


def test_dangling_reference_is_named():
    data = json.loads(_file(F2, "h^y(A2).dg").read_text())
    data["payload"]["base"] = {"ref": "nowhere"}
    with pytest.raises(io.ParseError) as err:
        io.parse(json.dumps(data))
    assert "nowhere" in str(err.value)


def test_unknown_version_and_field_mismatch():
    data = json.loads(_file(F2, "A2.dg").read_text())
    data["version"] = 99
    with pytest.raises(io.ParseError, match="unknown version"):
        io.parse(json.dumps(data))
    with pytest.raises(io.ParseError, match="field mismatch"):
        io.parse(_file(F2, "A2.dg").read_text(), Field(0))
    with pytest.raises(io.ParseError, match="expected a module"):
        io.parse(_file(F2, "A2.dg").read_text(), expect="module")


def test_syntax_error_has_line_and_column():
    text = _file(F2, "A2.dg").read_text()
    broken = text.replace('"kind": "category",', '"kind": "category"', 1)
    with pytest.raises(io.ParseError) as err:
        io.parse(broken)
    assert err.value.line == 4 and err.value.col is not None
    assert "line 4" in str(err.value)


def test_out_of_range_scalars_are_rejected():
    data = json.loads(_file(F2, "A2.dg").read_text())
    data["payload"]["composition"][0]["entries"][0][-1] = 5
    with pytest.raises(io.ParseError):
        io.parse(json.dumps(data))


def test_q_scalars_are_fractions():
    from dgkernels.modules import make_module, yoneda

    A2 = corpus.a2(Q)
    h = yoneda(A2, "y")
    M = make_module(A2, h.values, {k: v * Q("1/2") for k, v in h.action.items()}, "half")
    text = io.serialize(M)
    assert '"1/2"' in text
    assert io.same(io.parse(text).obj, M)


_OBJS = serialization_corpus(F2)


@given(st.integers(0, len(_OBJS) - 1))
def test_round_trip_property(i):
    obj = _OBJS[i]
    assert io.same(io.parse(io.serialize(obj)).obj, obj)
