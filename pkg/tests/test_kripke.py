from __future__ import annotations

import json

import pytest
from hypothesis import given

from core.errors import BoundError, ModelFormatError, UnknownWorldError
from kripke.frames import (
    check_frame_property,
    frame_report,
    reflexive_closure,
    reflexivize_endpoints,
    transitive_closure,
)
from kripke.loader import dump_model, load_model, load_model_file, model_from_dict, model_to_json
from kripke.models import BiModel, FrameClass, FrameProperty, Inclusion, Relation, RelationSelector
from tests.conftest import bimodels


def test_model_from_dict(load):
    m = load("prop3i")
    assert m.worlds == ("s", "t", "u", "v")
    assert m.successors(Relation.R, "s") == ("u", "v")
    assert m.successors(Relation.RBULLET, "s") == ("t", "u", "v")
    assert m.successors(Relation.R, "t") == ()
    assert m.holds("p", "s") and not m.holds("p", "v")
    assert m.atoms == ["p"]


def test_dump_is_stable(load):
    m = load("remark")
    doc = dump_model(m)
    assert doc["r"] == [["x", "y"], ["x", "z"], ["y", "y"], ["y", "z"], ["z", "z"]]
    assert model_from_dict(doc) == m
    assert json.loads(model_to_json(m)) == doc


def test_unknown_world_in_relation():
    doc = {"worlds": ["s"], "r": [["s", "x"]], "valuation": {}}
    with pytest.raises(UnknownWorldError):
        model_from_dict(doc)


def test_unknown_world_in_valuation():
    with pytest.raises(UnknownWorldError):
        model_from_dict({"worlds": ["s"], "valuation": {"p": ["t"]}})


@pytest.mark.parametrize(
    "doc",
    [
        {"worlds": []},
        {"worlds": ["s", "s"]},
        {"worlds": ["s"], "r": [["s", "s"], ["s", "s"]]},
        {"worlds": ["s"], "valuation": {"P": []}},
        {"worlds": ["s"], "colour": "red"},
    ],
)
def test_bad_documents(doc):
    with pytest.raises(ModelFormatError):
        model_from_dict(doc)


def test_malformed_json():
    with pytest.raises(ModelFormatError):
        load_model("{not json", source="inline")


def test_load_model_file_reports_path(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"worlds": ["s"], "r": [["s", "t"]]}), encoding="utf-8")
    with pytest.raises(UnknownWorldError) as ei:
        load_model_file(path)
    assert "bad.json" in str(ei.value)


def test_frame_class_presets():
    c = FrameClass.parse("s4-proper")
    assert c.inclusion is Inclusion.R_SUB_RBULLET
    assert c.r_props == c.rbullet_props == {FrameProperty.REFLEXIVE, FrameProperty.TRANSITIVE}
    c = FrameClass.parse("proper, transitive-r, serial-rb")
    assert c.r_props == {FrameProperty.TRANSITIVE}
    assert c.rbullet_props == {FrameProperty.SERIAL}
    assert FrameClass.parse("t-proper").r_props == {FrameProperty.REFLEXIVE}
    assert FrameClass.parse("euclidean-both").rbullet_props == {FrameProperty.EUCLIDEAN}


@pytest.mark.parametrize("spec", ["", "bogus", "reflexive-x", "proper,bullet-sub"])
def test_frame_class_errors(spec):
    with pytest.raises(BoundError):
        FrameClass.parse(spec)


def test_corpus_frame_properties(load):
    assert check_frame_property(load("prop3i"), FrameClass.parse("proper"))
    assert not check_frame_property(load("prop3i"), FrameClass.parse("bullet-sub"))
    assert check_frame_property(load("prop3ii"), FrameClass.parse("bullet-sub"))
    assert check_frame_property(load("remark"), FrameClass.parse("bullet-sub,serial-rb"))
    assert not check_frame_property(load("remark"), FrameClass.parse("serial-r,reflexive-r"))


def test_frame_report(load):
    rep = frame_report(load("box_left"))
    assert rep["r"]["reflexive"] and rep["r"]["symmetric"] and rep["r"]["transitive"]
    assert rep["rbullet"]["reflexive"] and not rep["rbullet"]["symmetric"]
    assert rep["inclusion"] == {"r_sub_rbullet": True, "rbullet_sub_r": False, "equal": False}


def test_reflexive_closure_of_countermodel_is_s4(load):
    m = reflexive_closure(load("prop3i"))
    assert check_frame_property(m, FrameClass.parse("s4-proper"))


def test_closure_selectors():
    m = BiModel.build(["a", "b"], r=[("a", "b")], rbullet=[("a", "b"), ("b", "a")], valuation={"p": []})
    only_r = reflexive_closure(m, RelationSelector.R)
    assert only_r.rbullet == m.rbullet
    assert ("a", "a") in only_r.r and ("b", "b") in only_r.r
    tc = transitive_closure(m, RelationSelector.RBULLET)
    assert tc.rbullet == {("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")}
    assert tc.r == m.r


def test_reflexivize_endpoints_touches_only_dead_ends():
    m = BiModel.build(["a", "b"], r=[("a", "b")], rbullet=[("a", "b")], valuation={"p": []})
    out = reflexivize_endpoints(m)
    assert out.r == {("a", "b"), ("b", "b")}
    assert out.rbullet == m.rbullet


@given(bimodels())
def test_closure_laws(m):
    refl = reflexive_closure(m)
    assert check_frame_property(refl, FrameClass.parse("reflexive-both"))
    assert reflexive_closure(refl) == refl
    trans = transitive_closure(m)
    assert check_frame_property(trans, FrameClass.parse("transitive-both"))
    assert m.r <= trans.r and m.rbullet <= trans.rbullet
    assert check_frame_property(reflexivize_endpoints(m, RelationSelector.BOTH), FrameClass.parse("serial-both"))


@given(bimodels(proper=True))
def test_closures_keep_proper_models_proper(m):
    proper = FrameClass.parse("proper")
    assert check_frame_property(m, proper)
    assert check_frame_property(reflexive_closure(m), proper)
    assert check_frame_property(transitive_closure(m), proper)
