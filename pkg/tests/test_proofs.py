from __future__ import annotations

import copy

import pytest
from hypothesis import given

from core.errors import DerivationFormatError, TautologyLimitError
from logic.formula import Atom, Meta, conj, desugar, substitute, walk
from logic.parser import parse
from proofs.derivation import (
    check_derivation,
    derivation_from_dict,
    dump_derivation,
    known_systems,
)
from proofs.schemas import SCHEMAS, SYSTEMS, SchemaName, get_system, match_axiom
from proofs.taut import abstraction_atoms, taut_check, truth_table
from search.engine import bounded_valid
from search.models import SearchBound
from tests.conftest import formulas
from utils.helpers import load_json

# ---- tautologies ----


@pytest.mark.parametrize(
    "text,expected",
    [
        ("p | ~p", True),
        ("I p -> I p", True),
        ("IR p | ~IR p", True),
        ("(I p <-> I ~p) -> (I ~p -> I p)", True),
        ("Kw p <-> ~I p", True),
        ("I p -> I q", False),
        ("I p -> IR p", False),
        ("I p <-> I ~p", False),
        ("K (p | ~p)", False),
        ("false", False),
        ("true", True),
    ],
)
def test_taut_check(text, expected):
    assert taut_check(parse(text)) is expected


def test_abstraction_letters_in_order():
    letters = abstraction_atoms(parse("I p & p | I p -> IR (p & q)"))
    assert letters == [parse("I p"), Atom("p"), parse("IR (p & q)")]


def test_truth_table_shape():
    letters, values = truth_table(parse("p & q"))
    assert len(letters) == 2
    assert values.tolist() == [False, False, False, True]


def test_taut_limit():
    f = conj(*(Atom(f"a{i}") for i in range(4)))
    with pytest.raises(TautologyLimitError):
        taut_check(f, limit=3)
    assert not taut_check(f, limit=4)


# ---- schemas ----


def test_match_axiom_examples():
    assert match_axiom("I-Equ", parse("I q <-> I ~q")) == {"phi": Atom("q")}
    assert match_axiom("I-Equ", parse("I q <-> I q")) is None
    assert match_axiom("MIX", parse("I p & I (I p | false) -> IR p")) == {"phi": Atom("p"), "chi": parse("false")}
    assert match_axiom("MIX", parse("I p & I (I q | false) -> IR p")) is None
    assert match_axiom("I-Dis", parse("I (p | q) & I (~p | r) -> I p")) == {
        "phi": Atom("p"),
        "psi": Atom("q"),
        "chi": Atom("r"),
    }
    assert match_axiom("wI-4", parse("I I (p & q) -> I (p & q)")) == {"phi": parse("p & q")}
    assert match_axiom("TAUT", parse("p -> p")) == {}
    assert match_axiom("TAUT", parse("p -> q")) is None


def test_match_axiom_sees_through_kw():
    assert match_axiom("RI-I", parse("IR Kw p -> I Kw p")) == {"phi": parse("~I p")}


@pytest.mark.parametrize("name", [s for s in SchemaName if s is not SchemaName.TAUT])
def test_schema_instances_round_trip(name):
    pattern = SCHEMAS[name].pattern
    metas = {g.name for g in walk(pattern) if isinstance(g, Meta)}

    @given(formulas(max_leaves=4), formulas(max_leaves=4), formulas(max_leaves=4))
    def check(a, b, c):
        sigma = {"phi": desugar(a), "psi": desugar(b), "chi": desugar(c)}
        instance = substitute(pattern, sigma)
        assert match_axiom(name, instance) == {k: v for k, v in sigma.items() if k in metas}

    check()


def test_systems():
    assert known_systems() == ["IRIK", "IRIT", "IRIK+wI4", "IRIS4"]
    assert get_system(" iris4 ").name == "IRIS4"
    iris4 = SYSTEMS["IRIS4"]
    assert {SchemaName.I_T, SchemaName.WI_4} <= iris4.schemas
    assert SchemaName.WI_4 not in SYSTEMS["IRIK"].schemas
    assert SYSTEMS["IRIT"].frames().r_props
    with pytest.raises(DerivationFormatError):
        get_system("KD45")


# ---- derivations ----


@pytest.fixture(scope="module")
def drv(corpus_dir):
    def _raw(name: str) -> dict:
        return load_json(corpus_dir / "derivations" / f"{name}.drv")

    return _raw


@pytest.mark.parametrize(
    "name,system,accepted",
    [
        ("prop5_1", None, True),
        ("prop5_1", "IRIS4", True),
        ("rmix2", None, True),
        ("prop5_2", None, True),
        ("prop5_2", "IRIK", False),
    ],
)
def test_corpus_derivations(drv, name, system, accepted):
    d = derivation_from_dict(drv(name), source=name)
    assert check_derivation(d, system).accepted is accepted


def test_missing_axiom_is_reported(drv):
    rep = check_derivation(derivation_from_dict(drv("prop5_2")), "IRIK")
    assert [f.index for f in rep.failures] == [6]
    assert "not part of IRIK" in rep.failures[0].message
    assert rep.to_dict()["steps"][6] == {"step": 6, "by": "wI-4", "ok": False, "message": rep.failures[0].message}


def _negate_step(raw: dict, i: int) -> dict:
    out = copy.deepcopy(raw)
    out["steps"][i]["formula"] = f"~({out['steps'][i]['formula']})"
    return out


@pytest.mark.parametrize("name", ["prop5_1", "rmix2"])
def test_every_single_step_perturbation_is_rejected(drv, name):
    raw = drv(name)
    for i in range(len(raw["steps"])):
        rep = check_derivation(derivation_from_dict(_negate_step(raw, i)))
        assert not rep.accepted, f"step {i}"
        assert i in [f.index for f in rep.failures]


def test_wrong_substitution_is_rejected(drv):
    raw = copy.deepcopy(drv("prop5_1"))
    raw["steps"][0]["by"]["subst"] = {"phi": "q"}
    rep = check_derivation(derivation_from_dict(raw))
    assert rep.failures[0].index == 0
    assert "substitution for phi" in rep.failures[0].message


def test_forward_reference_is_rejected(drv):
    raw = copy.deepcopy(drv("prop5_1"))
    raw["steps"][2]["by"]["from"] = 3
    rep = check_derivation(derivation_from_dict(raw))
    assert "only earlier steps" in rep.failures[0].message


def test_rmix_arity_mismatch(drv):
    raw = copy.deepcopy(drv("rmix2"))
    raw["steps"][5]["by"]["arity"] = 1
    rep = check_derivation(derivation_from_dict(raw))
    assert [f.index for f in rep.failures] == [5]


@pytest.mark.parametrize(
    "by",
    [
        {"kind": "MP", "from": 0},
        {"kind": "R-MIX", "from": 0},
        {"kind": "TAUT", "from": 0},
        {"kind": "RE-I", "from": 0, "arity": 2},
        {"kind": "Necessitation", "from": 0},
    ],
)
def test_malformed_justifications(by):
    doc = {"steps": [{"formula": "p | ~p", "by": {"kind": "TAUT"}}, {"formula": "p", "by": by}]}
    with pytest.raises(DerivationFormatError):
        derivation_from_dict(doc)


def test_bad_formula_in_document():
    with pytest.raises(DerivationFormatError) as ei:
        derivation_from_dict({"steps": [{"formula": "p &", "by": {"kind": "TAUT"}}]}, source="x.drv")
    assert "x.drv" in str(ei.value)


def test_dump_derivation_round_trip(drv):
    d = derivation_from_dict(drv("rmix2"))
    again = derivation_from_dict(dump_derivation(d))
    assert again.steps == d.steps
    assert check_derivation(again).accepted


# ---- soundness bridge ----


_INSTANCES = {
    SchemaName.I_EQU: "I p <-> I ~p",
    SchemaName.IR_EQU: "IR p <-> IR ~p",
    SchemaName.I_CON: "I (p & q) -> I p | I q",
    SchemaName.I_DIS: "I (p | q) & I (~p | q) -> I p",
    SchemaName.RI_I: "IR p -> I p",
    SchemaName.MIX: "I p & I (I p | q) -> IR p",
    SchemaName.I_T: "p & I (p | q) -> I p",
    SchemaName.WI_4: "I I p -> I p",
}


@pytest.mark.slow
@pytest.mark.parametrize("system", sorted(SYSTEMS))
def test_axioms_are_bounded_valid_on_their_frames(system):
    s = SYSTEMS[system]
    for name in sorted(s.schemas - {SchemaName.TAUT}, key=lambda n: n.value):
        f = parse(_INSTANCES[name])
        assert match_axiom(name, f) is not None
        v = bounded_valid(f, s.frames(), SearchBound(3, ("p", "q")))
        assert not v.found, f"{name.value} in {system}"


@pytest.mark.slow
def test_derived_theorems_are_bounded_valid(drv):
    for name in ("prop5_1", "prop5_2", "rmix2"):
        d = derivation_from_dict(drv(name))
        system = get_system(d.system)
        assert not bounded_valid(d.theorem, system.frames(), SearchBound(3, ("p", "q"))).found, name
