from __future__ import annotations

import json

import pytest

import main as cli


@pytest.fixture()
def run(capsys, corpus_dir):
    def _run(*argv: str) -> tuple[int, str, str]:
        code = cli.main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture()
def model(corpus_dir):
    return lambda name: str(corpus_dir / "models" / f"{name}.json")


def test_parse(run):
    code, out, _ = run("parse", "-f", "Kw p->I(p&q)", "--json")
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    assert doc["formula"] == "Kw p -> I (p & q)"
    assert doc["desugared"] == "~I p -> I (p & q)"
    assert doc["atoms"] == ["p", "q"]


def test_eval_world(run, model):
    assert run("eval", "-m", model("prop3i"), "-w", "s", "-f", "IR p")[:2] == (0, "true\n")
    code, out, _ = run("eval", "-m", model("prop3i"), "-w", "s", "-f", "IR p", "--standard")
    assert (code, out) == (0, "false\n")


def test_eval_corpus_relative_path(run):
    code, out, _ = run("eval", "-m", "models/prop3i.json", "-f", "I p")
    assert (code, out) == (0, "s u v\n")


def test_props(run, model):
    code, out, _ = run("props", "-m", model("box_left"))
    assert code == 0
    assert out.splitlines()[0].startswith("r: reflexive")


def test_search_finds_countermodel(run):
    code, out, _ = run("search", "-f", "p -> I p", "--max-worlds", "2")
    assert code == cli.EXIT_FOUND
    assert out.startswith("countermodel at w0")


def test_search_clear(run):
    code, out, _ = run("search", "-f", "I p <-> I ~p", "--max-worlds", "2", "--json")
    assert code == cli.EXIT_OK
    assert json.loads(out)["kind"] == "clear"


def test_probe_rule_inconclusive(run):
    code, out, _ = run("probe-rule", "--premise", "p", "-f", "p", "--class", "all", "--max-worlds", "1")
    assert (code, out) == (0, "inconclusive: a premise has a countermodel within the bound\n")


def test_distinguish(run, model):
    code, out, _ = run(
        "distinguish", "-m", model("box_left"), "--other", model("box_right"),
        "-w", "s", "--other-world", "s'", "--language", "IRI+Box", "--max-size", "4",
    )
    assert (code, out) == (0, "K p\n")


def test_bisim_lists_pairs(run, model):
    code, out, _ = run("bisim", "-m", model("undef1_left"), "--other", model("undef1_right"))
    assert code == 0
    assert "s s'" in out.splitlines()


def test_check_proof(run, corpus_dir):
    path = str(corpus_dir / "derivations" / "prop5_2.drv")
    code, out, _ = run("check-proof", path)
    assert code == 0 and out.splitlines()[-1].startswith("accepted in IRIK+wI4")
    code, out, _ = run("check-proof", path, "--system", "IRIK")
    assert code == cli.EXIT_FOUND
    assert out.splitlines()[-1].startswith("rejected in IRIK")


def test_replicate_one(run):
    code, out, _ = run("replicate", "remark", "--json")
    assert code == 0
    assert json.loads(out)[0]["passed"] == 3


@pytest.mark.slow
def test_replicate_parallel_is_byte_identical(run, monkeypatch):
    # мелкие чанки, чтобы перебор реально расходился по процессам
    monkeypatch.setenv("IRI_CHUNK_FRAMES", "512")
    first = run("replicate", "--jobs", "4", "--json")
    second = run("replicate", "--jobs", "4", "--json")
    sequential = run("replicate", "--jobs", "1", "--json")
    assert first[0] == second[0] == sequential[0] == cli.EXIT_OK
    assert first[1] == second[1] == sequential[1]
    assert sum(r["failed"] for r in json.loads(first[1])) == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("parse", "-f", "p &"),
        ("eval", "-f", "p"),
        ("eval", "-m", "no/such/model.json", "-f", "p"),
        ("search", "-f", "p", "--class", "bogus"),
        ("search", "-f", "p", "--atoms", "q"),
        ("check-proof", "no/such.drv"),
    ],
)
def test_errors_exit_2(run, argv):
    code, out, err = run(*argv)
    assert code == cli.EXIT_ERROR
    assert out == ""
    assert f"iri {argv[0]}: " in err


@pytest.mark.parametrize("var,value", [("LOG_TO_FILE", "maybe"), ("IRI_SWEEP_WARN_LIMIT", "lots")])
def test_bad_settings_exit_2(run, monkeypatch, var, value):
    monkeypatch.setenv(var, value)
    code, out, err = run("parse", "-f", "p")
    assert code == cli.EXIT_ERROR
    assert out == ""
    assert "iri parse: invalid settings" in err


def test_unknown_command():
    with pytest.raises(SystemExit) as ei:
        cli.main(["frobnicate"])
    assert ei.value.code == 2


def test_smoke_check_quiets_logging_before_checks(monkeypatch):
    from tools import smoke_check

    calls: list[str] = []
    monkeypatch.setattr(smoke_check, "configure_logging", lambda logs_dir, level: calls.append(level))
    monkeypatch.setattr(smoke_check, "run_once", lambda corpus: calls.append("checks") or True)
    monkeypatch.setattr("sys.argv", ["smoke_check.py"])
    assert smoke_check.main() == 0
    assert calls == ["WARNING", "checks"]
