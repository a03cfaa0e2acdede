from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from claims.loader import CorpusIndex
from kripke.models import BiModel
from logic.formula import And, Atom, Bottom, Box, Iff, Ig, Implies, Kw, Not, Or, RIg

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"

ATOMS = ("p", "q")

settings.register_profile("default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def corpus(corpus_dir: Path) -> CorpusIndex:
    return CorpusIndex(corpus_dir)


@pytest.fixture(scope="session")
def load(corpus: CorpusIndex):
    def _load(name: str) -> BiModel:
        return corpus.model(f"models/{name}.json")

    return _load


# ---- strategies ----


def formulas(atom_names=ATOMS, unary=(Not, Ig, RIg, Box, Kw), max_leaves: int = 8):
    base = st.one_of(st.sampled_from([Atom(a) for a in atom_names]), st.just(Bottom()))

    def extend(children):
        return st.one_of(
            st.builds(lambda op, f: op(f), st.sampled_from(unary), children),
            st.builds(lambda op, a, b: op(a, b), st.sampled_from([And, Or, Implies, Iff]), children, children),
        )

    return st.recursive(base, extend, max_leaves=max_leaves)


def li_formulas(atom_names=ATOMS, max_leaves: int = 8):
    """Только ~, I и связки: язык, инвариантный относительно Δ-бисимуляций."""
    return formulas(atom_names, unary=(Not, Ig), max_leaves=max_leaves)


@st.composite
def bimodels(draw, max_worlds: int = 4, atom_names=ATOMS, proper: bool = False, prefix: str = "w"):
    n = draw(st.integers(min_value=1, max_value=max_worlds))
    worlds = [f"{prefix}{i}" for i in range(n)]
    pairs = [(a, b) for a in worlds for b in worlds]
    r = draw(st.sets(st.sampled_from(pairs)))
    rb = draw(st.sets(st.sampled_from(pairs)))
    if proper:
        rb = rb | r
    valuation = {a: draw(st.sets(st.sampled_from(worlds))) for a in atom_names}
    return BiModel.build(worlds, r, rb, valuation)
