"""Propositional tautology check under boolean abstraction.

Maximal subformulas headed by I, IR or K are opaque: each distinct one becomes
a fresh propositional letter, as does each atom. The abstraction is then
decided by a full truth table, evaluated column-wise with numpy.
"""

from __future__ import annotations

import numpy as np

from core.errors import TautologyLimitError
from logic.formula import MODAL_HEADS, And, Atom, Bottom, Formula, Iff, Implies, Meta, Not, Or, desugar

DEFAULT_ATOM_LIMIT = 20


def abstraction_atoms(f: Formula) -> list[Formula]:
    """Буквы абстракции в порядке первого появления (слева направо)."""
    out: list[Formula] = []
    seen: set[Formula] = set()

    def visit(g: Formula) -> None:
        if isinstance(g, (Atom, Meta) + MODAL_HEADS):
            if g not in seen:
                seen.add(g)
                out.append(g)
            return
        for k in g.children():
            visit(k)

    visit(f)
    return out


def _columns(k: int) -> np.ndarray:
    rows = np.arange(1 << k, dtype=np.int64)
    return ((rows[None, :] >> np.arange(k, dtype=np.int64)[:, None]) & 1).astype(bool)


def truth_table(f: Formula, limit: int = DEFAULT_ATOM_LIMIT) -> tuple[list[Formula], np.ndarray]:
    """Абстракция f и вектор её значений по всем 2^k строкам."""
    f = desugar(f)
    letters = abstraction_atoms(f)
    if len(letters) > limit:
        raise TautologyLimitError(f"boolean abstraction has {len(letters)} atoms, limit is {limit}")
    cols = _columns(len(letters))
    index = {g: i for i, g in enumerate(letters)}
    rows = cols.shape[1]

    def ev(g: Formula) -> np.ndarray:
        if g in index:
            return cols[index[g]]
        if isinstance(g, Bottom):
            return np.zeros(rows, dtype=bool)
        if isinstance(g, Not):
            return ~ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) | ev(g.right)
        if isinstance(g, Implies):
            return ~ev(g.left) | ev(g.right)
        if isinstance(g, Iff):
            return ev(g.left) == ev(g.right)
        raise TypeError(f"cannot abstract {g!r}")

    return letters, ev(f)


def taut_check(f: Formula, limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    _, values = truth_table(f, limit)
    return bool(values.all())
