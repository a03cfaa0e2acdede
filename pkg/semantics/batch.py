"""Vectorized evaluation of one formula over a batch of frames and every valuation.

Shapes: relations are (F, n, n) boolean arrays, truth tables are (F, V, n)
with V = 2 ** (n * k) valuations over k atoms. Valuation number v makes
atom number a true at world w iff bit (a * n + w) of v is set.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from core.errors import UndeclaredAtomError
from kripke.models import BiModel, Relation
from logic.formula import And, Atom, Bottom, Box, Formula, Iff, Ig, Implies, Not, Or, RIg, desugar, subformulas


def valuation_count(n: int, k: int) -> int:
    return 1 << (n * k)


def atom_tables(n: int, atom_names: Sequence[str]) -> dict[str, np.ndarray]:
    v = np.arange(valuation_count(n, len(atom_names)), dtype=np.int64)[:, None]
    out = {}
    for a, name in enumerate(atom_names):
        shifts = a * n + np.arange(n, dtype=np.int64)
        out[name] = ((v >> shifts) & 1).astype(bool)[None, :, :]
    return out


def valuation_index(m: BiModel, atom_names: Sequence[str]) -> int:
    n = m.size
    v = 0
    for a, name in enumerate(atom_names):
        for w, world in enumerate(m.worlds):
            if world in m.valuation.get(name, ()):
                v |= 1 << (a * n + w)
    return v


def valuation_from_index(worlds: Sequence[str], atom_names: Sequence[str], v: int) -> dict[str, list[str]]:
    n = len(worlds)
    return {name: [worlds[w] for w in range(n) if (v >> (a * n + w)) & 1] for a, name in enumerate(atom_names)}


class BatchEvaluator:
    """Один фрейм-батч, одна формула, все валюации сразу."""

    def __init__(self, r: np.ndarray, rbullet: np.ndarray, atom_names: Sequence[str], standard: bool = False) -> None:
        if r.ndim == 2:
            r, rbullet = r[None], rbullet[None]
        self.frames, self.n = r.shape[0], r.shape[-1]
        self._rt = np.swapaxes(r, -1, -2).astype(np.uint8)
        outer = r if standard else rbullet
        self._bt = np.swapaxes(outer, -1, -2).astype(np.uint8)
        self.atom_names = list(atom_names)
        self._atoms = atom_tables(self.n, self.atom_names)

    @property
    def valuations(self) -> int:
        return valuation_count(self.n, len(self.atom_names))

    def _exists(self, sat: np.ndarray, rel_t: np.ndarray) -> np.ndarray:
        # [f, v, s] = есть t: sRt и sat[f, v, t]
        return np.matmul(sat.astype(np.uint8), rel_t) > 0

    def _ignorant(self, sat: np.ndarray) -> np.ndarray:
        return self._exists(sat, self._rt) & self._exists(~sat, self._rt)

    def truth(self, f: Formula) -> np.ndarray:
        f = desugar(f)
        tab: dict[Formula, np.ndarray] = {}
        for g in subformulas(f):
            if isinstance(g, Atom):
                if g.name not in self._atoms:
                    raise UndeclaredAtomError(g.name)
                e = self._atoms[g.name]
            elif isinstance(g, Bottom):
                e = np.zeros((1, 1, self.n), dtype=bool)
            elif isinstance(g, Not):
                e = ~tab[g.sub]
            elif isinstance(g, And):
                e = tab[g.left] & tab[g.right]
            elif isinstance(g, Or):
                e = tab[g.left] | tab[g.right]
            elif isinstance(g, Implies):
                e = ~tab[g.left] | tab[g.right]
            elif isinstance(g, Iff):
                e = tab[g.left] == tab[g.right]
            elif isinstance(g, Ig):
                e = self._ignorant(tab[g.sub])
            elif isinstance(g, RIg):
                ig = self._ignorant(tab[g.sub])
                e = ig & self._exists(~ig, self._bt)
            elif isinstance(g, Box):
                e = ~self._exists(~tab[g.sub], self._bt)
            else:
                raise TypeError(f"cannot evaluate {g!r}")
            tab[g] = e
        return np.broadcast_to(tab[f], (self.frames, self.valuations, self.n))


def model_truth(m: BiModel, f: Formula, atom_names: Sequence[str] | None = None) -> list[bool]:
    """Истинность f в каждом мире m через батч-путь (для сверки со скалярным вычислителем)."""
    names = list(atom_names) if atom_names is not None else m.atoms
    ev = BatchEvaluator(m.matrix(Relation.R), m.matrix(Relation.RBULLET), names)
    t = ev.truth(f)
    return [bool(x) for x in t[0, valuation_index(m, names)]]
