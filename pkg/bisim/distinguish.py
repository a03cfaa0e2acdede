"""Bounded search for a formula telling two pointed models apart.

Formulas are enumerated by size over the atoms of both models. Each
candidate carries its extension in each model as a bitmask, built from the
children's masks, so no candidate is evaluated twice. The answer is the
least distinguishing formula by (IR-depth, size, rendered text).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from core.errors import BoundError
from kripke.models import BiModel, Relation
from logic.formula import And, Atom, Box, Formula, Ig, Not, Or, RIg
from logic.parser import render
from semantics.evaluator import PointedModel
from utils.logger import get_logger

log = get_logger(__name__)


class Language(str, Enum):
    LI = "LI"
    IRI = "IRI"
    IRI_BOX = "IRI+Box"

    @classmethod
    def parse(cls, name: str) -> "Language":
        key = name.strip().replace(" ", "").upper()
        aliases = {"L(I)": cls.LI, "LI": cls.LI, "IRI": cls.IRI, "IRI+BOX": cls.IRI_BOX, "IRI+K": cls.IRI_BOX}
        try:
            return aliases[key]
        except KeyError:
            raise BoundError(f"unknown language: {name!r}") from None

    def unary_ops(self) -> tuple[type, ...]:
        ops: tuple[type, ...] = (Not, Ig)
        if self in (Language.IRI, Language.IRI_BOX):
            ops += (RIg,)
        if self is Language.IRI_BOX:
            ops += (Box,)
        return ops


class _Masks:
    """Расширения формул в одной модели как битовые маски по индексам миров."""

    def __init__(self, m: BiModel) -> None:
        self.n = m.size
        self.full = (1 << self.n) - 1
        idx = {w: i for i, w in enumerate(m.worlds)}

        def succ(rel: Relation) -> list[int]:
            return [sum(1 << idx[t] for t in m.successors(rel, w)) for w in m.worlds]

        self.r = succ(Relation.R)
        self.rb = succ(Relation.RBULLET)
        self.valuation = {a: sum(1 << idx[w] for w in ws) for a, ws in m.valuation.items()}

    def atom(self, name: str) -> int:
        return self.valuation.get(name, 0)

    def ignorant(self, e: int) -> int:
        out = 0
        for s in range(self.n):
            succ = self.r[s]
            if succ & e and succ & ~e:
                out |= 1 << s
        return out

    def apply(self, op: type, e: int) -> int:
        if op is Not:
            return self.full & ~e
        if op is Ig:
            return self.ignorant(e)
        if op is RIg:
            ig = self.ignorant(e)
            out = 0
            for s in range(self.n):
                if (ig >> s) & 1 and self.rb[s] & ~ig:
                    out |= 1 << s
            return out
        if op is Box:
            out = 0
            for s in range(self.n):
                if (self.rb[s] & ~e) == 0:
                    out |= 1 << s
            return out
        raise TypeError(op)


@dataclass(frozen=True, slots=True)
class _Cand:
    formula: Formula
    e1: int
    e2: int
    depth: int


def distinguishing_formula(
    pm1: PointedModel,
    pm2: PointedModel,
    language: Language = Language.IRI,
    max_size: int = 8,
) -> Optional[Formula]:
    if max_size < 1:
        raise BoundError("max_size must be positive")
    language = Language(language)
    m1, m2 = _Masks(pm1.model), _Masks(pm2.model)
    bit1 = 1 << pm1.model.index(pm1.world)
    bit2 = 1 << pm2.model.index(pm2.world)
    atom_names = sorted(set(pm1.model.valuation) | set(pm2.model.valuation))
    unary = language.unary_ops()

    by_size: dict[int, list[_Cand]] = {
        1: [_Cand(Atom(a), m1.atom(a), m2.atom(a), 0) for a in atom_names]
    }
    best: Optional[tuple[int, int, str, Formula]] = None

    def consider(c: _Cand, size: int) -> None:
        nonlocal best
        if bool(c.e1 & bit1) == bool(c.e2 & bit2):
            return
        if best is not None and (c.depth, size) > (best[0], best[1]):
            return
        text = render(c.formula)
        key = (c.depth, size, text, c.formula)
        if best is None or key[:3] < best[:3]:
            best = key

    for c in by_size[1]:
        consider(c, 1)

    for size in range(2, max_size + 1):
        level: list[_Cand] = []
        for op in unary:
            for c in by_size[size - 1]:
                level.append(
                    _Cand(op(c.formula), m1.apply(op, c.e1), m2.apply(op, c.e2), c.depth + (op is RIg))
                )
        for left_size in range(1, size - 1):
            right_size = size - 1 - left_size
            for a in by_size[left_size]:
                for b in by_size[right_size]:
                    level.append(_Cand(And(a.formula, b.formula), a.e1 & b.e1, a.e2 & b.e2, max(a.depth, b.depth)))
                    level.append(_Cand(Or(a.formula, b.formula), a.e1 | b.e1, a.e2 | b.e2, max(a.depth, b.depth)))
        for c in level:
            consider(c, size)
        by_size[size] = level
        log.debug(f"size {size}: {len(level)} candidates")

    if best is None:
        return None
    log.debug(f"Distinguishing formula: {best[2]}")
    return best[3]
