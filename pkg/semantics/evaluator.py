"""Truth at a world under the bi-semantics.

I φ   : some R-successor satisfies φ and some R-successor falsifies φ
IR φ  : I φ holds and some R•-successor falsifies I φ
K φ   : every R•-successor satisfies φ

The single-relation ("standard") semantics reads R wherever R• appears.
Extensions are computed bottom-up once per subformula, so every
(world, subformula) pair is evaluated at most once per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from core.errors import UndeclaredAtomError, UnknownWorldError
from kripke.models import BiModel, Relation
from logic.formula import (
    And,
    Atom,
    Bottom,
    Box,
    Formula,
    Iff,
    Ig,
    Implies,
    Not,
    Or,
    RIg,
    atoms,
    desugar,
    subformulas,
)


@dataclass(frozen=True, slots=True)
class PointedModel:
    model: BiModel
    world: str

    def __post_init__(self) -> None:
        if self.world not in self.model.worlds:
            raise UnknownWorldError(f"unknown world {self.world!r}")


def check_atoms(m: BiModel, f: Formula) -> None:
    for a in atoms(f):
        if a not in m.valuation:
            raise UndeclaredAtomError(a)


def extensions(m: BiModel, f: Formula, standard: bool = False) -> dict[Formula, frozenset[str]]:
    """Множество истинности для каждой подформулы f."""
    f = desugar(f)
    check_atoms(m, f)
    outer = Relation.R if standard else Relation.RBULLET
    worlds = frozenset(m.worlds)
    ext: dict[Formula, frozenset[str]] = {}

    for g in subformulas(f):
        if isinstance(g, Atom):
            e = m.valuation[g.name]
        elif isinstance(g, Bottom):
            e = frozenset()
        elif isinstance(g, Not):
            e = worlds - ext[g.sub]
        elif isinstance(g, And):
            e = ext[g.left] & ext[g.right]
        elif isinstance(g, Or):
            e = ext[g.left] | ext[g.right]
        elif isinstance(g, Implies):
            e = (worlds - ext[g.left]) | ext[g.right]
        elif isinstance(g, Iff):
            a, b = ext[g.left], ext[g.right]
            e = (a & b) | (worlds - (a | b))
        elif isinstance(g, Ig):
            e = _ignorant(m, ext[g.sub])
        elif isinstance(g, RIg):
            ig = _ignorant(m, ext[g.sub])
            e = frozenset(s for s in ig if any(t not in ig for t in m.successors(outer, s)))
        elif isinstance(g, Box):
            e = frozenset(s for s in m.worlds if all(t in ext[g.sub] for t in m.successors(outer, s)))
        else:
            raise TypeError(f"cannot evaluate {g!r}")
        ext[g] = e
    return ext


def _ignorant(m: BiModel, sat: frozenset[str]) -> frozenset[str]:
    out = []
    for s in m.worlds:
        succ = m.successors(Relation.R, s)
        if any(t in sat for t in succ) and any(t not in sat for t in succ):
            out.append(s)
    return frozenset(out)


def extension(m: BiModel, f: Formula, standard: bool = False) -> frozenset[str]:
    f = desugar(f)
    return extensions(m, f, standard)[f]


def evaluate(pm: PointedModel, f: Formula) -> bool:
    return pm.world in extension(pm.model, f)


def evaluate_standard(pm: PointedModel, f: Formula) -> bool:
    return pm.world in extension(pm.model, f, standard=True)


def satisfying_worlds(m: BiModel, f: Formula, standard: bool = False) -> list[str]:
    e = extension(m, f, standard)
    return [w for w in m.worlds if w in e]


def valid_on_model(m: BiModel, f: Formula) -> bool:
    return len(extension(m, f)) == m.size


def consequence_on_model(m: BiModel, gamma: Iterable[Formula], f: Formula) -> bool:
    premises = [desugar(g) for g in gamma]
    for g in premises:
        check_atoms(m, g)
    holds = frozenset(m.worlds)
    for g in premises:
        holds &= extension(m, g)
    return holds <= extension(m, f)


def merge_relations(m: BiModel, onto: Relation = Relation.R) -> BiModel:
    """Копия модели с R• := R (или R := R•)."""
    if Relation(onto) is Relation.R:
        return m.replace(rbullet=m.r)
    return m.replace(r=m.rbullet)
