"""Axiom schemas and the axiom systems built from them.

Schemas are formulas over the metavariables phi, psi, chi. Matching is
first-order unification of the pattern against a concrete formula: each
metavariable binds once, and repeated occurrences must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional

from core.errors import DerivationFormatError
from kripke.models import FrameClass
from logic.formula import And, Formula, Iff, Ig, Implies, Meta, Not, Or, RIg, desugar
from proofs.taut import DEFAULT_ATOM_LIMIT, taut_check

PHI, PSI, CHI = Meta("phi"), Meta("psi"), Meta("chi")

Substitution = dict[str, Formula]


class SchemaName(str, Enum):
    TAUT = "TAUT"
    I_EQU = "I-Equ"
    IR_EQU = "IR-Equ"
    I_CON = "I-Con"
    I_DIS = "I-Dis"
    RI_I = "RI-I"
    MIX = "MIX"
    I_T = "I-T"
    WI_4 = "wI-4"


class RuleName(str, Enum):
    MP = "MP"
    R_NI = "R-NI"
    RE_I = "RE-I"
    RE_RI = "RE-RI"
    R_MIX = "R-MIX"


@dataclass(frozen=True, slots=True)
class Schema:
    name: SchemaName
    pattern: Optional[Formula]  # у TAUT шаблона нет


SCHEMAS: dict[SchemaName, Schema] = {
    s.name: s
    for s in (
        Schema(SchemaName.TAUT, None),
        Schema(SchemaName.I_EQU, Iff(Ig(PHI), Ig(Not(PHI)))),
        Schema(SchemaName.IR_EQU, Iff(RIg(PHI), RIg(Not(PHI)))),
        Schema(SchemaName.I_CON, Implies(Ig(And(PHI, PSI)), Or(Ig(PHI), Ig(PSI)))),
        Schema(SchemaName.I_DIS, Implies(And(Ig(Or(PHI, PSI)), Ig(Or(Not(PHI), CHI))), Ig(PHI))),
        Schema(SchemaName.RI_I, Implies(RIg(PHI), Ig(PHI))),
        Schema(SchemaName.MIX, Implies(And(Ig(PHI), Ig(Or(Ig(PHI), CHI))), RIg(PHI))),
        Schema(SchemaName.I_T, Implies(And(PHI, Ig(Or(PHI, PSI))), Ig(PHI))),
        Schema(SchemaName.WI_4, Implies(Ig(Ig(PHI)), Ig(PHI))),
    )
}

_MINIMAL = frozenset(
    {
        SchemaName.TAUT,
        SchemaName.I_EQU,
        SchemaName.IR_EQU,
        SchemaName.I_CON,
        SchemaName.I_DIS,
        SchemaName.RI_I,
        SchemaName.MIX,
    }
)


@dataclass(frozen=True, slots=True)
class AxiomSystem:
    name: str
    schemas: frozenset[SchemaName]
    frame_class: str  # класс фреймов, на котором система корректна

    def frames(self) -> FrameClass:
        return FrameClass.parse(self.frame_class)


SYSTEMS: dict[str, AxiomSystem] = {
    s.name: s
    for s in (
        AxiomSystem("IRIK", _MINIMAL, "proper"),
        AxiomSystem("IRIT", _MINIMAL | {SchemaName.I_T}, "t-proper"),
        AxiomSystem("IRIK+wI4", _MINIMAL | {SchemaName.WI_4}, "proper,transitive-r"),
        AxiomSystem("IRIS4", _MINIMAL | {SchemaName.I_T, SchemaName.WI_4}, "s4-proper"),
    )
}


def get_system(name: str) -> AxiomSystem:
    key = name.strip()
    for s in SYSTEMS.values():
        if s.name.lower() == key.lower():
            return s
    raise DerivationFormatError(f"unknown axiom system: {name!r}")


def unify(pattern: Formula, f: Formula, sigma: Optional[Substitution] = None) -> Optional[Substitution]:
    sigma = dict(sigma or {})
    stack = [(pattern, f)]
    while stack:
        p, g = stack.pop()
        if isinstance(p, Meta):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = g
            elif bound != g:
                return None
            continue
        if type(p) is not type(g):
            return None
        kids_p, kids_g = p.children(), g.children()
        if not kids_p:
            if p != g:
                return None
            continue
        stack.extend(zip(kids_p, kids_g))
    return sigma


def match_axiom(
    name: SchemaName | str,
    f: Formula,
    atom_limit: int = DEFAULT_ATOM_LIMIT,
) -> Optional[Substitution]:
    """Подстановка σ с pattern[σ] = f, если она есть. Для TAUT: пустая σ либо None."""
    schema = SCHEMAS[SchemaName(name)]
    f = desugar(f)
    if schema.pattern is None:
        return {} if taut_check(f, atom_limit) else None
    return unify(schema.pattern, f)


def agrees_with(found: Mapping[str, Formula], given: Mapping[str, Formula]) -> Optional[str]:
    """Первый метасимвол, где явная подстановка расходится с найденной."""
    for key, value in given.items():
        if key in found and found[key] != desugar(value):
            return key
    return None
