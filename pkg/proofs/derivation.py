"""Hilbert derivation documents and their verification.

    {"system": "IRIK",
     "steps": [{"formula": "(I p | false) <-> I p", "by": {"kind": "TAUT"}},
               {"formula": "I (I p | false) <-> I I p", "by": {"kind": "RE-I", "from": 0}}]}

Step indices are zero-based. MP takes "from": [i, j] where step j must be
step i -> (this step). R-MIX additionally takes "arity".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.errors import DerivationFormatError, FormulaSyntaxError, TautologyLimitError
from logic.formula import Formula, Iff, Ig, Implies, Not, RIg, desugar, flatten_and
from logic.parser import parse, render
from proofs.schemas import SYSTEMS, AxiomSystem, RuleName, SchemaName, agrees_with, get_system, match_axiom
from proofs.taut import DEFAULT_ATOM_LIMIT
from utils.logger import get_logger

log = get_logger(__name__)

_AXIOMS = {s.value for s in SchemaName}
_RULES = {r.value for r in RuleName}


class JustificationDocument(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: str
    from_: Union[int, list[int], None] = Field(default=None, alias="from")
    arity: Optional[int] = None
    subst: Optional[dict[str, str]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "JustificationDocument":
        if self.kind not in _AXIOMS | _RULES:
            raise ValueError(f"unknown justification kind {self.kind!r}")
        if self.kind in _AXIOMS:
            if self.from_ is not None or self.arity is not None:
                raise ValueError(f"axiom {self.kind} takes no premises")
            return self
        if self.subst is not None:
            raise ValueError(f"rule {self.kind} takes no substitution")
        if self.kind == RuleName.MP.value:
            if not isinstance(self.from_, list) or len(self.from_) != 2:
                raise ValueError("MP needs \"from\": [i, j]")
        elif not isinstance(self.from_, int):
            raise ValueError(f"{self.kind} needs a single step index in \"from\"")
        if self.kind == RuleName.R_MIX.value:
            if self.arity is None or self.arity < 1:
                raise ValueError("R-MIX needs a positive \"arity\"")
        elif self.arity is not None:
            raise ValueError(f"{self.kind} takes no arity")
        return self


class StepDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    formula: str
    by: JustificationDocument
    note: str = ""


class DerivationDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    system: str = "IRIK"
    steps: list[StepDocument] = Field(min_length=1)
    comment: str = ""


@dataclass(frozen=True, slots=True)
class Step:
    formula: Formula
    kind: str
    refs: tuple[int, ...] = ()
    arity: Optional[int] = None
    subst: Optional[dict[str, Formula]] = None

    @property
    def is_axiom(self) -> bool:
        return self.kind in _AXIOMS


@dataclass(frozen=True, slots=True)
class Derivation:
    steps: tuple[Step, ...]
    system: str = "IRIK"
    source: str = ""

    @property
    def theorem(self) -> Formula:
        return self.steps[-1].formula


@dataclass(slots=True)
class StepDiagnostic:
    index: int
    kind: str
    ok: bool
    message: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"step": self.index, "by": self.kind, "ok": self.ok, "message": self.message}


@dataclass(slots=True)
class DerivationReport:
    system: str
    theorem: str
    steps: list[StepDiagnostic] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def failures(self) -> list[StepDiagnostic]:
        return [s for s in self.steps if not s.ok]

    def to_dict(self) -> dict[str, Any]:
        return {
            "system": self.system,
            "theorem": self.theorem,
            "accepted": self.accepted,
            "steps": [s.to_dict() for s in self.steps],
        }


# ---- loading ----


def _parse_at(text: str, where: str) -> Formula:
    try:
        return desugar(parse(text))
    except FormulaSyntaxError as e:
        raise DerivationFormatError(f"{where}: {e}") from None


def derivation_from_dict(data: Any, source: str = "") -> Derivation:
    prefix = f"{source}: " if source else ""
    try:
        doc = DerivationDocument.model_validate(data)
    except ValidationError as e:
        msgs = "; ".join(err.get("msg", "").removeprefix("Value error, ") for err in e.errors())
        raise DerivationFormatError(f"{prefix}{msgs}") from None

    steps = []
    for i, s in enumerate(doc.steps):
        where = f"{prefix}step {i}"
        refs: tuple[int, ...] = ()
        if isinstance(s.by.from_, list):
            refs = tuple(s.by.from_)
        elif isinstance(s.by.from_, int):
            refs = (s.by.from_,)
        subst = None
        if s.by.subst is not None:
            subst = {k: _parse_at(v, f"{where} subst {k}") for k, v in s.by.subst.items()}
        steps.append(Step(_parse_at(s.formula, where), s.by.kind, refs, s.by.arity, subst))
    return Derivation(tuple(steps), doc.system, source)


def load_derivation(text: str, source: str = "") -> Derivation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DerivationFormatError(f"{source + ': ' if source else ''}malformed document: {e}") from None
    return derivation_from_dict(data, source)


def load_derivation_file(path: Path) -> Derivation:
    path = Path(path)
    d = load_derivation(path.read_text(encoding="utf-8-sig"), source=str(path))
    log.debug(f"Derivation loaded: {path.name} ({len(d.steps)} steps, {d.system})")
    return d


def dump_derivation(d: Derivation) -> dict[str, Any]:
    steps = []
    for s in d.steps:
        by: dict[str, Any] = {"kind": s.kind}
        if s.kind == RuleName.MP.value:
            by["from"] = list(s.refs)
        elif s.refs:
            by["from"] = s.refs[0]
        if s.arity is not None:
            by["arity"] = s.arity
        if s.subst:
            by["subst"] = {k: render(v) for k, v in s.subst.items()}
        steps.append({"formula": render(s.formula), "by": by})
    return {"system": d.system, "steps": steps}


# ---- verification ----


def _check_axiom(step: Step, system: AxiomSystem, atom_limit: int) -> str:
    name = SchemaName(step.kind)
    if name not in system.schemas:
        return f"schema {name.value} is not part of {system.name}"
    try:
        sigma = match_axiom(name, step.formula, atom_limit)
    except TautologyLimitError as e:
        return str(e)
    if sigma is None:
        if name is SchemaName.TAUT:
            return "not a propositional tautology"
        return f"formula does not match schema {name.value}"
    if step.subst:
        bad = agrees_with(sigma, step.subst)
        if bad is not None:
            return f"substitution for {bad} disagrees with the match ({render(sigma[bad])})"
    return ""


def _check_mp(f: Formula, minor: Formula, major: Formula, refs: tuple[int, int]) -> str:
    i, j = refs
    if not isinstance(major, Implies):
        return f"step {j} is not an implication"
    if major.left != minor:
        return f"antecedent of step {j} differs from step {i}"
    if major.right != f:
        return f"consequent of step {j} differs from this formula"
    return ""


def _check_replacement(f: Formula, premise: Formula, op: type, ref: int) -> str:
    if not isinstance(premise, Iff):
        return f"step {ref} is not an equivalence"
    expected = Iff(op(premise.left), op(premise.right))
    if f != expected:
        return f"expected {render(expected)}"
    return ""


def _check_rmix(f: Formula, premise: Formula, arity: int, ref: int) -> str:
    if not isinstance(premise, Implies) or not isinstance(premise.right, Ig):
        return f"step {ref} must have shape I χ1 & … & I χn -> I φ"
    chis = flatten_and(premise.left)
    if len(chis) != arity:
        return f"step {ref} has {len(chis)} conjuncts, arity is {arity}"
    if not all(isinstance(c, Ig) for c in chis):
        return f"every conjunct of step {ref} must be headed by I"
    phi = premise.right.sub
    if not isinstance(f, Implies):
        return "conclusion must be an implication"
    if f.right != Not(RIg(phi)):
        return f"consequent must be {render(Not(RIg(phi)))}"
    expected: list[Formula] = []
    for c in chis:
        expected += [Not(RIg(c.sub)), Ig(c.sub)]
    if flatten_and(f.left) != expected:
        return "antecedent must be (~IR χ1 & I χ1) & … & (~IR χn & I χn) in premise order"
    return ""


def check_step(d: Derivation, index: int, system: AxiomSystem, atom_limit: int = DEFAULT_ATOM_LIMIT) -> str:
    """Пустая строка, если шаг корректен, иначе диагностика."""
    step = d.steps[index]
    for ref in step.refs:
        if ref < 0 or ref >= index:
            return f"cites step {ref}, only earlier steps may be cited"
    if step.is_axiom:
        return _check_axiom(step, system, atom_limit)

    f = step.formula
    prem = [d.steps[r].formula for r in step.refs]
    rule = RuleName(step.kind)
    if rule is RuleName.MP:
        return _check_mp(f, prem[0], prem[1], (step.refs[0], step.refs[1]))
    if rule is RuleName.R_NI:
        expected = Not(Ig(prem[0]))
        return "" if f == expected else f"expected {render(expected)}"
    if rule is RuleName.RE_I:
        return _check_replacement(f, prem[0], Ig, step.refs[0])
    if rule is RuleName.RE_RI:
        return _check_replacement(f, prem[0], RIg, step.refs[0])
    return _check_rmix(f, prem[0], step.arity or 0, step.refs[0])


def check_derivation(
    d: Derivation,
    system: Optional[str] = None,
    atom_limit: int = DEFAULT_ATOM_LIMIT,
) -> DerivationReport:
    sys_ = get_system(system or d.system)
    report = DerivationReport(sys_.name, render(d.theorem))
    for i, step in enumerate(d.steps):
        msg = check_step(d, i, sys_, atom_limit)
        report.steps.append(StepDiagnostic(i, step.kind, not msg, msg))
        if msg:
            log.debug(f"Step {i} ({step.kind}) rejected: {msg}")
    log.info(
        f"Derivation {d.source or '<inline>'} in {sys_.name}: "
        f"{'accepted' if report.accepted else f'rejected ({len(report.failures)} bad steps)'}"
    )
    return report


def known_systems() -> list[str]:
    return list(SYSTEMS)
