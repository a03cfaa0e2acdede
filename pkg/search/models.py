# -*- coding: utf-8 -*-
"""Модели данных поиска: граница перебора, вердикты, отчёт о проверке правила."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from core.errors import BoundError
from kripke.loader import dump_model
from kripke.models import BiModel
from utils.validators import validate_atom_name


@dataclass(frozen=True, slots=True)
class SearchBound:
    max_worlds: int
    atoms: tuple[str, ...] = ()
    isomorphism_reduction: bool = False

    def __post_init__(self) -> None:
        if self.max_worlds < 1:
            raise BoundError("bound must be positive")
        for a in self.atoms:
            ok, msg = validate_atom_name(a)
            if not ok:
                raise BoundError(msg)
        if len(set(self.atoms)) != len(self.atoms):
            raise BoundError("duplicate atom in bound")


@dataclass(frozen=True, slots=True)
class Countermodel:
    model: BiModel
    world: str

    kind = "countermodel"

    @property
    def found(self) -> bool:
        return True

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "model": dump_model(self.model), "world": self.world}


@dataclass(frozen=True, slots=True)
class NoCounterexampleUpTo:
    max_worlds: int
    models_checked: int

    kind = "clear"

    @property
    def found(self) -> bool:
        return False

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "max_worlds": self.max_worlds, "checked": self.models_checked}


Verdict = Union[Countermodel, NoCounterexampleUpTo]


@dataclass(slots=True)
class ProbeReport:
    premises: list[Verdict] = field(default_factory=list)
    conclusion: Verdict | None = None

    @property
    def premises_valid(self) -> bool:
        return all(not v.found for v in self.premises)

    @property
    def refuted(self) -> bool:
        """Правило опровергнуто на этой границе: посылки чисты, заключение имеет контрмодель."""
        return self.premises_valid and self.conclusion is not None and self.conclusion.found

    @property
    def inconclusive(self) -> bool:
        return not self.premises_valid

    def to_dict(self) -> dict[str, Any]:
        return {
            "premises": [v.to_dict() for v in self.premises],
            "conclusion": self.conclusion.to_dict() if self.conclusion is not None else None,
            "premises_valid": self.premises_valid,
            "refuted": self.refuted,
        }
