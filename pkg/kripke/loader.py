"""JSON model format.

    {"worlds": ["s", "t"], "r": [["s", "t"]], "rbullet": [["s", "t"], ["t", "t"]],
     "valuation": {"p": ["s"]}, "comment": "optional"}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from core.errors import ModelFormatError, UnknownWorldError
from kripke.models import BiModel, Relation
from utils.logger import get_logger
from utils.validators import validate_atom_name, validate_pairs, validate_world_list

log = get_logger(__name__)


class ModelDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    worlds: list[str]
    r: list[tuple[str, str]] = []
    rbullet: list[tuple[str, str]] = []
    valuation: dict[str, list[str]] = {}
    comment: str = ""

    @model_validator(mode="after")
    def _check_refs(self) -> "ModelDocument":
        ok, msg = validate_world_list(self.worlds)
        if not ok:
            raise ValueError(msg)
        for label, pairs in (("r", self.r), ("rbullet", self.rbullet)):
            ok, msg = validate_pairs(pairs, self.worlds, label)
            if not ok:
                raise ValueError(msg)
        known = set(self.worlds)
        for atom, ws in self.valuation.items():
            ok, msg = validate_atom_name(atom)
            if not ok:
                raise ValueError(msg)
            for w in ws:
                if w not in known:
                    raise ValueError(f"unknown world {w!r} in valuation of {atom!r}")
        return self


def _wrap(e: ValidationError, source: str) -> ModelFormatError:
    msgs = "; ".join(err.get("msg", "").removeprefix("Value error, ") for err in e.errors())
    cls = UnknownWorldError if "unknown world" in msgs else ModelFormatError
    where = f"{source}: " if source else ""
    return cls(f"{where}{msgs}")


def model_from_dict(data: Any, source: str = "") -> BiModel:
    try:
        doc = ModelDocument.model_validate(data)
    except ValidationError as e:
        raise _wrap(e, source) from None
    return BiModel.build(doc.worlds, doc.r, doc.rbullet, doc.valuation, doc.comment)


def load_model(text: str, source: str = "") -> BiModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{source + ': ' if source else ''}malformed document: {e}") from None
    return model_from_dict(data, source)


def load_model_file(path: Path) -> BiModel:
    path = Path(path)
    m = load_model(path.read_text(encoding="utf-8-sig"), source=str(path))
    log.debug(f"Model loaded: {path.name} ({m.size} worlds)")
    return m


def dump_model(m: BiModel) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "worlds": list(m.worlds),
        "r": m.sorted_pairs(Relation.R),
        "rbullet": m.sorted_pairs(Relation.RBULLET),
        "valuation": {a: [w for w in m.worlds if w in ws] for a, ws in sorted(m.valuation.items())},
    }
    if m.comment:
        doc["comment"] = m.comment
    return doc


def model_to_json(m: BiModel, indent: int | None = 2) -> str:
    return json.dumps(dump_model(m), indent=indent, ensure_ascii=False)
