"""Claim manifests: machine-readable assertions about the corpus, replayed by run_manifest.

    {"file": "models/prop3i.json",
     "claims": [{"op": "eval", "args": {"world": "s", "formula": "IR p"}, "expect": true,
                 "tag": "CLAIM", "anchor": "bimodel-validities (i): s |= IR p"}]}

"file" and "other" name the default model and second model of a pair; a claim
may override either with its own "model" / "other", and may ask for a closure
of both models first ("closure": "reflexive" | "transitive" | "endpoints").
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from bisim.delta import PairRelation, check_delta_bisim, max_delta_bisim
from bisim.distinguish import Language, distinguishing_formula
from claims.loader import CorpusIndex
from core.errors import FormulaSyntaxError, IriError, ManifestError, UnknownOperationError
from kripke.frames import check_frame_property, reflexive_closure, reflexivize_endpoints, transitive_closure
from kripke.models import BiModel, FrameClass
from logic.formula import Formula
from logic.parser import parse, render
from proofs.derivation import check_derivation
from proofs.taut import DEFAULT_ATOM_LIMIT
from search.engine import (
    DEFAULT_CHUNK,
    bounded_equivalent,
    bounded_valid,
    find_countermodel,
    rule_preservation_probe,
)
from search.models import SearchBound
from semantics.evaluator import (
    PointedModel,
    consequence_on_model,
    evaluate,
    evaluate_standard,
    valid_on_model,
)
from utils.helpers import load_json, split_csv
from utils.logger import get_logger

log = get_logger(__name__)

_CLOSURES: dict[str, Callable[[BiModel], BiModel]] = {
    "reflexive": reflexive_closure,
    "transitive": transitive_closure,
    "endpoints": reflexivize_endpoints,
}


class ClaimDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    op: str
    args: dict[str, Any] = {}
    expect: Any = None
    tag: str = "DERIVED"
    anchor: str = ""
    model: Optional[str] = None
    other: Optional[str] = None
    closure: Optional[str] = None


class ManifestDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    file: Optional[str] = None
    other: Optional[str] = None
    comment: str = ""
    claims: list[ClaimDocument] = Field(min_length=1)


@dataclass(slots=True)
class ClaimContext:
    index: CorpusIndex
    model: Optional[BiModel]
    other: Optional[BiModel]
    args: dict[str, Any]
    where: str
    jobs: int = 1
    chunk: int = DEFAULT_CHUNK
    atom_limit: int = DEFAULT_ATOM_LIMIT

    def arg(self, key: str, default: Any = ...) -> Any:
        if key in self.args:
            return self.args[key]
        if default is ...:
            raise ManifestError(f"{self.where}: missing argument {key!r}")
        return default

    def formula(self, key: str) -> Formula:
        try:
            return parse(str(self.arg(key)))
        except FormulaSyntaxError as e:
            raise ManifestError(f"{self.where}: {key}: {e}") from None

    def formulas(self, key: str) -> list[Formula]:
        out = []
        for i, text in enumerate(self.arg(key)):
            try:
                out.append(parse(str(text)))
            except FormulaSyntaxError as e:
                raise ManifestError(f"{self.where}: {key}[{i}]: {e}") from None
        return out

    def need_model(self) -> BiModel:
        if self.model is None:
            raise ManifestError(f"{self.where}: no model given")
        return self.model

    def need_other(self) -> BiModel:
        if self.other is None:
            raise ManifestError(f"{self.where}: no second model given")
        return self.other

    def pointed(self) -> PointedModel:
        return PointedModel(self.need_model(), str(self.arg("world")))

    def frame_class(self) -> FrameClass:
        return FrameClass.parse(str(self.arg("class", "proper")))

    def bound(self) -> SearchBound:
        atoms = self.arg("atoms", ["p"])
        if isinstance(atoms, str):
            atoms = split_csv(atoms)
        return SearchBound(int(self.arg("max_worlds")), tuple(atoms), bool(self.arg("iso", False)))


# ---- operations ----


def _op_eval(ctx: ClaimContext) -> Any:
    return evaluate(ctx.pointed(), ctx.formula("formula"))


def _op_eval_standard(ctx: ClaimContext) -> Any:
    return evaluate_standard(ctx.pointed(), ctx.formula("formula"))


def _op_valid_on_model(ctx: ClaimContext) -> Any:
    return valid_on_model(ctx.need_model(), ctx.formula("formula"))


def _op_consequence(ctx: ClaimContext) -> Any:
    return consequence_on_model(ctx.need_model(), ctx.formulas("premises"), ctx.formula("formula"))


def _op_frame_property(ctx: ClaimContext) -> Any:
    return check_frame_property(ctx.need_model(), ctx.frame_class())


def _op_delta_bisim(ctx: ClaimContext) -> Any:
    z = PairRelation.cross(tuple(p) for p in ctx.arg("pairs"))
    return check_delta_bisim(ctx.need_model(), ctx.need_other(), z)


def _op_max_bisim_contains(ctx: ClaimContext) -> Any:
    a, b = ctx.arg("pair")
    z = max_delta_bisim(ctx.need_model(), ctx.need_other())
    return ((0, a), (1, b)) in z


def _op_distinguish(ctx: ClaimContext) -> Any:
    pm1 = PointedModel(ctx.need_model(), str(ctx.arg("world")))
    pm2 = PointedModel(ctx.need_other(), str(ctx.arg("other_world")))
    f = distinguishing_formula(
        pm1, pm2, Language.parse(str(ctx.arg("language", "IRI"))), int(ctx.arg("max_size", 8))
    )
    return None if f is None else render(f)


def _op_find_countermodel(ctx: ClaimContext) -> Any:
    v = find_countermodel(ctx.formula("formula"), ctx.frame_class(), ctx.bound(), jobs=ctx.jobs, chunk=ctx.chunk)
    return v.kind


def _op_bounded_valid(ctx: ClaimContext) -> Any:
    v = bounded_valid(ctx.formula("formula"), ctx.frame_class(), ctx.bound(), jobs=ctx.jobs, chunk=ctx.chunk)
    return v.kind


def _op_bounded_equivalent(ctx: ClaimContext) -> Any:
    v = bounded_equivalent(
        ctx.formula("left"), ctx.formula("right"), ctx.frame_class(), ctx.bound(), jobs=ctx.jobs, chunk=ctx.chunk
    )
    return v.kind


def _op_rule_probe(ctx: ClaimContext) -> Any:
    rep = rule_preservation_probe(
        ctx.formulas("premises"),
        ctx.formula("conclusion"),
        ctx.frame_class(),
        ctx.bound(),
        jobs=ctx.jobs,
        chunk=ctx.chunk,
    )
    if rep.inconclusive:
        return "inconclusive"
    return "refuted" if rep.refuted else "not-refuted"


def _op_check_derivation(ctx: ClaimContext) -> Any:
    d = ctx.index.derivation(str(ctx.arg("path")))
    return check_derivation(d, ctx.arg("system", None), ctx.atom_limit).accepted


OPERATIONS: dict[str, Callable[[ClaimContext], Any]] = {
    "eval": _op_eval,
    "evaluate_standard": _op_eval_standard,
    "valid_on_model": _op_valid_on_model,
    "consequence_on_model": _op_consequence,
    "check_frame_property": _op_frame_property,
    "check_delta_bisim": _op_delta_bisim,
    "max_delta_bisim_contains": _op_max_bisim_contains,
    "distinguishing_formula": _op_distinguish,
    "find_countermodel": _op_find_countermodel,
    "bounded_valid": _op_bounded_valid,
    "bounded_equivalent": _op_bounded_equivalent,
    "rule_preservation_probe": _op_rule_probe,
    "check_derivation": _op_check_derivation,
}


# ---- reports ----


@dataclass(slots=True)
class ClaimResult:
    op: str
    anchor: str
    tag: str
    expect: Any
    actual: Any
    ok: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "op": self.op,
            "anchor": self.anchor,
            "tag": self.tag,
            "expect": self.expect,
            "actual": self.actual,
            "ok": self.ok,
        }


@dataclass(slots=True)
class ManifestReport:
    manifest: str
    claims: list[ClaimResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.claims if c.ok)

    @property
    def failed(self) -> int:
        return len(self.claims) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "manifest": self.manifest,
            "passed": self.passed,
            "failed": self.failed,
            "claims": [c.to_dict() for c in self.claims],
        }


def load_manifest(path: Path) -> ManifestDocument:
    path = Path(path)
    try:
        data = load_json(path)
    except ValueError as e:
        raise ManifestError(f"{path}: malformed document: {e}") from None
    try:
        doc = ManifestDocument.model_validate(data)
    except ValidationError as e:
        msgs = "; ".join(err.get("msg", "") for err in e.errors())
        raise ManifestError(f"{path}: {msgs}") from None
    for i, c in enumerate(doc.claims):
        if c.op not in OPERATIONS:
            raise UnknownOperationError(c.op)
        if c.closure is not None and c.closure not in _CLOSURES:
            raise ManifestError(f"{path}: claim {i}: unknown closure {c.closure!r}")
    return doc


def _models_for(index: CorpusIndex, doc: ManifestDocument, claim: ClaimDocument) -> tuple[Optional[BiModel], Optional[BiModel]]:
    ref, other_ref = claim.model or doc.file, claim.other or doc.other
    m = index.model(ref) if ref else None
    o = index.model(other_ref) if other_ref else None
    if claim.closure:
        close = _CLOSURES[claim.closure]
        m = close(m) if m is not None else None
        o = close(o) if o is not None else None
    return m, o


def run_manifest(
    path: Path,
    index: CorpusIndex,
    jobs: int = 1,
    chunk: int = DEFAULT_CHUNK,
    atom_limit: int = DEFAULT_ATOM_LIMIT,
) -> ManifestReport:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"manifest not found: {path}")
    doc = load_manifest(path)
    try:
        name = path.resolve().relative_to(index.corpus_dir.resolve()).as_posix()
    except ValueError:
        name = path.as_posix()

    t0 = time.monotonic()
    report = ManifestReport(name)
    for i, claim in enumerate(doc.claims):
        where = f"{name}: claim {i} ({claim.op})"
        m, o = _models_for(index, doc, claim)
        ctx = ClaimContext(index, m, o, claim.args, where, jobs, chunk, atom_limit)
        try:
            actual = OPERATIONS[claim.op](ctx)
        except ManifestError:
            raise
        except IriError as e:
            actual = f"error: {e}"
        ok = actual == claim.expect
        if not ok:
            log.warning(f"{where} failed: expected {claim.expect!r}, got {actual!r}")
        report.claims.append(ClaimResult(claim.op, claim.anchor, claim.tag, claim.expect, actual, ok))
    log.info(f"Manifest {name}: {report.passed} passed, {report.failed} failed ({time.monotonic() - t0:.2f}s)")
    return report


def replicate(
    index: CorpusIndex,
    names: Optional[list[str]] = None,
    jobs: int = 1,
    chunk: int = DEFAULT_CHUNK,
    atom_limit: int = DEFAULT_ATOM_LIMIT,
) -> list[ManifestReport]:
    entries = [index.find_manifest(n) for n in names] if names else index.manifests()
    if not entries:
        raise ManifestError(f"no manifests under {index.corpus_dir}")
    reports = [run_manifest(e.path, index, jobs, chunk, atom_limit) for e in entries]
    return sorted(reports, key=lambda r: r.manifest)
