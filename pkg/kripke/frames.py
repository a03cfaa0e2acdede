"""Frame-property predicates and closures.

Predicates work on boolean adjacency arrays of shape (..., n, n) so the
search engine can filter whole batches of candidate relations at once.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from kripke.models import BiModel, FrameClass, FrameProperty, Inclusion, Relation, RelationSelector
from utils.logger import get_logger

log = get_logger(__name__)


def _compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.matmul(a.astype(np.uint8), b.astype(np.uint8)) > 0


def is_reflexive(a: np.ndarray) -> np.ndarray:
    return np.diagonal(a, axis1=-2, axis2=-1).all(axis=-1)


def is_serial(a: np.ndarray) -> np.ndarray:
    return a.any(axis=-1).all(axis=-1)


def is_symmetric(a: np.ndarray) -> np.ndarray:
    return (a == np.swapaxes(a, -1, -2)).all(axis=(-2, -1))


def is_transitive(a: np.ndarray) -> np.ndarray:
    return ~(_compose(a, a) & ~a).any(axis=(-2, -1))


def is_euclidean(a: np.ndarray) -> np.ndarray:
    # sRt, sRu => tRu
    return ~(_compose(np.swapaxes(a, -1, -2), a) & ~a).any(axis=(-2, -1))


PROPERTY_CHECKS: dict[FrameProperty, Callable[[np.ndarray], np.ndarray]] = {
    FrameProperty.REFLEXIVE: is_reflexive,
    FrameProperty.TRANSITIVE: is_transitive,
    FrameProperty.SERIAL: is_serial,
    FrameProperty.SYMMETRIC: is_symmetric,
    FrameProperty.EUCLIDEAN: is_euclidean,
}


def inclusion_holds(r: np.ndarray, rb: np.ndarray, inclusion: Inclusion) -> np.ndarray:
    if inclusion is Inclusion.R_SUB_RBULLET:
        return ~(r & ~rb).any(axis=(-2, -1))
    if inclusion is Inclusion.RBULLET_SUB_R:
        return ~(rb & ~r).any(axis=(-2, -1))
    if inclusion is Inclusion.EQUAL:
        return (r == rb).all(axis=(-2, -1))
    return np.ones(r.shape[:-2], dtype=bool)


def has_property(m: BiModel, rel: Relation, prop: FrameProperty) -> bool:
    return bool(PROPERTY_CHECKS[prop](m.matrix(rel)))


def check_frame_property(m: BiModel, c: FrameClass) -> bool:
    r, rb = m.matrix(Relation.R), m.matrix(Relation.RBULLET)
    for prop in c.r_props:
        if not PROPERTY_CHECKS[prop](r):
            return False
    for prop in c.rbullet_props:
        if not PROPERTY_CHECKS[prop](rb):
            return False
    if c.inclusion is Inclusion.R_SUB_RBULLET:
        # литеральная проверка вложения множеств пар
        return m.r <= m.rbullet
    return bool(inclusion_holds(r, rb, c.inclusion))


def frame_report(m: BiModel) -> dict[str, object]:
    out: dict[str, object] = {}
    for rel in Relation:
        a = m.matrix(rel)
        out[rel.value] = {p.value: bool(PROPERTY_CHECKS[p](a)) for p in FrameProperty}
    out["inclusion"] = {
        inc.value: bool(inclusion_holds(m.matrix(Relation.R), m.matrix(Relation.RBULLET), inc))
        for inc in (Inclusion.R_SUB_RBULLET, Inclusion.RBULLET_SUB_R, Inclusion.EQUAL)
    }
    return out


# ---- closures ----


def _apply(m: BiModel, which: RelationSelector, fn: Callable[[BiModel, Relation], set]) -> BiModel:
    out = m
    for rel in RelationSelector(which).relations():
        out = out.with_relation(rel, fn(m, rel))
    return out


def reflexive_closure(m: BiModel, which: RelationSelector = RelationSelector.BOTH) -> BiModel:
    return _apply(m, which, lambda mm, rel: set(mm.relation(rel)) | {(w, w) for w in mm.worlds})


def reflexivize_endpoints(m: BiModel, which: RelationSelector = RelationSelector.R) -> BiModel:
    def step(mm: BiModel, rel: Relation) -> set:
        ends = [w for w in mm.worlds if not mm.successors(rel, w)]
        if ends:
            log.debug(f"Endpoints in {rel.value}: {ends}")
        return set(mm.relation(rel)) | {(w, w) for w in ends}

    return _apply(m, which, step)


def transitive_closure(m: BiModel, which: RelationSelector = RelationSelector.BOTH) -> BiModel:
    def step(mm: BiModel, rel: Relation) -> set:
        a = mm.matrix(rel)
        for k in range(a.shape[0]):
            a |= np.outer(a[:, k], a[k, :])
        ws = mm.worlds
        return {(ws[i], ws[j]) for i, j in zip(*np.nonzero(a))}

    return _apply(m, which, step)
