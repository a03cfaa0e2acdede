"""Δ-bisimulation on the disjoint union of two bi-models.

Nodes are (side, world) with side 0 for the left model and 1 for the right.
A relation Z is a Δ-bisimulation when it is nonempty and every (a, b) in Z
satisfies

    Var    a and b agree on every atom;
    Zig    if some R-successors t1, t2 of a have (t1, t2) not in Z, then every
           R-successor t of a has an R-successor t' of b with (t, t') in Z;
    Zag    the mirror image from b.

Only R is consulted; R• plays no part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from core.errors import ModelFormatError, UnknownWorldError
from kripke.models import BiModel, Relation
from utils.logger import get_logger

log = get_logger(__name__)

Node = tuple[int, str]
NodePair = tuple[Node, Node]


@dataclass(frozen=True, slots=True)
class PairRelation:
    pairs: frozenset[NodePair]

    @classmethod
    def cross(cls, pairs: Iterable[tuple[str, str]]) -> "PairRelation":
        """Пары (мир левой модели, мир правой модели)."""
        return cls(frozenset(((0, a), (1, b)) for a, b in pairs))

    def cross_pairs(self) -> list[tuple[str, str]]:
        return sorted((a[1], b[1]) for a, b in self.pairs if a[0] == 0 and b[0] == 1)

    def __contains__(self, item: object) -> bool:
        return item in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def validate(self, m1: BiModel, m2: BiModel) -> None:
        models = (m1, m2)
        for pair in self.pairs:
            for side, w in pair:
                if w not in models[side].worlds:
                    raise UnknownWorldError(f"unknown world {w!r} on side {side}")


class _Union:
    def __init__(self, m1: BiModel, m2: BiModel) -> None:
        self.nodes: list[Node] = [(0, w) for w in m1.worlds] + [(1, w) for w in m2.worlds]
        self.index = {node: i for i, node in enumerate(self.nodes)}
        models = (m1, m2)
        atom_names = sorted(set(m1.valuation) | set(m2.valuation))
        # атом, не объявленный в одной из моделей, там считается ложным
        self.labels = [
            tuple(w in models[side].valuation.get(a, ()) for a in atom_names) for side, w in self.nodes
        ]
        n = len(self.nodes)
        self.succ = np.zeros((n, n), dtype=bool)
        for i, (side, w) in enumerate(self.nodes):
            for t in models[side].successors(Relation.R, w):
                self.succ[i, self.index[(side, t)]] = True

    def matrix(self, z: PairRelation) -> np.ndarray:
        n = len(self.nodes)
        zm = np.zeros((n, n), dtype=bool)
        for a, b in z.pairs:
            zm[self.index[a], self.index[b]] = True
        return zm

    def _zig(self, zm: np.ndarray, a: int, b: int) -> bool:
        sa, sb = self.succ[a], self.succ[b]
        premise = (np.outer(sa, sa) & ~zm).any()
        if not premise:
            return True
        # каждому преемнику a нужен Z-партнёр среди преемников b
        return bool((zm[sa][:, sb]).any(axis=1).all())

    def pair_ok(self, zm: np.ndarray, a: int, b: int) -> bool:
        if self.labels[a] != self.labels[b]:
            return False
        return self._zig(zm, a, b) and self._zig(zm.T, b, a)


def check_delta_bisim(m1: BiModel, m2: BiModel, z: PairRelation) -> bool:
    z.validate(m1, m2)
    if not z.pairs:
        return False
    u = _Union(m1, m2)
    zm = u.matrix(z)
    for a, b in zip(*np.nonzero(zm)):
        if not u.pair_ok(zm, int(a), int(b)):
            log.debug(f"Pair {u.nodes[a]} ~ {u.nodes[b]} fails Var/Zig/Zag")
            return False
    return True


def max_delta_bisim(m1: BiModel, m2: BiModel) -> PairRelation:
    """Наибольшая Δ-бисимуляция: от всех Var-совместимых пар, удаляя нарушителей до стабилизации."""
    u = _Union(m1, m2)
    n = len(u.nodes)
    zm = np.array([[u.labels[a] == u.labels[b] for b in range(n)] for a in range(n)], dtype=bool)
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for a, b in list(zip(*np.nonzero(zm))):
            if not u.pair_ok(zm, int(a), int(b)):
                zm[a, b] = False
                changed = True
    pairs = frozenset((u.nodes[a], u.nodes[b]) for a, b in zip(*np.nonzero(zm)))
    log.debug(f"Δ-refinement stable after {rounds} rounds, {len(pairs)} pairs")
    return PairRelation(pairs)


# ---- JSON ----

PairItem = Union[tuple[str, str], tuple[tuple[int, str], tuple[int, str]]]


class PairDocument(BaseModel):
    pairs: list[PairItem]


def pairs_from_dict(data: object, source: str = "") -> PairRelation:
    try:
        doc = PairDocument.model_validate(data)
    except ValidationError as e:
        raise ModelFormatError(f"{source + ': ' if source else ''}malformed pair relation: {e.errors()[0]['msg']}") from None
    out: set[NodePair] = set()
    for item in doc.pairs:
        left, right = item
        if isinstance(left, str):
            out.add(((0, left), (1, right)))  # type: ignore[arg-type]
        else:
            out.add(((int(left[0]), left[1]), (int(right[0]), right[1])))  # type: ignore[index]
    return PairRelation(frozenset(out))


def load_pairs_file(path: Path) -> PairRelation:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8-sig"))
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"{path}: malformed document: {e}") from None
    return pairs_from_dict(data, str(path))


def dump_pairs(z: PairRelation, cross_only: bool = True) -> dict[str, list]:
    if cross_only:
        return {"pairs": [list(p) for p in z.cross_pairs()]}
    items: Sequence[NodePair] = sorted(z.pairs)
    return {"pairs": [[list(a), list(b)] for a, b in items]}
