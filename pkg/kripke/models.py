# -*- coding: utf-8 -*-
"""Би-модели и классы би-фреймов."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from core.errors import BoundError, ModelFormatError, UnknownWorldError

Pair = tuple[str, str]


class Relation(str, Enum):
    R = "r"
    RBULLET = "rbullet"


class RelationSelector(str, Enum):
    R = "r"
    RBULLET = "rbullet"
    BOTH = "both"

    def relations(self) -> tuple[Relation, ...]:
        if self is RelationSelector.BOTH:
            return (Relation.R, Relation.RBULLET)
        return (Relation(self.value),)


class FrameProperty(str, Enum):
    REFLEXIVE = "reflexive"
    TRANSITIVE = "transitive"
    SERIAL = "serial"
    SYMMETRIC = "symmetric"
    EUCLIDEAN = "euclidean"


class Inclusion(str, Enum):
    NONE = "none"
    R_SUB_RBULLET = "r_sub_rbullet"
    RBULLET_SUB_R = "rbullet_sub_r"
    EQUAL = "equal"


@dataclass(frozen=True, slots=True)
class BiModel:
    worlds: tuple[str, ...]
    r: frozenset[Pair]
    rbullet: frozenset[Pair]
    valuation: Mapping[str, frozenset[str]] = field(hash=False)
    comment: str = field(default="", compare=False)
    _succ: dict = field(init=False, repr=False, compare=False, hash=False)
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not self.worlds:
            raise ModelFormatError("empty world list")
        if len(set(self.worlds)) != len(self.worlds):
            raise ModelFormatError("duplicate world name")
        known = set(self.worlds)
        for rel_name, rel in (("r", self.r), ("rbullet", self.rbullet)):
            for a, b in rel:
                for w in (a, b):
                    if w not in known:
                        raise UnknownWorldError(f"unknown world {w!r} in {rel_name} pair [{a!r}, {b!r}]")
        for atom, ws in self.valuation.items():
            for w in ws:
                if w not in known:
                    raise UnknownWorldError(f"unknown world {w!r} in valuation of {atom!r}")

        succ: dict[Relation, dict[str, tuple[str, ...]]] = {}
        for rel in Relation:
            pairs = self.relation(rel)
            # порядок преемников следует порядку миров, чтобы печать была детерминированной
            succ[rel] = {w: tuple(t for t in self.worlds if (w, t) in pairs) for w in self.worlds}
        object.__setattr__(self, "_succ", succ)
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.worlds)})

    @classmethod
    def build(
        cls,
        worlds: Iterable[str],
        r: Iterable[Pair] = (),
        rbullet: Iterable[Pair] = (),
        valuation: Mapping[str, Iterable[str]] | None = None,
        comment: str = "",
    ) -> "BiModel":
        return cls(
            worlds=tuple(worlds),
            r=frozenset((a, b) for a, b in r),
            rbullet=frozenset((a, b) for a, b in rbullet),
            valuation={k: frozenset(v) for k, v in sorted((valuation or {}).items())},
            comment=comment,
        )

    @property
    def atoms(self) -> list[str]:
        return sorted(self.valuation)

    @property
    def size(self) -> int:
        return len(self.worlds)

    def relation(self, rel: Relation) -> frozenset[Pair]:
        return self.r if Relation(rel) is Relation.R else self.rbullet

    def successors(self, rel: Relation, w: str) -> tuple[str, ...]:
        return self._succ[Relation(rel)][w]

    def index(self, w: str) -> int:
        try:
            return self._index[w]
        except KeyError:
            raise UnknownWorldError(f"unknown world {w!r}") from None

    def holds(self, atom: str, w: str) -> bool:
        return w in self.valuation[atom]

    def matrix(self, rel: Relation) -> np.ndarray:
        n = len(self.worlds)
        a = np.zeros((n, n), dtype=bool)
        for s, t in self.relation(rel):
            a[self._index[s], self._index[t]] = True
        return a

    def replace(
        self,
        r: Iterable[Pair] | None = None,
        rbullet: Iterable[Pair] | None = None,
        comment: str | None = None,
    ) -> "BiModel":
        return BiModel.build(
            self.worlds,
            self.r if r is None else r,
            self.rbullet if rbullet is None else rbullet,
            self.valuation,
            self.comment if comment is None else comment,
        )

    def with_relation(self, rel: Relation, pairs: Iterable[Pair]) -> "BiModel":
        if Relation(rel) is Relation.R:
            return self.replace(r=pairs)
        return self.replace(rbullet=pairs)

    def sorted_pairs(self, rel: Relation) -> list[list[str]]:
        idx = self._index
        return [[a, b] for a, b in sorted(self.relation(rel), key=lambda p: (idx[p[0]], idx[p[1]]))]


# ---- frame classes ----

_PRESETS: dict[str, tuple[frozenset[FrameProperty], frozenset[FrameProperty], Inclusion]] = {}


def _props(*names: str) -> frozenset[FrameProperty]:
    return frozenset(FrameProperty(n) for n in names)


_PRESETS.update(
    {
        "all": (_props(), _props(), Inclusion.NONE),
        "proper": (_props(), _props(), Inclusion.R_SUB_RBULLET),
        "bullet-sub": (_props(), _props(), Inclusion.RBULLET_SUB_R),
        "equal": (_props(), _props(), Inclusion.EQUAL),
        "serial-proper": (_props("serial"), _props("serial"), Inclusion.R_SUB_RBULLET),
        "reflexive-proper": (_props("reflexive"), _props("reflexive"), Inclusion.R_SUB_RBULLET),
        "t-proper": (_props("reflexive"), _props(), Inclusion.R_SUB_RBULLET),
        "s4": (_props("reflexive", "transitive"), _props("reflexive", "transitive"), Inclusion.NONE),
        "s4-proper": (_props("reflexive", "transitive"), _props("reflexive", "transitive"), Inclusion.R_SUB_RBULLET),
    }
)

_INCLUSION_ALIASES = {
    "none": Inclusion.NONE,
    "r_sub_rbullet": Inclusion.R_SUB_RBULLET,
    "rbullet_sub_r": Inclusion.RBULLET_SUB_R,
    "equal": Inclusion.EQUAL,
}


@dataclass(frozen=True, slots=True)
class FrameClass:
    """Конъюнкция ограничений: свойства R, свойства R• и включение между ними."""

    r_props: frozenset[FrameProperty] = frozenset()
    rbullet_props: frozenset[FrameProperty] = frozenset()
    inclusion: Inclusion = Inclusion.NONE

    @classmethod
    def parse(cls, spec: str) -> "FrameClass":
        """Разбирает строку вида 'proper,transitive-r'.

        Атомы: пресеты (all, proper, bullet-sub, equal, s4-proper, ...),
        <prop>-r, <prop>-rb, <prop>-both и имена включений (r_sub_rbullet, ...).
        """
        r_props: set[FrameProperty] = set()
        rb_props: set[FrameProperty] = set()
        inclusion = Inclusion.NONE
        parts = [p.strip().lower() for p in (spec or "").split(",") if p.strip()]
        if not parts:
            raise BoundError("empty frame class")
        for part in parts:
            if part in _PRESETS:
                rp, bp, inc = _PRESETS[part]
                r_props |= rp
                rb_props |= bp
            elif part in _INCLUSION_ALIASES:
                rp, bp, inc = frozenset(), frozenset(), _INCLUSION_ALIASES[part]
            else:
                name, _, which = part.rpartition("-")
                try:
                    prop = FrameProperty(name)
                except ValueError:
                    raise BoundError(f"unknown frame class atom: {part!r}") from None
                if which == "r":
                    r_props.add(prop)
                elif which == "rb":
                    rb_props.add(prop)
                elif which == "both":
                    r_props.add(prop)
                    rb_props.add(prop)
                else:
                    raise BoundError(f"unknown frame class atom: {part!r}")
                continue
            if inc is not Inclusion.NONE:
                if inclusion not in (Inclusion.NONE, inc):
                    raise BoundError(f"conflicting inclusion constraints in {spec!r}")
                inclusion = inc
        return cls(frozenset(r_props), frozenset(rb_props), inclusion)

    def label(self) -> str:
        bits = [self.inclusion.value]
        bits += [f"{p.value}-r" for p in sorted(self.r_props, key=lambda p: p.value)]
        bits += [f"{p.value}-rb" for p in sorted(self.rbullet_props, key=lambda p: p.value)]
        return ",".join(bits)

    def props(self, rel: Relation) -> frozenset[FrameProperty]:
        return self.r_props if Relation(rel) is Relation.R else self.rbullet_props

    @property
    def is_proper(self) -> bool:
        return self.inclusion in (Inclusion.R_SUB_RBULLET, Inclusion.EQUAL)


ALL = FrameClass()
PROPER = FrameClass.parse("proper")
S4_PROPER = FrameClass.parse("s4-proper")
