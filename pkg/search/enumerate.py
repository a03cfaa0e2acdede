"""Enumeration of bi-frames and bi-models within a frame class.

Order: number of worlds ascending, then frame index, then valuation index.
For n worlds the ordered pairs (i, j) are taken row-major; each pair holds one
of the joint states (r, r•) in [(0,0), (0,1), (1,0), (1,1)], restricted at the
generator by the inclusion constraint and by reflexivity on the diagonal. A
frame index is the mixed-radix number of the per-pair state choices with the
first pair most significant, so any index range can be decoded on its own.
Transitivity, seriality, symmetry and euclideanness are filtered afterwards.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from kripke.frames import PROPERTY_CHECKS, inclusion_holds
from kripke.models import BiModel, FrameClass, FrameProperty, Inclusion
from semantics.batch import valuation_count, valuation_from_index
from search.models import SearchBound

_STATES = ((0, 0), (0, 1), (1, 0), (1, 1))

_ALLOWED = {
    Inclusion.NONE: _STATES,
    Inclusion.R_SUB_RBULLET: ((0, 0), (0, 1), (1, 1)),
    Inclusion.RBULLET_SUB_R: ((0, 0), (1, 0), (1, 1)),
    Inclusion.EQUAL: ((0, 0), (1, 1)),
}


def world_names(n: int) -> tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n))


@dataclass(frozen=True)
class FrameLayout:
    n: int
    pairs: tuple[tuple[int, int], ...]
    states: tuple[np.ndarray, ...]  # на каждую пару: массив (k, 2) допустимых состояний
    radices: tuple[int, ...]

    @property
    def count(self) -> int:
        return math.prod(self.radices)


@lru_cache(maxsize=64)
def frame_layout(n: int, c: FrameClass) -> FrameLayout:
    pairs = tuple((i, j) for i in range(n) for j in range(n))
    base = _ALLOWED[c.inclusion]
    states = []
    for i, j in pairs:
        allowed = base
        if i == j:
            if FrameProperty.REFLEXIVE in c.r_props:
                allowed = tuple(s for s in allowed if s[0] == 1)
            if FrameProperty.REFLEXIVE in c.rbullet_props:
                allowed = tuple(s for s in allowed if s[1] == 1)
        states.append(np.array(allowed, dtype=bool).reshape(-1, 2))
    return FrameLayout(n, pairs, tuple(states), tuple(len(s) for s in states))


def frame_count(n: int, c: FrameClass) -> int:
    """Число кандидатов-фреймов до пост-фильтров."""
    return frame_layout(n, c).count


def decode_frames(n: int, c: FrameClass, start: int, stop: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Фреймы с индексами [start, stop), прошедшие все ограничения класса.

    Возвращает (indices, r, rb): глобальные индексы выживших и их матрицы (F, n, n).
    """
    layout = frame_layout(n, c)
    idx = np.arange(start, min(stop, layout.count), dtype=np.int64)
    rest = idx.copy()
    r = np.zeros((idx.size, n, n), dtype=bool)
    rb = np.zeros((idx.size, n, n), dtype=bool)
    for p in range(len(layout.pairs) - 1, -1, -1):
        radix = layout.radices[p]
        digit = rest % radix
        rest //= radix
        i, j = layout.pairs[p]
        chosen = layout.states[p][digit]
        r[:, i, j] = chosen[:, 0]
        rb[:, i, j] = chosen[:, 1]

    keep = inclusion_holds(r, rb, c.inclusion)
    for prop in c.r_props:
        if prop is not FrameProperty.REFLEXIVE:
            keep &= PROPERTY_CHECKS[prop](r)
    for prop in c.rbullet_props:
        if prop is not FrameProperty.REFLEXIVE:
            keep &= PROPERTY_CHECKS[prop](rb)
    return idx[keep], r[keep], rb[keep]


# ---- isomorphism reduction ----


def canonical_mask(r: np.ndarray, rb: np.ndarray, k: int) -> np.ndarray:
    """(F, V) маска: модель (фрейм f, валюация v) минимальна в своём классе изоморфизма.

    Ключ модели: биты (r, r•) по парам row-major, затем биты валюации.
    Ровно один член каждого класса имеет наименьший ключ.
    """
    f_count, n = r.shape[0], r.shape[-1]
    v_bits = n * k
    if 2 * n * n + v_bits > 62:
        raise ValueError("isomorphism reduction supports at most 62 key bits")
    v = np.arange(1 << v_bits, dtype=np.int64)
    frame_weights = (np.int64(1) << np.arange(2 * n * n, dtype=np.int64)[::-1]).reshape(n, n, 2)

    def frame_key(rr: np.ndarray, bb: np.ndarray) -> np.ndarray:
        stacked = np.stack([rr, bb], axis=-1).astype(np.int64)
        return (stacked * frame_weights).sum(axis=(1, 2, 3))

    def val_key(perm: tuple[int, ...]) -> np.ndarray:
        out = np.zeros_like(v)
        for a in range(k):
            for i in range(n):
                bit = (v >> (a * n + perm[i])) & 1
                out |= bit << (a * n + i)
        return out

    own = frame_key(r, rb)[:, None] * np.int64(1 << v_bits) + v[None, :]
    best = own.copy()
    for perm in itertools.permutations(range(n)):
        if perm == tuple(range(n)):
            continue
        p = list(perm)
        rr = r[:, p][:, :, p]
        bb = rb[:, p][:, :, p]
        key = frame_key(rr, bb)[:, None] * np.int64(1 << v_bits) + val_key(perm)[None, :]
        np.minimum(best, key, out=best)
    return own == best


# ---- model streams ----


def build_model(n: int, r: np.ndarray, rb: np.ndarray, atoms: tuple[str, ...], v: int) -> BiModel:
    names = world_names(n)
    pairs_r = [(names[i], names[j]) for i, j in zip(*np.nonzero(r))]
    pairs_rb = [(names[i], names[j]) for i, j in zip(*np.nonzero(rb))]
    return BiModel.build(names, pairs_r, pairs_rb, valuation_from_index(names, atoms, v))


def enumerate_bimodels(bound: SearchBound, c: FrameClass, chunk: int = 4096) -> Iterator[BiModel]:
    for n in range(1, bound.max_worlds + 1):
        total = frame_count(n, c)
        for start in range(0, total, chunk):
            _, r, rb = decode_frames(n, c, start, start + chunk)
            if not len(r):
                continue
            vals = valuation_count(n, len(bound.atoms))
            mask = canonical_mask(r, rb, len(bound.atoms)) if bound.isomorphism_reduction else None
            for f in range(len(r)):
                for v in range(vals):
                    if mask is not None and not mask[f, v]:
                        continue
                    yield build_model(n, r[f], rb[f], bound.atoms, v)


def count_bimodels(bound: SearchBound, c: FrameClass, chunk: int = 4096) -> int:
    total_models = 0
    for n in range(1, bound.max_worlds + 1):
        vals = valuation_count(n, len(bound.atoms))
        for start in range(0, frame_count(n, c), chunk):
            _, r, rb = decode_frames(n, c, start, start + chunk)
            if bound.isomorphism_reduction and len(r):
                total_models += int(canonical_mask(r, rb, len(bound.atoms)).sum())
            else:
                total_models += len(r) * vals
    return total_models


def candidate_estimate(bound: SearchBound, c: FrameClass) -> int:
    """Верхняя оценка числа моделей до пост-фильтров (для предупреждения о больших переборах)."""
    return sum(frame_count(n, c) * valuation_count(n, len(bound.atoms)) for n in range(1, bound.max_worlds + 1))
