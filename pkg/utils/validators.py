# -*- coding: utf-8 -*-
"""Валидаторы входных данных (модели, пары, имена)."""
import re
from typing import Iterable, Sequence

_ATOM_RE = re.compile(r"^[a-z][a-zA-Z0-9_]*$")


def validate_atom_name(name: str) -> tuple[bool, str]:
    """Имя атома: [a-z][a-zA-Z0-9_]*, кроме true/false."""
    if not name or not _ATOM_RE.match(name):
        return False, f"invalid atom name: {name!r}"
    if name in ("true", "false"):
        return False, f"reserved word used as atom: {name!r}"
    return True, ""


def validate_world_list(worlds: Sequence[str]) -> tuple[bool, str]:
    if not worlds:
        return False, "empty world list"
    seen: set[str] = set()
    for w in worlds:
        if not isinstance(w, str) or not w:
            return False, f"invalid world name: {w!r}"
        if w in seen:
            return False, f"duplicate world: {w!r}"
        seen.add(w)
    return True, ""


def validate_pairs(pairs: Iterable[Sequence[str]], worlds: Iterable[str], label: str) -> tuple[bool, str]:
    """Пары [from, to]: только объявленные миры, без дублей."""
    known = set(worlds)
    seen: set[tuple[str, str]] = set()
    for pair in pairs:
        a, b = pair[0], pair[1]
        for w in (a, b):
            if w not in known:
                return False, f"unknown world {w!r} in {label} pair [{a!r}, {b!r}]"
        if (a, b) in seen:
            return False, f"duplicate {label} pair [{a!r}, {b!r}]"
        seen.add((a, b))
    return True, ""
