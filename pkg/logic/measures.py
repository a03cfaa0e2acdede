"""Size S, IR-depth d and the well-founded order <^S_d used for induction on formulas."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from logic.formula import Atom, Binary, Bottom, Formula, Kw, Meta, RIg, Unary


@dataclass(frozen=True, slots=True)
class Measure:
    size: int
    ir_depth: int

    def __post_init__(self) -> None:
        if self.size < 1 or self.ir_depth < 0:
            raise ValueError(f"invalid measure: size={self.size} ir_depth={self.ir_depth}")

    def key(self) -> tuple[int, int]:
        return (self.ir_depth, self.size)


@lru_cache(maxsize=65536)
def measure(f: Formula) -> Measure:
    if isinstance(f, Kw):
        raise ValueError("measure expects a desugared formula")
    if isinstance(f, (Atom, Bottom, Meta)):
        return Measure(1, 0)
    if isinstance(f, Unary):
        m = measure(f.sub)
        # Box и I прозрачны для глубины, IR добавляет уровень
        return Measure(1 + m.size, m.ir_depth + (1 if isinstance(f, RIg) else 0))
    if isinstance(f, Binary):
        a, b = measure(f.left), measure(f.right)
        return Measure(a.size + b.size + 1, max(a.ir_depth, b.ir_depth))
    raise TypeError(f"not a formula: {f!r}")


def size(f: Formula) -> int:
    return measure(f).size


def ir_depth(f: Formula) -> int:
    return measure(f).ir_depth


def order_lt(a: Formula, b: Formula) -> bool:
    return measure(a).key() < measure(b).key()
