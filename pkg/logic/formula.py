"""AST of the language of ignorance (I), Rumsfeld ignorance (IR), knowledge (K) and Kw sugar.

Formulas are frozen dataclasses: structural equality, hashable, safe to share
between processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from core.errors import FormulaSyntaxError
from utils.validators import validate_atom_name


class Formula:
    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __post_init__(self) -> None:
        ok, err = validate_atom_name(self.name)
        if not ok:
            raise FormulaSyntaxError(err, 0, self.name)


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Meta(Formula):
    """Метапеременная схемы аксиом (phi, psi, chi). Парсер её не порождает."""

    name: str


@dataclass(frozen=True, slots=True)
class Unary(Formula):
    sub: Formula

    def children(self) -> tuple[Formula, ...]:
        return (self.sub,)


@dataclass(frozen=True, slots=True)
class Binary(Formula):
    left: Formula
    right: Formula

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Not(Unary):
    pass


@dataclass(frozen=True, slots=True)
class Ig(Unary):
    pass


@dataclass(frozen=True, slots=True)
class RIg(Unary):
    pass


@dataclass(frozen=True, slots=True)
class Box(Unary):
    pass


@dataclass(frozen=True, slots=True)
class Kw(Unary):
    pass


@dataclass(frozen=True, slots=True)
class And(Binary):
    pass


@dataclass(frozen=True, slots=True)
class Or(Binary):
    pass


@dataclass(frozen=True, slots=True)
class Implies(Binary):
    pass


@dataclass(frozen=True, slots=True)
class Iff(Binary):
    pass


TOP = Not(Bottom())
MODAL_HEADS = (Ig, RIg, Box)


def rebuild(f: Formula, children: tuple[Formula, ...]) -> Formula:
    if isinstance(f, Unary):
        return type(f)(children[0])
    if isinstance(f, Binary):
        return type(f)(children[0], children[1])
    return f


def desugar(f: Formula) -> Formula:
    if isinstance(f, Kw):
        return Not(Ig(desugar(f.sub)))
    kids = f.children()
    if not kids:
        return f
    new = tuple(desugar(k) for k in kids)
    if new == kids:
        return f
    return rebuild(f, new)


def is_desugared(f: Formula) -> bool:
    return not any(isinstance(g, Kw) for g in walk(f))


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order обход."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def atoms(f: Formula) -> list[str]:
    return sorted({g.name for g in walk(f) if isinstance(g, Atom)})


def subformulas(f: Formula) -> list[Formula]:
    """Уникальные подформулы в post-order: каждая идёт после своих детей."""
    seen: set[Formula] = set()
    out: list[Formula] = []

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for k in g.children():
            visit(k)
        seen.add(g)
        out.append(g)

    visit(f)
    return out


def conj(*parts: Formula) -> Formula:
    """Left-associated conjunction chain; empty chain is true."""
    if not parts:
        return TOP
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def disj(*parts: Formula) -> Formula:
    if not parts:
        return Bottom()
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


def flatten_and(f: Formula) -> list[Formula]:
    """Разворачивает вложенные And в плоский список; Not/Ig и прочие головы не раскрываются."""
    if isinstance(f, And):
        return flatten_and(f.left) + flatten_and(f.right)
    return [f]


def substitute(f: Formula, sigma: Mapping[str, Formula]) -> Formula:
    if isinstance(f, Meta):
        return sigma[f.name]
    kids = f.children()
    if not kids:
        return f
    return rebuild(f, tuple(substitute(k, sigma) for k in kids))


def iterate(op: type[Unary], f: Formula, n: int) -> Formula:
    for _ in range(n):
        f = op(f)
    return f
