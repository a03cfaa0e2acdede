"""Concrete syntax.

Grammar (loosest to tightest):

    formula := iff
    iff     := imp ("<->" iff)?
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := ("~" | "I" | "IR" | "K" | "Kw") unary | atom | "false" | "true" | "(" formula ")"

Keywords are matched longest-first, so "IR p" is Rumsfeld ignorance and
"I I p" is second-order ignorance. Atoms match [a-z][a-zA-Z0-9_]*.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from core.errors import FormulaSyntaxError
from logic.formula import (
    And,
    Atom,
    Binary,
    Bottom,
    Box,
    Formula,
    Iff,
    Ig,
    Implies,
    Kw,
    Meta,
    Not,
    Or,
    RIg,
    Unary,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sym><->|->|~|&|\||\(|\))
  | (?P<kw>IR|Kw|I|K)
  | (?P<word>[a-z][a-zA-Z0-9_]*)
    """,
    re.VERBOSE,
)

_UNARY = {"~": Not, "I": Ig, "IR": RIg, "K": Box, "Kw": Kw}


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # sym | kw | atom | const | end
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unknown token {text[pos]!r}", pos, text)
        kind = m.lastgroup or ""
        value = m.group()
        if kind == "word":
            kind = "const" if value in ("true", "false") else "atom"
        if kind != "ws":
            out.append(Token(kind, value, pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def _accept(self, sym: str) -> bool:
        t = self.cur
        if t.kind == "sym" and t.text == sym:
            self.i += 1
            return True
        return False

    def _fail(self, t: Token) -> FormulaSyntaxError:
        if t.kind == "end":
            return FormulaSyntaxError("unexpected end of input", t.offset, self.text)
        return FormulaSyntaxError(f"unexpected {t.text!r}", t.offset, self.text)

    def parse(self) -> Formula:
        f = self.iff()
        if self.cur.kind != "end":
            raise self._fail(self.cur)
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self._accept("<->"):
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self._accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        acc = self.conj()
        while self._accept("|"):
            acc = Or(acc, self.conj())
        return acc

    def conj(self) -> Formula:
        acc = self.unary()
        while self._accept("&"):
            acc = And(acc, self.unary())
        return acc

    def unary(self) -> Formula:
        t = self.cur
        if t.kind in ("kw", "sym") and t.text in _UNARY:
            self.i += 1
            return _UNARY[t.text](self.unary())
        if t.kind == "atom":
            self.i += 1
            return Atom(t.text)
        if t.kind == "const":
            self.i += 1
            return Bottom() if t.text == "false" else Not(Bottom())
        if self._accept("("):
            inner = self.iff()
            if not self._accept(")"):
                raise self._fail(self.cur)
            return inner
        raise self._fail(t)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


# ---- render ----

_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = range(1, 7)

_BINARY = {
    Iff: (" <-> ", _PREC_IFF, _PREC_IMP, _PREC_IFF),
    Implies: (" -> ", _PREC_IMP, _PREC_OR, _PREC_IMP),
    Or: (" | ", _PREC_OR, _PREC_OR, _PREC_AND),
    And: (" & ", _PREC_AND, _PREC_AND, _PREC_UNARY),
}
_PREFIX = {Not: "~", Ig: "I ", RIg: "IR ", Box: "K ", Kw: "Kw "}
_META = {"phi": "φ", "psi": "ψ", "chi": "χ"}


def _prec(f: Formula) -> int:
    if isinstance(f, Binary):
        return _BINARY[type(f)][1]
    if isinstance(f, Unary) and f != Not(Bottom()):
        return _PREC_UNARY
    return _PREC_ATOM


def _render(f: Formula, need: int) -> str:
    s = _render_bare(f)
    return f"({s})" if _prec(f) < need else s


def _render_bare(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Meta):
        return _META.get(f.name, f.name)
    if f == Not(Bottom()):
        return "true"
    if isinstance(f, Unary):
        return _PREFIX[type(f)] + _render(f.sub, _PREC_UNARY)
    if isinstance(f, Binary):
        op, _, left_need, right_need = _BINARY[type(f)]
        return _render(f.left, left_need) + op + _render(f.right, right_need)
    raise TypeError(f"not a formula: {f!r}")


def render(f: Formula) -> str:
    return _render_bare(f)
