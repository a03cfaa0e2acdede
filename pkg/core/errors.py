# -*- coding: utf-8 -*-
"""Исключения iri. Все наследуют ValueError, чтобы вызывающий код мог ловить их как обычно."""

from __future__ import annotations


class IriError(ValueError):
    pass


class FormulaSyntaxError(IriError):
    def __init__(self, message: str, offset: int, text: str = "") -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class ModelFormatError(IriError):
    pass


class UnknownWorldError(ModelFormatError):
    pass


class UndeclaredAtomError(IriError):
    def __init__(self, atom: str) -> None:
        super().__init__(f"undeclared atom: {atom}")
        self.atom = atom


class BoundError(IriError):
    pass


class TautologyLimitError(IriError):
    pass


class DerivationFormatError(IriError):
    pass


class ManifestError(IriError):
    pass


class UnknownOperationError(ManifestError):
    def __init__(self, op: str) -> None:
        super().__init__(f"unknown operation: {op}")
        self.op = op
