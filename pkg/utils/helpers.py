# -*- coding: utf-8 -*-
"""Вспомогательные функции и утилиты."""
import json
from pathlib import Path
from typing import Any


def load_json(file_path: Path) -> Any:
    """Загружает JSON файл (BOM допускается)."""
    with open(file_path, "r", encoding="utf-8-sig") as f:
        return json.load(f)


def dump_json(data: Any) -> str:
    """Детерминированный JSON для stdout (--json)."""
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True)


def split_csv(value: str | None) -> list[str]:
    """'p, q,,r' -> ['p', 'q', 'r']"""
    return [p.strip() for p in (value or "").split(",") if p.strip()]
