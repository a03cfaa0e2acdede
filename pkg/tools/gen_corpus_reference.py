# -*- coding: utf-8 -*-
"""
Генератор docs/CORPUS_REFERENCE.md из файлов corpus/.
Детерминированный вывод (без timestamp) для стабильных коммитов.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import List

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from claims.loader import CorpusIndex  # noqa: E402
from claims.manifest import load_manifest  # noqa: E402
from kripke.frames import frame_report  # noqa: E402
from logic.parser import render  # noqa: E402

CORPUS = ROOT / "corpus"
OUT = ROOT / "docs" / "CORPUS_REFERENCE.md"


def _md_escape_cell(text: str) -> str:
    # Чтобы не ломать таблицу
    return (text or "").replace("|", "\\|").replace("\n", " ")


def _held(flags: dict) -> str:
    on = [k for k, v in flags.items() if v]
    return ", ".join(on) if on else "—"


def _models_section(index: CorpusIndex) -> List[str]:
    lines = [
        "## Модели",
        "",
        "| Файл | Миры | R | R• | Вложение |",
        "|---|---|---|---|---|",
    ]
    for e in index.entries("models"):
        m = index.model(e.relative(CORPUS))
        rep = frame_report(m)
        lines.append(
            "| `{}` | {} | {} | {} | {} |".format(
                e.relative(CORPUS),
                _md_escape_cell(" ".join(m.worlds)),
                _held(rep["r"]),
                _held(rep["rbullet"]),
                _held(rep["inclusion"]),
            )
        )
    return lines + [""]


def _derivations_section(index: CorpusIndex) -> List[str]:
    lines = ["## Выводы", "", "| Файл | Система | Шагов | Теорема |", "|---|---|---:|---|"]
    for e in index.entries("derivations"):
        d = index.derivation(e.relative(CORPUS))
        lines.append(
            f"| `{e.relative(CORPUS)}` | {d.system} | {len(d.steps)} | `{_md_escape_cell(render(d.theorem))}` |"
        )
    return lines + [""]


def _manifests_section(index: CorpusIndex) -> List[str]:
    lines = ["## Манифесты", ""]
    for e in index.manifests():
        doc = load_manifest(e.path)
        lines.append(f"### `{e.relative(CORPUS)}`")
        lines.append("")
        if doc.comment:
            lines.append(doc.comment)
            lines.append("")
        lines.append("| op | tag | anchor | expect |")
        lines.append("|---|---|---|---|")
        for c in doc.claims:
            lines.append(
                "| `{}` | {} | {} | `{}` |".format(
                    c.op, c.tag, _md_escape_cell(c.anchor), _md_escape_cell(repr(c.expect))
                )
            )
        lines.append("")
    return lines


def main() -> int:
    if not CORPUS.exists():
        raise SystemExit(f"Corpus dir not found: {CORPUS}")
    index = CorpusIndex(CORPUS)

    # ДЕТЕРМИНИРОВАННЫЙ ВЫВОД: никакой даты/времени/случайностей
    lines: List[str] = [
        "# Справочник по корпусу",
        "",
        "Этот файл генерируется скриптом `tools/gen_corpus_reference.py` из папки `corpus/`.",
        "",
    ]
    lines += _models_section(index)
    lines += _derivations_section(index)
    lines += _manifests_section(index)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines), encoding="utf-8")

    print(f"OK: wrote {OUT} ({OUT.stat().st_size} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
