# -*- coding: utf-8 -*-
"""
Быстрый smoke-check: разбор, вычисление, короткий поиск и один вывод.
Печатает ✅/❌ на каждую проверку, код выхода 0/1.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, List, Optional

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT))

from config.settings import load_settings  # noqa: E402
from kripke.loader import load_model_file  # noqa: E402
from kripke.models import FrameClass  # noqa: E402
from logic.parser import parse, render  # noqa: E402
from proofs.derivation import check_derivation, load_derivation_file  # noqa: E402
from search.engine import find_countermodel  # noqa: E402
from search.models import SearchBound  # noqa: E402
from semantics.evaluator import PointedModel, evaluate  # noqa: E402
from utils.logger import configure_logging  # noqa: E402


@dataclass
class CheckResult:
    ok: bool
    elapsed_ms: int
    error: Optional[str]
    data: Optional[Any]


def _now_ms() -> int:
    return int(time.time() * 1000)


def _run(fn: Callable[[], Any], expect: Any) -> CheckResult:
    t0 = _now_ms()
    try:
        data = fn()
    except Exception as e:
        return CheckResult(ok=False, elapsed_ms=_now_ms() - t0, error=f"{type(e).__name__}: {e}", data=None)
    ok = data == expect
    err = None if ok else f"expected {expect!r}, got {data!r}"
    return CheckResult(ok=ok, elapsed_ms=_now_ms() - t0, error=err, data=data)


def _print_check(name: str, res: CheckResult) -> None:
    if res.ok:
        print(f"✅ {name} ({res.elapsed_ms} ms)")
    else:
        print(f"❌ {name} ({res.elapsed_ms} ms)")
        if res.error:
            print(f"   ↳ {res.error}")


def run_once(corpus: Path) -> bool:
    def _eval() -> bool:
        m = load_model_file(corpus / "models" / "prop3i.json")
        return evaluate(PointedModel(m, "s"), parse("IR p"))

    def _search() -> str:
        v = find_countermodel(parse("p -> I p"), FrameClass.parse("proper"), SearchBound(2, ("p",)))
        return v.kind

    def _proof() -> bool:
        return check_derivation(load_derivation_file(corpus / "derivations" / "prop5_1.drv")).accepted

    checks: List[tuple[str, Callable[[], Any], Any]] = [
        ("parse/render", lambda: render(parse("I p & ~(IR q | p)")), "I p & ~(IR q | p)"),
        ("eval prop3i s IR p", _eval, True),
        ("search p -> I p over proper", _search, "countermodel"),
        ("check prop5_1.drv", _proof, True),
    ]

    overall_ok = True
    for name, fn, expect in checks:
        res = _run(fn, expect)
        _print_check(name, res)
        overall_ok = overall_ok and res.ok
    return overall_ok


def main() -> int:
    configure_logging(load_settings().logs_dir, "WARNING")
    p = argparse.ArgumentParser(description="iri smoke-check.")
    p.add_argument("--corpus", default=str(ROOT / "corpus"), help="Corpus directory")
    args = p.parse_args()

    corpus = Path(args.corpus)
    if not corpus.exists():
        print(f"ERROR: corpus not found: {corpus}", file=sys.stderr)
        return 2

    if not run_once(corpus):
        print("\nRESULT: ❌ NOT OK")
        return 1

    print("\nRESULT: ✅ OK")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
