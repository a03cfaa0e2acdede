from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Optional

from pydantic import ValidationError

from bisim.delta import check_delta_bisim, dump_pairs, load_pairs_file, max_delta_bisim
from bisim.distinguish import Language, distinguishing_formula
from claims.loader import CorpusIndex
from claims.manifest import replicate
from config.settings import Settings, load_settings
from core.errors import BoundError, IriError
from kripke.frames import frame_report, reflexive_closure, reflexivize_endpoints, transitive_closure
from kripke.loader import dump_model, load_model_file, model_to_json
from kripke.models import BiModel, FrameClass, RelationSelector
from logic.formula import Formula, atoms, desugar
from logic.measures import measure
from logic.parser import parse, render
from proofs.derivation import check_derivation, load_derivation_file
from search.engine import bounded_equivalent, find_countermodel, rule_preservation_probe
from search.enumerate import candidate_estimate
from search.models import Countermodel, SearchBound, Verdict
from semantics.evaluator import PointedModel, evaluate, evaluate_standard, satisfying_worlds
from utils.helpers import dump_json, split_csv
from utils.logger import configure_logging, get_logger

log = get_logger("main")

EXIT_OK, EXIT_FOUND, EXIT_ERROR = 0, 1, 2

_CLOSURES = {
    "reflexive": reflexive_closure,
    "transitive": transitive_closure,
    "endpoints": reflexivize_endpoints,
}


def _out(text: str) -> None:
    sys.stdout.write(text.rstrip("\n") + "\n")


def _resolve(path: str, settings: Settings) -> Path:
    """Относительный путь ищем сначала от cwd, потом от корня корпуса."""
    p = Path(path)
    if p.is_absolute() or p.exists():
        return p
    alt = settings.corpus_dir / p
    return alt if alt.exists() else p


def _model(path: Optional[str], settings: Settings, flag: str = "-m/--model") -> BiModel:
    if not path:
        raise BoundError(f"{flag} is required")
    return load_model_file(_resolve(path, settings))


def _formula(text: Optional[str], flag: str = "-f/--formula") -> Formula:
    if text is None:
        raise BoundError(f"{flag} is required")
    return parse(text)


def _bound(args: argparse.Namespace, *formulas: Formula) -> SearchBound:
    names = split_csv(args.atoms)
    if not names:
        names = sorted({a for f in formulas for a in atoms(desugar(f))})
    return SearchBound(args.max_worlds, tuple(names), args.iso)


def _warn_if_large(bound: SearchBound, c: FrameClass, settings: Settings) -> None:
    est = candidate_estimate(bound, c)
    if est > settings.sweep_warn_limit:
        log.warning(
            f"Full sweep may visit up to {est:,} models (limit {settings.sweep_warn_limit:,}); "
            "an early countermodel ends it sooner"
        )


def _print_verdict(v: Verdict, as_json: bool) -> int:
    if as_json:
        _out(dump_json(v.to_dict()))
    elif isinstance(v, Countermodel):
        _out(f"countermodel at {v.world}")
        _out(model_to_json(v.model))
    else:
        _out(f"no countermodel up to {v.max_worlds} worlds ({v.models_checked} models checked)")
    return EXIT_FOUND if v.found else EXIT_OK


# ---- commands ----


def cmd_parse(args: argparse.Namespace, settings: Settings) -> int:
    f = _formula(args.formula)
    core = desugar(f)
    m = measure(core)
    if args.json:
        _out(dump_json({
            "formula": render(f),
            "desugared": render(core),
            "size": m.size,
            "ir_depth": m.ir_depth,
            "atoms": atoms(core),
        }))
    else:
        _out(render(f))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    m = _model(args.model, settings)
    f = _formula(args.formula)
    if args.world is None:
        worlds = satisfying_worlds(m, f, standard=args.standard)
        _out(dump_json({"formula": render(f), "worlds": worlds}) if args.json else " ".join(worlds))
        return EXIT_OK
    pm = PointedModel(m, args.world)
    value = evaluate_standard(pm, f) if args.standard else evaluate(pm, f)
    if args.json:
        _out(dump_json({"formula": render(f), "world": args.world, "value": value}))
    else:
        _out("true" if value else "false")
    return EXIT_OK


def cmd_props(args: argparse.Namespace, settings: Settings) -> int:
    report = frame_report(_model(args.model, settings))
    if args.json:
        _out(dump_json(report))
        return EXIT_OK
    for section, flags in report.items():
        held = [k for k, v in flags.items() if v]
        _out(f"{section}: {', '.join(held) if held else '-'}")
    return EXIT_OK


def cmd_closure(args: argparse.Namespace, settings: Settings) -> int:
    m = _model(args.model, settings)
    out = _CLOSURES[args.kind](m, RelationSelector(args.which))
    _out(dump_json(dump_model(out)) if args.json else model_to_json(out))
    return EXIT_OK


def cmd_bisim(args: argparse.Namespace, settings: Settings) -> int:
    m1 = _model(args.model, settings)
    m2 = _model(args.other, settings, "--other")
    if args.pairs:
        z = load_pairs_file(_resolve(args.pairs, settings))
        ok = check_delta_bisim(m1, m2, z)
        _out(dump_json({"delta_bisimulation": ok}) if args.json else ("true" if ok else "false"))
        return EXIT_OK
    z = max_delta_bisim(m1, m2)
    if args.json:
        _out(dump_json(dump_pairs(z)))
    else:
        for a, b in z.cross_pairs():
            _out(f"{a} {b}")
    return EXIT_OK


def cmd_distinguish(args: argparse.Namespace, settings: Settings) -> int:
    m1 = _model(args.model, settings)
    m2 = _model(args.other, settings, "--other")
    if args.world is None or args.other_world is None:
        raise BoundError("-w/--world and --other-world are required")
    f = distinguishing_formula(
        PointedModel(m1, args.world),
        PointedModel(m2, args.other_world),
        Language.parse(args.language),
        args.max_size,
    )
    text = None if f is None else render(f)
    if args.json:
        _out(dump_json({"language": args.language, "max_size": args.max_size, "formula": text}))
    else:
        _out(text if text is not None else f"none up to size {args.max_size}")
    return EXIT_OK


def cmd_search(args: argparse.Namespace, settings: Settings) -> int:
    f = _formula(args.formula)
    c = FrameClass.parse(args.frame_class)
    bound = _bound(args, f)
    _warn_if_large(bound, c, settings)
    v = find_countermodel(f, c, bound, jobs=args.jobs or settings.jobs, chunk=settings.chunk_frames)
    return _print_verdict(v, args.json)


def cmd_equiv(args: argparse.Namespace, settings: Settings) -> int:
    f = _formula(args.formula)
    g = _formula(args.right, "-g/--right")
    c = FrameClass.parse(args.frame_class)
    bound = _bound(args, f, g)
    _warn_if_large(bound, c, settings)
    v = bounded_equivalent(f, g, c, bound, jobs=args.jobs or settings.jobs, chunk=settings.chunk_frames)
    return _print_verdict(v, args.json)


def cmd_probe_rule(args: argparse.Namespace, settings: Settings) -> int:
    premises = [parse(p) for p in args.premise or []]
    if not premises:
        raise BoundError("at least one --premise is required")
    conclusion = _formula(args.formula)
    c = FrameClass.parse(args.frame_class)
    bound = _bound(args, conclusion, *premises)
    _warn_if_large(bound, c, settings)
    rep = rule_preservation_probe(
        premises, conclusion, c, bound, jobs=args.jobs or settings.jobs, chunk=settings.chunk_frames
    )
    if args.json:
        _out(dump_json(rep.to_dict()))
    elif rep.inconclusive:
        _out("inconclusive: a premise has a countermodel within the bound")
    elif rep.refuted:
        _out(f"refuted: premises hold, conclusion fails at {rep.conclusion.world}")
        _out(model_to_json(rep.conclusion.model))
    else:
        _out(f"not refuted up to {bound.max_worlds} worlds")
    return EXIT_FOUND if rep.refuted else EXIT_OK


def cmd_check_proof(args: argparse.Namespace, settings: Settings) -> int:
    d = load_derivation_file(_resolve(args.path, settings))
    report = check_derivation(d, args.system, settings.taut_atom_limit)
    if args.json:
        _out(dump_json(report.to_dict()))
    else:
        for s in report.steps:
            mark = "ok " if s.ok else "BAD"
            _out(f"{mark} {s.index:>3} {s.kind:<6} {s.message}".rstrip())
        verdict = "accepted" if report.accepted else "rejected"
        _out(f"{verdict} in {report.system}: {report.theorem}")
    return EXIT_OK if report.accepted else EXIT_FOUND


def cmd_replicate(args: argparse.Namespace, settings: Settings) -> int:
    index = CorpusIndex(settings.corpus_dir)
    reports = replicate(
        index,
        args.names or None,
        jobs=args.jobs or settings.jobs,
        chunk=settings.chunk_frames,
        atom_limit=settings.taut_atom_limit,
    )
    if args.json:
        _out(dump_json([r.to_dict() for r in reports]))
    else:
        for r in reports:
            _out(f"{r.manifest}: {r.passed} passed, {r.failed} failed")
            for c in r.claims:
                if not c.ok:
                    _out(f"  FAIL {c.op} [{c.anchor}] expected {c.expect!r}, got {c.actual!r}")
        total_failed = sum(r.failed for r in reports)
        _out(f"total: {sum(r.passed for r in reports)} passed, {total_failed} failed")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FOUND


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "parse": cmd_parse,
    "eval": cmd_eval,
    "props": cmd_props,
    "closure": cmd_closure,
    "bisim": cmd_bisim,
    "distinguish": cmd_distinguish,
    "search": cmd_search,
    "equiv": cmd_equiv,
    "probe-rule": cmd_probe_rule,
    "check-proof": cmd_check_proof,
    "replicate": cmd_replicate,
}


def _parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON на stdout")
    common.add_argument("--log-level", default=None, help="перекрывает LOG_LEVEL")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("-m", "--model")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--class", dest="frame_class", default="proper")
    sweep.add_argument("--max-worlds", type=int, default=3)
    sweep.add_argument("--atoms", default="", help="p,q; по умолчанию атомы формул")
    sweep.add_argument("--iso", action="store_true", help="isomorphism reduction")
    sweep.add_argument("--jobs", type=int, default=0)

    p = argparse.ArgumentParser(prog="iri", description="Logic of ignorance and Rumsfeld ignorance over bi-models")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common])
    s.add_argument("-f", "--formula")

    s = sub.add_parser("eval", parents=[common, model])
    s.add_argument("-w", "--world")
    s.add_argument("-f", "--formula")
    s.add_argument("--standard", action="store_true", help="single-relation semantics")

    sub.add_parser("props", parents=[common, model])

    s = sub.add_parser("closure", parents=[common, model])
    s.add_argument("--kind", choices=sorted(_CLOSURES), default="reflexive")
    s.add_argument("--which", choices=[x.value for x in RelationSelector], default="both")

    s = sub.add_parser("bisim", parents=[common, model])
    s.add_argument("--other")
    s.add_argument("--pairs")

    s = sub.add_parser("distinguish", parents=[common, model])
    s.add_argument("--other")
    s.add_argument("-w", "--world")
    s.add_argument("--other-world")
    s.add_argument("--language", default="IRI")
    s.add_argument("--max-size", type=int, default=8)

    s = sub.add_parser("search", parents=[common, sweep])
    s.add_argument("-f", "--formula")

    s = sub.add_parser("equiv", parents=[common, sweep])
    s.add_argument("-f", "--formula")
    s.add_argument("-g", "--right")

    s = sub.add_parser("probe-rule", parents=[common, sweep])
    s.add_argument("--premise", action="append")
    s.add_argument("-f", "--formula", help="conclusion")

    s = sub.add_parser("check-proof", parents=[common])
    s.add_argument("path")
    s.add_argument("--system")

    s = sub.add_parser("replicate", parents=[common])
    s.add_argument("names", nargs="*")
    s.add_argument("--jobs", type=int, default=0)

    return p.parse_args(argv)


def _settings_error(e: ValidationError) -> str:
    fields = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
    return f"invalid settings: {fields}"


def main(argv: Optional[list[str]] = None) -> int:
    args = _parse_args(argv)
    try:
        settings = load_settings()
    except ValidationError as e:
        sys.stderr.write(f"iri {args.command}: {_settings_error(e)}\n")
        return EXIT_ERROR
    configure_logging(settings.logs_dir, (args.log_level or settings.log_level).upper(), settings.log_to_file)
    log.debug(f"Command {args.command} | corpus={settings.corpus_dir}")
    try:
        return COMMANDS[args.command](args, settings)
    except (IriError, OSError) as e:
        sys.stderr.write(f"iri {args.command}: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
