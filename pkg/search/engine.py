"""Bounded countermodel search.

The enumeration space is cut into chunks of consecutive frame indices. Each
chunk is scanned with the batch evaluator and reports its first falsifying
(frame, valuation, world) in enumeration order. With jobs > 1 the chunks are
fed through an asyncio JobQueue into a process pool; the reducer keeps the
lowest-numbered chunk with a hit, so the verdict matches the sequential run.
"""

from __future__ import annotations

import asyncio
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from core.errors import UndeclaredAtomError
from core.job_queue import Job, JobQueue, JobQueueConfig
from kripke.frames import check_frame_property
from kripke.models import FrameClass
from logic.formula import Formula, Iff, Implies, Not, atoms, conj, desugar
from logic.parser import render
from search.enumerate import build_model, canonical_mask, decode_frames, frame_count, world_names
from search.models import Countermodel, NoCounterexampleUpTo, ProbeReport, SearchBound, Verdict
from semantics.batch import BatchEvaluator, valuation_count
from semantics.evaluator import PointedModel, evaluate
from utils.logger import get_logger

log = get_logger(__name__)

DEFAULT_CHUNK = 4096
# предел ячеек (F * V * n) одного батча вычислителя
BATCH_CELLS = 1 << 22


@dataclass(frozen=True, slots=True)
class ChunkSpec:
    n: int
    start: int
    stop: int


@dataclass(frozen=True, slots=True)
class ChunkResult:
    spec: ChunkSpec
    checked: int
    hit: Optional[tuple[int, int, int]] = None  # (frame index, valuation, world)
    r: Optional[np.ndarray] = None
    rb: Optional[np.ndarray] = None


def scan_chunk(f: Formula, c: FrameClass, atom_names: tuple[str, ...], iso: bool, spec: ChunkSpec) -> ChunkResult:
    idx, r, rb = decode_frames(spec.n, c, spec.start, spec.stop)
    if not len(idx):
        return ChunkResult(spec, 0)
    vals = valuation_count(spec.n, len(atom_names))
    step = max(1, BATCH_CELLS // (vals * spec.n))
    checked = 0
    for b in range(0, len(idx), step):
        rs, rbs = r[b : b + step], rb[b : b + step]
        bad = ~BatchEvaluator(rs, rbs, atom_names).truth(f)
        if iso:
            mask = canonical_mask(rs, rbs, len(atom_names))
            bad = bad & mask[:, :, None]
            checked += int(mask.sum())
        else:
            checked += len(rs) * vals
        if bad.any():
            fi, v, w = np.unravel_index(int(np.argmax(bad.reshape(-1))), bad.shape)
            return ChunkResult(spec, checked, (int(idx[b + fi]), int(v), int(w)), rs[fi].copy(), rbs[fi].copy())
    return ChunkResult(spec, checked)


def _chunks(c: FrameClass, bound: SearchBound, chunk: int) -> Iterator[ChunkSpec]:
    for n in range(1, bound.max_worlds + 1):
        total = frame_count(n, c)
        for start in range(0, total, chunk):
            yield ChunkSpec(n, start, min(start + chunk, total))


def _scan_sequential(f: Formula, c: FrameClass, bound: SearchBound, chunk: int) -> list[ChunkResult]:
    out = []
    for spec in _chunks(c, bound, chunk):
        res = scan_chunk(f, c, bound.atoms, bound.isomorphism_reduction, spec)
        out.append(res)
        if res.hit is not None:
            break
    return out


async def _scan_parallel(f: Formula, c: FrameClass, bound: SearchBound, chunk: int, jobs: int) -> list[ChunkResult]:
    loop = asyncio.get_running_loop()
    results: dict[int, ChunkResult] = {}
    errors: list[str] = []
    hit_seq = math.inf

    with ProcessPoolExecutor(max_workers=jobs) as pool:

        async def worker(job: Job) -> ChunkResult:
            _, spec = job.payload
            return await loop.run_in_executor(pool, scan_chunk, f, c, bound.atoms, bound.isomorphism_reduction, spec)

        async def on_done(job: Job, res: ChunkResult) -> None:
            nonlocal hit_seq
            seq = job.payload[0]
            results[seq] = res
            if res.hit is not None and seq < hit_seq:
                hit_seq = seq
                dropped = queue.cancel_where(lambda j: j.payload[0] > seq)
                log.debug(f"Hit in chunk {seq}, {dropped} later chunks canceled")

        async def on_error(job: Job, exc: Exception) -> None:
            errors.append(job.last_error)

        queue = JobQueue(worker, JobQueueConfig(concurrency=jobs, maxsize=jobs * 4))
        await queue.start()
        try:
            for seq, spec in enumerate(_chunks(c, bound, chunk)):
                if seq > hit_seq:
                    break
                await queue.enqueue(Job("scan", (seq, spec), on_done=on_done, on_error=on_error))
            await queue.join()
        finally:
            await queue.stop()

    if errors:
        raise RuntimeError(f"search worker failed: {errors[0]}")
    ordered = [results[s] for s in sorted(results) if s <= hit_seq]
    return ordered


def _check_atoms(f: Formula, bound: SearchBound) -> None:
    for a in atoms(f):
        if a not in bound.atoms:
            raise UndeclaredAtomError(a)


def find_countermodel(
    f: Formula,
    c: FrameClass,
    bound: SearchBound,
    jobs: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> Verdict:
    f = desugar(f)
    _check_atoms(f, bound)
    t0 = time.monotonic()
    log.info(f"Search start: {render(f)} | class={c.label()} | worlds<={bound.max_worlds} | atoms={list(bound.atoms)} | jobs={jobs}")

    if jobs > 1:
        results = asyncio.run(_scan_parallel(f, c, bound, chunk, jobs))
    else:
        results = _scan_sequential(f, c, bound, chunk)

    elapsed = time.monotonic() - t0
    for res in results:
        if res.hit is None:
            continue
        _, v, w = res.hit
        model = build_model(res.spec.n, res.r, res.rb, bound.atoms, v)
        world = world_names(res.spec.n)[w]
        if not check_frame_property(model, c) or evaluate(PointedModel(model, world), f):
            raise RuntimeError(f"countermodel certificate failed for {render(f)}")
        log.info(f"Search done: countermodel with {res.spec.n} worlds at {world} ({elapsed:.2f}s)")
        return Countermodel(model, world)

    checked = sum(res.checked for res in results)
    log.info(f"Search done: no countermodel up to {bound.max_worlds} worlds, {checked} models ({elapsed:.2f}s)")
    return NoCounterexampleUpTo(bound.max_worlds, checked)


def bounded_valid(f: Formula, c: FrameClass, bound: SearchBound, jobs: int = 1, chunk: int = DEFAULT_CHUNK) -> Verdict:
    return find_countermodel(f, c, bound, jobs=jobs, chunk=chunk)


def bounded_equivalent(
    f: Formula, g: Formula, c: FrameClass, bound: SearchBound, jobs: int = 1, chunk: int = DEFAULT_CHUNK
) -> Verdict:
    return find_countermodel(Iff(f, g), c, bound, jobs=jobs, chunk=chunk)


def bounded_consequence(
    gamma: Sequence[Formula], f: Formula, c: FrameClass, bound: SearchBound, jobs: int = 1, chunk: int = DEFAULT_CHUNK
) -> Verdict:
    """Локальное следование: контрмодель для (γ1 ∧ … ∧ γn) → f."""
    return find_countermodel(Implies(conj(*gamma), f), c, bound, jobs=jobs, chunk=chunk)


def bounded_satisfiable(
    f: Formula, c: FrameClass, bound: SearchBound, jobs: int = 1, chunk: int = DEFAULT_CHUNK
) -> Optional[PointedModel]:
    v = find_countermodel(Not(f), c, bound, jobs=jobs, chunk=chunk)
    if isinstance(v, Countermodel):
        return PointedModel(v.model, v.world)
    return None


def rule_preservation_probe(
    premises: Iterable[Formula],
    conclusion: Formula,
    c: FrameClass,
    bound: SearchBound,
    jobs: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> ProbeReport:
    report = ProbeReport()
    for p in premises:
        report.premises.append(find_countermodel(p, c, bound, jobs=jobs, chunk=chunk))
    report.conclusion = find_countermodel(conclusion, c, bound, jobs=jobs, chunk=chunk)
    if report.inconclusive:
        log.info("Rule probe inconclusive: a premise has a countermodel")
    return report
