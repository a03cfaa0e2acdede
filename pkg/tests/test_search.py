from __future__ import annotations

import asyncio

import pytest

from core.errors import BoundError, UndeclaredAtomError
from core.job_queue import Job, JobQueue, JobQueueConfig, JobStatus
from kripke.frames import PROPERTY_CHECKS, check_frame_property
from kripke.models import FrameClass, FrameProperty, Relation
from logic.parser import parse
from search.engine import (
    ChunkSpec,
    bounded_consequence,
    bounded_equivalent,
    bounded_satisfiable,
    bounded_valid,
    find_countermodel,
    rule_preservation_probe,
    scan_chunk,
)
from search.enumerate import (
    candidate_estimate,
    count_bimodels,
    decode_frames,
    enumerate_bimodels,
    frame_count,
    world_names,
)
from search.models import Countermodel, NoCounterexampleUpTo, SearchBound
from semantics.evaluator import PointedModel, evaluate

PROPER = FrameClass.parse("proper")
ALL = FrameClass.parse("all")


@pytest.mark.parametrize(
    "spec,n,expected",
    [("all", 1, 4), ("proper", 1, 3), ("equal", 1, 2), ("proper", 3, 19683), ("all", 3, 262144), ("s4-proper", 1, 1)],
)
def test_frame_counts(spec, n, expected):
    assert frame_count(n, FrameClass.parse(spec)) == expected


def test_count_bimodels_small():
    assert count_bimodels(SearchBound(1, ()), ALL) == 4
    assert count_bimodels(SearchBound(1, ()), PROPER) == 3
    # 3 фрейма на одном мире, 2 валюации
    assert count_bimodels(SearchBound(1, ("p",)), PROPER) == 6
    assert candidate_estimate(SearchBound(2, ("p",)), PROPER) == 3 * 2 + 81 * 4


def test_bullet_sub_sweep_size():
    assert count_bimodels(SearchBound(3, ("p",)), FrameClass.parse("bullet-sub")) == 6 + 81 * 4 + 157464


def test_decoded_frames_respect_class():
    c = FrameClass.parse("s4-proper")
    idx, r, rb = decode_frames(3, c, 0, frame_count(3, c))
    assert len(idx) == len(r) == len(rb) > 0
    assert PROPERTY_CHECKS[FrameProperty.TRANSITIVE](r).all()
    assert PROPERTY_CHECKS[FrameProperty.REFLEXIVE](rb).all()
    assert not (r & ~rb).any()


def test_enumerate_matches_count():
    bound = SearchBound(2, ("p",))
    c = FrameClass.parse("s4-proper")
    models = list(enumerate_bimodels(bound, c))
    assert len(models) == count_bimodels(bound, c)
    assert all(check_frame_property(m, c) for m in models)
    assert models[0].worlds == world_names(1)


def test_isomorphism_reduction_shrinks_the_space():
    c = FrameClass.parse("proper")
    full = count_bimodels(SearchBound(2, ("p",)), c)
    reduced = count_bimodels(SearchBound(2, ("p",), isomorphism_reduction=True), c)
    assert 0 < reduced < full


def test_single_world_countermodel():
    v = find_countermodel(parse("p -> I p"), PROPER, SearchBound(2, ("p",)))
    assert isinstance(v, Countermodel)
    assert v.world == "w0"
    assert v.model.worlds == ("w0",)
    assert v.model.r == frozenset()
    assert v.model.holds("p", "w0")
    assert v.to_dict()["kind"] == "countermodel"


def test_clear_verdict_counts_models():
    v = bounded_valid(parse("I p <-> I ~p"), PROPER, SearchBound(2, ("p",)))
    assert isinstance(v, NoCounterexampleUpTo)
    assert v.models_checked == count_bimodels(SearchBound(2, ("p",)), PROPER)
    assert v.to_dict() == {"kind": "clear", "max_worlds": 2, "checked": v.models_checked}


def test_iso_reduction_gives_same_verdict():
    f = parse("I p & I (I p | p) -> IR p")
    c = FrameClass.parse("bullet-sub")
    plain = find_countermodel(f, c, SearchBound(3, ("p",)))
    reduced = find_countermodel(f, c, SearchBound(3, ("p",), isomorphism_reduction=True))
    assert plain.found and reduced.found


def test_countermodel_is_certified():
    f = parse("IR p -> I I p")
    c = FrameClass.parse("s4-proper")
    v = find_countermodel(f, c, SearchBound(3, ("p",)))
    assert isinstance(v, Countermodel)
    assert check_frame_property(v.model, c)
    assert not evaluate(PointedModel(v.model, v.world), f)


def test_undeclared_atom():
    with pytest.raises(UndeclaredAtomError):
        find_countermodel(parse("p -> q"), PROPER, SearchBound(1, ("p",)))


@pytest.mark.parametrize("kwargs", [{"max_worlds": 0}, {"max_worlds": 1, "atoms": ("P",)}, {"max_worlds": 1, "atoms": ("p", "p")}])
def test_bad_bounds(kwargs):
    with pytest.raises(BoundError):
        SearchBound(**kwargs)


def test_equivalence_over_equal_frames():
    left, right = parse("IR p"), parse("I p & (I I p | I (p -> I p))")
    assert not bounded_equivalent(left, right, FrameClass.parse("equal"), SearchBound(3, ("p",))).found
    assert bounded_equivalent(left, right, PROPER, SearchBound(3, ("p",))).found


def test_bounded_consequence_and_satisfiable():
    v = bounded_consequence([parse("I p"), parse("I I p")], parse("IR p"), PROPER, SearchBound(3, ("p",)))
    assert not v.found
    pm = bounded_satisfiable(parse("IR p"), PROPER, SearchBound(3, ("p",)))
    assert pm is not None and evaluate(pm, parse("IR p"))
    assert bounded_satisfiable(parse("IR p & ~I p"), PROPER, SearchBound(2, ("p",))) is None


def test_rule_probe():
    premise, conclusion = parse("I p -> I p"), parse("IR p -> I I p | I (I p | p)")
    refuted = rule_preservation_probe([premise], conclusion, PROPER, SearchBound(3, ("p",)))
    assert refuted.refuted and not refuted.inconclusive
    kept = rule_preservation_probe([premise], conclusion, FrameClass.parse("bullet-sub"), SearchBound(3, ("p",)))
    assert not kept.refuted and kept.premises_valid
    shaky = rule_preservation_probe([parse("p")], parse("p"), ALL, SearchBound(1, ("p",)))
    assert shaky.inconclusive
    assert shaky.to_dict()["premises_valid"] is False


def test_scan_chunk_reports_first_hit():
    spec = ChunkSpec(1, 0, 3)
    res = scan_chunk(parse("p -> I p"), PROPER, ("p",), False, spec)
    assert res.hit == (0, 1, 0)
    assert res.r.shape == (1, 1)


@pytest.mark.slow
def test_parallel_matches_sequential():
    f = parse("IR p -> I I p | I (I p | p)")
    seq = find_countermodel(f, PROPER, SearchBound(3, ("p",)), jobs=1, chunk=512)
    par = find_countermodel(f, PROPER, SearchBound(3, ("p",)), jobs=3, chunk=512)
    assert isinstance(seq, Countermodel) and isinstance(par, Countermodel)
    assert seq.world == par.world
    assert seq.model == par.model
    assert seq.model.relation(Relation.R) == par.model.relation(Relation.R)


@pytest.mark.slow
def test_parallel_clear_counts_match():
    f = parse("I p <-> I ~p")
    seq = bounded_valid(f, PROPER, SearchBound(3, ("p",)), jobs=1, chunk=2048)
    par = bounded_valid(f, PROPER, SearchBound(3, ("p",)), jobs=2, chunk=2048)
    assert seq.to_dict() == par.to_dict()


# ---- job queue ----


def test_job_queue_runs_and_reports_failures():
    async def scenario():
        seen: list[int] = []
        errors: list[str] = []

        async def worker(job: Job) -> int:
            if job.kind == "broken":
                raise RuntimeError("boom")
            return job.payload * 2

        async def on_done(job: Job, res: int) -> None:
            seen.append(res)

        async def on_error(job: Job, exc: Exception) -> None:
            errors.append(job.last_error)

        q = JobQueue(worker, JobQueueConfig(concurrency=2, maxsize=8))
        await q.start()
        ok = Job("plain", 1, on_done=on_done, on_error=on_error)
        broken = Job("broken", 5, on_done=on_done, on_error=on_error)
        await q.enqueue(ok)
        await q.enqueue(broken)
        await q.join()
        live = q.live
        await q.stop()
        return ok, broken, seen, errors, live

    ok, broken, seen, errors, live = asyncio.run(scenario())
    assert ok.status is JobStatus.DONE and seen == [2]
    assert broken.status is JobStatus.FAILED
    assert errors == ["RuntimeError: boom"]
    # законченные задачи не копятся в очереди
    assert live == 0


def test_job_queue_cancel_where():
    async def scenario():
        gate = asyncio.Event()

        async def worker(job: Job) -> int:
            await gate.wait()
            return job.payload

        q = JobQueue(worker, JobQueueConfig(concurrency=1, maxsize=8))
        await q.start()
        jobs = [Job("scan", i) for i in range(4)]
        for j in jobs:
            await q.enqueue(j)
        await asyncio.sleep(0)
        dropped = q.cancel_where(lambda j: j.payload >= 2)
        gate.set()
        await q.join()
        await q.stop()
        return jobs, dropped

    jobs, dropped = asyncio.run(scenario())
    assert dropped == 2
    assert [j.status for j in jobs[2:]] == [JobStatus.CANCELED, JobStatus.CANCELED]
    assert jobs[0].status is JobStatus.DONE
