# -*- coding: utf-8 -*-
"""
Асинхронная очередь задач для параллельного перебора.

Поиск кладёт сюда чанки фреймов, воркеры отдают их в пул процессов.
Скан чанка детерминирован, поэтому упавшая задача не повторяется.
Отмена по предикату: когда чанк нашёл контрмодель, все более поздние
чанки больше не нужны.
"""

from __future__ import annotations

import asyncio
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Awaitable, Callable, Dict, Optional

from utils.logger import get_logger

log = get_logger(__name__)

_ids = itertools.count()

WorkerFn = Callable[["Job"], Awaitable[Any]]


class JobStatus(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"
    CANCELED = "canceled"


@dataclass(slots=True)
class Job:
    kind: str
    payload: Any

    on_done: Optional[Callable[[Job, Any], Awaitable[None]]] = None
    on_error: Optional[Callable[[Job, Exception], Awaitable[None]]] = None

    id: int = field(default_factory=lambda: next(_ids))
    status: JobStatus = JobStatus.QUEUED
    last_error: str = ""
    result: Any = None
    canceled: asyncio.Event = field(default_factory=asyncio.Event)

    @property
    def label(self) -> str:
        return f"{self.kind}#{self.id}"


@dataclass(slots=True)
class JobQueueConfig:
    concurrency: int = 2
    maxsize: int = 64


class JobQueue:
    def __init__(self, worker_fn: WorkerFn, config: Optional[JobQueueConfig] = None) -> None:
        self._run = worker_fn
        self._cfg = config or JobQueueConfig()
        self._pending: asyncio.Queue[Job] = asyncio.Queue(maxsize=self._cfg.maxsize)
        self._workers: list[asyncio.Task] = []
        # только задачи, которые ещё не закончились
        self._live: Dict[int, Job] = {}

    @property
    def live(self) -> int:
        return len(self._live)

    async def start(self) -> None:
        if self._workers:
            return
        self._workers = [
            asyncio.create_task(self._drain(), name=f"scan-worker-{n}") for n in range(self._cfg.concurrency)
        ]
        log.debug(f"Job queue started with {self._cfg.concurrency} workers")

    async def stop(self) -> None:
        for task in self._workers:
            task.cancel()
        await asyncio.gather(*self._workers, return_exceptions=True)
        self._workers = []

    async def join(self) -> None:
        await self._pending.join()

    async def enqueue(self, job: Job) -> int:
        self._live[job.id] = job
        await self._pending.put(job)
        return job.id

    def cancel(self, job_id: int) -> bool:
        """Помечает задачу отменённой; законченные задачи не трогаются."""
        job = self._live.get(job_id)
        if job is None:
            return False
        job.canceled.set()
        return True

    def cancel_where(self, pred: Callable[[Job], bool]) -> int:
        return sum(1 for job in list(self._live.values()) if pred(job) and self.cancel(job.id))

    async def _drain(self) -> None:
        while True:
            job = await self._pending.get()
            try:
                await self._process(job)
            finally:
                self._live.pop(job.id, None)
                self._pending.task_done()

    async def _process(self, job: Job) -> None:
        if job.canceled.is_set():
            job.status = JobStatus.CANCELED
            return
        job.status = JobStatus.RUNNING
        try:
            job.result = await self._run(job)
        except asyncio.CancelledError:
            job.status = JobStatus.CANCELED
            raise
        except Exception as exc:
            job.status = JobStatus.FAILED
            job.last_error = f"{type(exc).__name__}: {exc}"
            log.error(f"Job {job.label} failed: {job.last_error}")
            if job.on_error is not None:
                await job.on_error(job, exc)
            return
        job.status = JobStatus.DONE
        if job.on_done is not None:
            await job.on_done(job, job.result)
