import logging
import math
import threading
import time
from dataclasses import dataclass
from typing import Optional

import mappings
from core import VParams
from job import Job, JobQueue
from steadystate import SteadyState, steady_state


@dataclass(frozen=True)
class PointFailure:
    index: int
    params: VParams
    error: str
    # None when the steady state itself failed and the whole row is NaN
    observable: Optional[str] = None


class Dispatcher:
    """Evaluates the queued grid points on worker threads.

    Rows are stored by grid index, so the assembled table does not depend on
    which thread finished first.
    """
    results: dict[int, list[float]]
    failures: list[PointFailure]

    _job_queue: JobQueue
    _observables: list[str]
    _threads: list[threading.Thread]
    _lock: threading.Lock

    def __init__(self, job_queue: JobQueue, observables: list[str]) -> None:
        self._job_queue = job_queue
        self._observables = observables
        self._threads = []
        self._lock = threading.Lock()
        self.results = {}
        self.failures = []

    def start(self, thread_count: int = 1) -> None:
        """Start the dispatch loop on thread_count worker threads."""
        for _ in range(max(thread_count, 1)):
            worker = threading.Thread(target=self._run_dispatch_loop, daemon=True)
            worker.start()
            self._threads.append(worker)

    def wait(self) -> None:
        for worker in self._threads:
            worker.join()
        self._threads = []
        self.failures.sort(key=lambda f: (f.index, f.observable or ''))

    def _run_dispatch_loop(self) -> None:
        while not self._job_queue.is_finished():
            job: Optional[Job] = self._job_queue.dequeue()
            if job is None:
                time.sleep(0.01)
                continue
            try:
                row, failures = self._dispatch_job(job)
                with self._lock:
                    self.results[job.index] = row
                    self.failures.extend(failures)
            finally:
                self._job_queue.complete_job()

    def _dispatch_job(self, job: Job) -> tuple[list[float], list[PointFailure]]:
        logging.debug(f'Processing grid point {job.index}: {job.params}')
        try:
            ss: SteadyState = steady_state(job.params)
        except Exception as ex:
            return [math.nan] * len(self._observables), [PointFailure(job.index, job.params, str(ex))]

        row: list[float] = []
        failures: list[PointFailure] = []
        for name in self._observables:
            try:
                row.append(float(mappings.observable_map[name](job.params, ss)))
            except Exception as ex:
                row.append(math.nan)
                failures.append(PointFailure(job.index, job.params, str(ex), observable=name))
        return row, failures
