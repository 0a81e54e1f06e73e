from queue import Empty, Queue
from threading import Lock
from typing import Optional

from core import VParams


class Job:

    index: int
    params: VParams

    def __init__(self, index: int, params: VParams) -> None:
        self.index = index
        self.params = params


class JobQueue:
    """Grid points of one sweep waiting for a worker thread."""

    _lock: Lock
    _job_queue: Queue[Job]
    _jobs_enqueued: int
    _jobs_processed: int
    _jobs_in_progress: int  # dequeued, not yet completed
    _finished: bool  # no further enqueue calls

    def __init__(self) -> None:
        self._lock = Lock()
        self._job_queue = Queue()
        self._jobs_enqueued = 0
        self._jobs_processed = 0
        self._jobs_in_progress = 0
        self._finished = False

    def enqueue(self, job: Job) -> None:
        """Queue one grid point."""
        with self._lock:
            self._job_queue.put(job)
            self._jobs_enqueued += 1

    def dequeue(self) -> Optional[Job]:
        """Next waiting grid point, or None when the queue is momentarily empty."""
        try:
            job = self._job_queue.get_nowait()
        except Empty:
            return None
        with self._lock:
            self._jobs_in_progress += 1
        return job

    def complete_job(self) -> None:
        """Record that a worker finished its grid point."""
        with self._lock:
            self._jobs_in_progress -= 1
            self._jobs_processed += 1

    def mark_input_complete(self) -> None:
        """Signal that no more jobs will be added."""
        with self._lock:
            self._finished = True

    def is_finished(self) -> bool:
        """True once input is complete and every grid point has been evaluated."""
        with self._lock:
            return (
                self._finished
                and self._jobs_enqueued == self._jobs_processed
                and self._jobs_in_progress == 0
            )

    @property
    def processed(self) -> int:
        with self._lock:
            return self._jobs_processed
