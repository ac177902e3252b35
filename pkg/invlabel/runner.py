# invlabel/runner.py

"""
Defines the ScanRunner class that executes independent solver jobs
concurrently and returns their results in submission order.
"""
import asyncio
import logging
from typing import Any, Callable, List, Sequence, Set

from .error import ConfigError

logger = logging.getLogger(__name__)

Job = Callable[[], Any]


class ScanRunner:
    """
    Runs blocking jobs (sample construction, solves, validations) in worker
    threads of an asyncio event loop.

    At most `workers` jobs run at once. Results come back in the order the
    jobs were given, whatever order they finish in. If a job fails, the jobs
    that have not started yet are cancelled and the first error propagates.

    Attributes:
        workers (int): Maximum number of jobs running at the same time.
    """
    def __init__(self, workers: int = 1):
        if workers < 1:
            raise ConfigError(f"ScanRunner needs workers >= 1, got {workers}")
        self.workers = workers
        self._tasks: Set[asyncio.Task] = set()

    @property
    def pending(self) -> int:
        """Number of tracked tasks that have not finished."""
        return len(self._tasks)

    async def _execute_job(self, semaphore: asyncio.Semaphore, index: int, job: Job) -> Any:
        async with semaphore:
            logger.debug(f"Starting scan job {index}")
            result = await asyncio.to_thread(job)
            logger.debug(f"Scan job {index} finished")
            return result

    def _handle_task_result(self, task: asyncio.Task):
        """Done-callback: logs failures and removes the task from the tracking set."""
        try:
            task.result()
        except asyncio.CancelledError:
            logger.info(f"Scan task {task.get_name()} was cancelled.")
        except Exception as e:
            logger.error(f"Scan task {task.get_name()} failed: {type(e).__name__}: {e}")
        finally:
            self._tasks.discard(task)

    async def run(self, jobs: Sequence[Job]) -> List[Any]:
        """
        Runs all jobs and returns their results in submission order.

        Raises:
            Whatever the first failing job raised.
        """
        semaphore = asyncio.Semaphore(self.workers)
        tasks = []
        for index, job in enumerate(jobs):
            task = asyncio.create_task(self._execute_job(semaphore, index, job), name=f"scan-job-{index}")
            self._tasks.add(task)
            task.add_done_callback(self._handle_task_result)
            tasks.append(task)
        logger.info(f"Running {len(tasks)} scan jobs with {self.workers} worker(s)")
        try:
            return list(await asyncio.gather(*tasks))
        except BaseException:
            await self.shutdown()
            raise

    async def shutdown(self):
        """Cancels every job that has not finished and waits for the cancellations."""
        if not self._tasks:
            return
        pending = [task for task in self._tasks if not task.done()]
        for task in pending:
            task.cancel()
        logger.info(f"Cancelled {len(pending)} pending scan task(s)")
        await asyncio.gather(*pending, return_exceptions=True)

    def run_sync(self, jobs: Sequence[Job]) -> List[Any]:
        """Blocking wrapper around `run` with its own event loop."""
        return asyncio.run(self.run(jobs))
