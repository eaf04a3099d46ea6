"""
Grid Processing Engine.

Runs independent evaluations (grid points, bench cases) through a
multiprocessing pool when that is worthwhile, and writes the records back in
job order so the output does not depend on the degree of parallelism.
"""

import os
import pickle
from multiprocessing import Pool, cpu_count
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from modules.engine.processor_utils import (
    BENCH_HEADER,
    PointResult,
    evaluate_bench_case,
    evaluate_grid_point,
    format_bench_record,
    grid_lines,
)
from modules.utils.log_utils import get_logger

logger = get_logger(__name__)

ProgressCallback = Callable[[float, int, int], None]


class GridProcessor:
    """
    Maps a picklable job function over jobs, in parallel when possible.

    Falls back to sequential processing for a single worker, a single job,
    or when the pool cannot be started.
    """

    def __init__(self, max_workers: int = 8, chunksize: int = 8):
        self.max_workers = max(1, int(max_workers))
        self.chunksize = max(1, int(chunksize))

    @property
    def workers(self) -> int:
        return min(cpu_count(), self.max_workers)

    def _map(self, func, jobs: Sequence[tuple], progress: Optional[ProgressCallback]) -> List:
        total = len(jobs)
        results = []

        def report(done: int) -> None:
            if progress is not None and (done % 10 == 0 or done == total):
                progress(done / total * 100.0, done, total)

        if self.workers > 1 and total > 1:
            try:
                with Pool(processes=self.workers) as pool:
                    for result in pool.imap(func, jobs, chunksize=self.chunksize):
                        results.append(result)
                        report(len(results))
                return results
            except (OSError, pickle.PicklingError, AttributeError) as e:
                logger.warning("Worker pool unavailable (%s), processing sequentially", e)
                results = []

        for job in jobs:
            results.append(func(job))
            report(len(results))
        return results

    def run(self, jobs: Sequence[tuple], progress: Optional[ProgressCallback] = None) -> List[PointResult]:
        """Evaluate grid jobs; results come back sorted by job index."""
        if not jobs:
            return []
        results = self._map(evaluate_grid_point, jobs, progress)
        failed = [r for r in results if not r.ok]
        for r in failed[:5]:
            logger.warning("grid point (%r, %r) failed: %s", r.x, r.y, r.error)
        if len(failed) > 5:
            logger.warning("%d more grid points failed", len(failed) - 5)
        return sorted(results, key=lambda r: r.index)

    def bench(self, jobs: Sequence[tuple], progress: Optional[ProgressCallback] = None) -> List[Tuple]:
        """Evaluate bench cases in job order."""
        return self._map(evaluate_bench_case, jobs, progress)

    @staticmethod
    def write_grid(path: str, results: Sequence[PointResult]) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("\n".join(grid_lines(results)) + "\n")

    @staticmethod
    def bench_lines(rows: Sequence[Tuple]) -> List[str]:
        return [BENCH_HEADER] + [format_bench_record(row) for row in rows]

    @staticmethod
    def validate_output_path(path: str) -> Tuple[bool, Optional[str]]:
        """
        Check that an output file can be created.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not path:
            return False, "no output file given"
        target = Path(path)
        if target.is_dir():
            return False, f"{path} is a directory"
        parent = target.parent if str(target.parent) else Path(".")
        if not parent.exists():
            return False, f"directory not found: {parent}"
        if not os.access(parent, os.W_OK):
            return False, f"directory not writable: {parent}"
        return True, None
