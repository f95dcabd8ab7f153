"""
Monte Carlo runner - fans seeded trials out to a thread pool
"""
import concurrent.futures
import logging
import time
from typing import Callable, List, Optional, Tuple

import numpy as np
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn

from ..core.models.experiment import ExperimentReport, ExperimentSpec, GridPoint, TrialResult
from ..orchestrator import run_vsp
from .instance import make_instance
from .metrics import genie_lmmse, nmse, to_db

logger = logging.getLogger(__name__)


def seed_for(base_seed: int, cell: int, trial: int) -> int:
    """Child seed of trial ``trial`` in (M, SNR) cell ``cell``; independent of run order"""
    state = np.random.SeedSequence([base_seed, cell, trial]).generate_state(1, dtype=np.uint32)
    return int(state[0])


def run_trial(spec: ExperimentSpec, point: GridPoint, trial: int) -> TrialResult:
    """
    Generate one instance, run VSP and the genie bound on it

    Exceptions are recorded on the result instead of propagating.
    """
    seed = seed_for(spec.base_seed, point.cell, trial)
    result = TrialResult(
        experiment_id=spec.experiment_id,
        matrix_kind=spec.matrix_kind.value,
        n=spec.n,
        m=point.m,
        k=spec.k,
        l=spec.l,
        snr_db=point.snr_db,
        grid_index=point.index,
        trial=trial,
        seed=seed,
        algorithm=spec.algorithm_for(point),
        overrides=dict(point.overrides),
    )
    try:
        inst = make_instance(
            spec.n, point.m, spec.k, spec.l, point.snr_db,
            spec.matrix_kind, spec.snr_convention, seed,
        )
        t0 = time.perf_counter()
        recovery = run_vsp(inst.y, inst.A, spec.vsp_config(inst.sigma2, point))
        t1 = time.perf_counter()
        genie = genie_lmmse(inst.y, inst.A, inst.support, inst.sigma2)
        t2 = time.perf_counter()

        result.nmse = nmse(recovery.x_hat, inst.x)
        result.nmse_db = to_db(result.nmse)
        result.genie_nmse = nmse(genie, inst.x)
        result.genie_nmse_db = to_db(result.genie_nmse)
        if spec.record_runtime:
            result.runtime_ms = (t1 - t0) * 1000.0
            result.genie_runtime_ms = (t2 - t1) * 1000.0
    except Exception as e:
        logger.warning(f"Trial {trial} at grid point {point.index} failed: {e}")
        result.mark_error(f"{type(e).__name__}: {e}")
    return result


class ExperimentRunner:
    """
    Runs every (grid point, trial) pair of a sweep

    Trials share no state, so results do not depend on ``jobs``.
    """

    def __init__(
        self,
        spec: ExperimentSpec,
        jobs: int = 1,
        show_progress: bool = False,
        on_result: Optional[Callable[[TrialResult], None]] = None,
    ):
        """
        Args:
            spec: sweep description
            jobs: worker threads (>= 1)
            show_progress: render a rich progress bar
            on_result: called for each finished trial, in completion order
        """
        if jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {jobs}")
        self.spec = spec
        self.jobs = jobs
        self.show_progress = show_progress
        self.on_result = on_result
        self.logger = logging.getLogger(__name__)

    def tasks(self) -> List[Tuple[GridPoint, int]]:
        return [(point, t) for point in self.spec.grid_points() for t in range(self.spec.trials)]

    def run(self) -> ExperimentReport:
        start = time.time()
        report = ExperimentReport(spec=self.spec)
        tasks = self.tasks()
        self.logger.info(
            f"Running {self.spec.experiment_id}: {len(tasks)} trials on {self.jobs} worker(s)"
        )

        with Progress(
            TextColumn("[bold blue]{task.description}"),
            BarColumn(),
            TextColumn("{task.completed}/{task.total}"),
            TimeElapsedColumn(),
            disable=not self.show_progress,
        ) as progress:
            bar = progress.add_task(self.spec.experiment_id, total=len(tasks))

            def collect(result: TrialResult) -> None:
                report.add_result(result)
                if self.on_result is not None:
                    self.on_result(result)
                progress.advance(bar)

            if self.jobs == 1:
                for point, trial in tasks:
                    collect(run_trial(self.spec, point, trial))
            else:
                with concurrent.futures.ThreadPoolExecutor(max_workers=self.jobs) as executor:
                    future_to_task = {
                        executor.submit(run_trial, self.spec, point, trial): (point, trial)
                        for point, trial in tasks
                    }
                    for future in concurrent.futures.as_completed(future_to_task):
                        collect(future.result())

        report.results = report.sorted_results()
        report.total_duration_seconds = time.time() - start
        if report.failed_trials:
            self.logger.warning(f"⚠ {report.failed_trials} trial(s) failed")
        else:
            self.logger.info(f"✓ All {len(tasks)} trials completed")
        return report


def run_experiment(spec: ExperimentSpec, jobs: int = 1, show_progress: bool = False) -> ExperimentReport:
    """Run a whole sweep and return the collected report"""
    return ExperimentRunner(spec, jobs=jobs, show_progress=show_progress).run()
