"""Run a configuration: fan tasks out to a worker pool, assemble the report in task order."""

from __future__ import annotations

import datetime as _dt
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List

from .. import __version__
from ..errors import LogKantorovichError
from .checks import Context, build_tasks
from .config import ExperimentConfig
from .report import ExperimentReport, Record

__all__ = ["run"]


def _timed(name, task) -> List[Record]:
    t0 = time.perf_counter()
    try:
        recs = task()
    except LogKantorovichError as exc:
        check = name.split(":", 1)[0]
        function = name.split(":", 1)[1] if ":" in name else None
        recs = [Record(check=check, function=function, metric="error", value=float("nan"), verdict="fail",
                       params={"error": type(exc).__name__, "message": str(exc)})]
    dt = time.perf_counter() - t0
    for r in recs:
        r.wall_time = dt
    return recs


def run(config: ExperimentConfig) -> ExperimentReport:
    """Execute every configured check.

    Numerical failures inside a task become failing records and the run
    continues; anything else propagates.
    """
    ctx = Context.from_config(config)
    tasks = build_tasks(ctx)
    if config.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda nt: _timed(*nt), tasks))
    else:
        results = [_timed(name, task) for name, task in tasks]
    records = [r for recs in results for r in recs]
    metadata = {
        "config_hash": config.config_hash(),
        "version": __version__,
        "seed": config.seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return ExperimentReport(metadata, config.to_dict(), records)
