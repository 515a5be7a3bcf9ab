#!/usr/bin/env python3
"""
Resource monitor for long-running pi computations
"""

import os
import asyncio
import logging
from datetime import datetime
from typing import List, Optional
from pydantic import BaseModel, Field
import psutil

logger = logging.getLogger('run_monitor')


class RunStats(BaseModel):
    """Resource usage of one run"""
    label: str
    start_time: datetime = Field(default_factory=datetime.now)
    end_time: Optional[datetime] = None
    duration_seconds: float = 0.0
    rows_computed: int = 0
    peak_rss_mb: float = 0.0
    cpu_samples: List[float] = Field(default_factory=list)
    status: str = "running"


class RunMonitor:
    """Samples memory and CPU of this process while a computation runs"""

    def __init__(self,
                 stats_dir: Optional[str] = None,
                 memory_threshold: float = 85.0,
                 cpu_threshold: float = 90.0):
        """
        Initialize run monitor

        Args:
            stats_dir: Directory for stats files (nothing is written when None)
            memory_threshold: System memory usage warning level in percent
            cpu_threshold: Process CPU usage warning level in percent
        """
        self.stats_dir = stats_dir
        if stats_dir is not None:
            os.makedirs(stats_dir, exist_ok=True)

        self.memory_threshold = memory_threshold
        self.cpu_threshold = cpu_threshold
        self.process = psutil.Process()
        self.stats = RunStats(label="idle", status="idle")
        self.stats_file: Optional[str] = None
        self._running = False
        self._task: Optional[asyncio.Task] = None

    async def start_monitoring(self, label: str, interval: float = 1.0):
        """
        Begin sampling for a run

        Args:
            label: Name of the run
            interval: Seconds between samples
        """
        self.stats = RunStats(label=label)
        if self.stats_dir is not None:
            stamp = self.stats.start_time.strftime('%Y%m%d_%H%M%S')
            self.stats_file = os.path.join(self.stats_dir, f"run_stats_{label}_{stamp}.json")

        # prime cpu_percent so the first sample is meaningful
        self.process.cpu_percent(interval=None)
        self._running = True
        self._task = asyncio.create_task(self._sample_loop(interval))
        logger.debug(f"Monitoring {label} every {interval}s")

    async def _sample_loop(self, interval: float):
        while self._running:
            try:
                self._sample()
            except psutil.Error as e:
                logger.error(f"Resource sampling failed: {str(e)}")
            await asyncio.sleep(interval)

    def _sample(self):
        rss_mb = self.process.memory_info().rss / (1024 * 1024)
        self.stats.peak_rss_mb = max(self.stats.peak_rss_mb, rss_mb)

        cpu = self.process.cpu_percent(interval=None)
        self.stats.cpu_samples.append(cpu)

        system_memory = psutil.virtual_memory().percent
        if system_memory > self.memory_threshold:
            logger.warning(f"{self.stats.label}: system memory at {system_memory:.1f}% "
                           f"(warning level {self.memory_threshold:.1f}%), RSS {rss_mb:.1f} MB")
        if cpu > self.cpu_threshold:
            logger.warning(f"{self.stats.label}: CPU at {cpu:.1f}% "
                           f"(warning level {self.cpu_threshold:.1f}%)")

    def update_stats(self, rows_computed: Optional[int] = None):
        """
        Record progress of the run

        Args:
            rows_computed: Report rows finished so far
        """
        if rows_computed is not None:
            self.stats.rows_computed = rows_computed
        self.stats.duration_seconds = (datetime.now() - self.stats.start_time).total_seconds()

    def _write_stats(self):
        if self.stats_file is None:
            return
        try:
            with open(self.stats_file, 'w') as f:
                f.write(self.stats.model_dump_json(indent=2))
        except OSError as e:
            logger.error(f"Could not write {self.stats_file}: {str(e)}")

    async def stop(self):
        """End sampling and write the final stats"""
        self._running = False
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None

        self.update_stats()
        self.stats.end_time = datetime.now()
        self.stats.status = "completed"
        self._write_stats()

        logger.info(f"{self.stats.label} finished in {self.stats.duration_seconds:.2f}s, "
                    f"peak RSS {self.stats.peak_rss_mb:.1f} MB")


run_monitor: Optional[RunMonitor] = None


def get_run_monitor(stats_dir: Optional[str] = None,
                    memory_threshold: float = 85.0,
                    cpu_threshold: float = 90.0) -> RunMonitor:
    """
    Get the process-wide run monitor, creating it on first use

    Returns:
        RunMonitor instance
    """
    global run_monitor
    if run_monitor is None:
        run_monitor = RunMonitor(stats_dir, memory_threshold, cpu_threshold)
    return run_monitor
