# modules/metrics.py
import time
from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass
class SearchMetrics:
    """Track the work done by one backtracking search"""
    nodes: int = 0
    prunes: int = 0
    backtracks: int = 0
    candidates_tested: int = 0
    outer_iterations: int = 0
    started: float = field(default_factory=time.perf_counter)
    finished: float = 0.0

    def stop(self):
        self.finished = time.perf_counter()

    @property
    def elapsed(self) -> float:
        end = self.finished or time.perf_counter()
        return end - self.started

    def as_dict(self) -> Dict[str, Any]:
        nodes_per_second = 0
        if self.elapsed > 0:
            nodes_per_second = round(self.nodes / self.elapsed, 1)
        return {
            'nodes': self.nodes,
            'prunes': self.prunes,
            'backtracks': self.backtracks,
            'candidates_tested': self.candidates_tested,
            'outer_iterations': self.outer_iterations,
            'elapsed_seconds': round(self.elapsed, 4),
            'nodes_per_second': nodes_per_second,
        }
