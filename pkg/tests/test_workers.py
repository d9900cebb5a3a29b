"""
tests/test_workers.py
=====================
Parallélisme par threads: ordre des résultats et propagation des erreurs
"""

import numpy as np
import pytest

from core.main_controller import MeritController
from core.merit import MeritKind
from workers.evaluation_worker import EvaluationWorker, run_in_workers


def test_results_keep_task_order():
    tasks = list(range(25))
    assert run_in_workers(tasks, lambda k: k * k, jobs=4) == [k * k for k in tasks]


def test_single_job_runs_inline():
    calls = []
    assert run_in_workers([3, 1, 2], lambda k: calls.append(k) or -k, jobs=1) == [-3, -1, -2]
    assert calls == [3, 1, 2]


def test_first_error_by_index_is_raised():
    def fn(k):
        if k in (7, 3):
            raise ValueError(f"tâche {k}")
        return k

    with pytest.raises(ValueError, match="tâche 3"):
        run_in_workers(list(range(10)), fn, jobs=3)


def test_parallel_evaluations_match_sequential(zoo):
    problem = zoo.get("quad-pair-2d")
    points = [np.array([x, y]) for x in (-1.0, 0.5, 2.0) for y in (-0.5, 1.0)]
    sequential = MeritController(jobs=1).evaluate_points(problem, points, MeritKind.W_ELL, [0.5, 1.0])
    parallel = MeritController(jobs=3).evaluate_points(problem, points, MeritKind.W_ELL, [0.5, 1.0])
    assert [(r.index, r.ell) for r in parallel] == [(r.index, r.ell) for r in sequential]
    assert [r.value for r in parallel] == [r.value for r in sequential]


def test_worker_collects_results_and_errors():
    worker = EvaluationWorker([(0, 1.0), (1, 0.0), (2, 4.0)], lambda v: 1.0 / v)
    worker.run()
    assert worker.get_results() == [(0, 1.0), (2, 0.25)]
    assert [(index, type(e)) for index, e in worker.get_errors()] == [(1, ZeroDivisionError)]
    assert not worker.is_running()
