"""
tests/test_problem.py
=====================
Modèle de problème: ensembles admissibles, métadonnées, validation des oracles
"""

import numpy as np
import pytest

from core.constants import INFINITE_VALUE
from core.errors import HessianRequired, OracleInconsistent
from core.problem import (
    ConvexityMetadata, ConvexTerm, FeasibleSet, MultiobjectiveProblem, Objective, ObjectiveFacts, SmoothTerm,
    validate_problem,
)
from core.zoo import l1_term, load_spec, quadratic_term, zero_convex


def _indicator_positive() -> ConvexTerm:
    return ConvexTerm(eval=lambda x: 0.0, domain=lambda x: bool(np.all(x >= 0.0)), kind="custom")


def test_feasible_set_contains_and_projects():
    box = FeasibleSet.box([-1.0, 0.0], [1.0, 2.0])
    assert box.contains(np.array([0.5, 1.0]))
    assert not box.contains(np.array([1.5, 1.0]))
    assert box.contains(np.array([1.0 + 1e-10, 1.0]))
    assert np.allclose(box.project([3.0, -1.0]), [1.0, 0.0])

    ball = FeasibleSet.ball([0.0, 0.0], 2.0)
    assert ball.bounding_box[0].tolist() == [-2.0, -2.0]
    assert not ball.contains(np.array([2.0, 2.0]))

    reals = FeasibleSet.reals(2)
    assert reals.is_whole_space and reals.bounding_box is None
    assert reals.sampling_box()[1].tolist() == [3.0, 3.0]


def test_feasible_set_rejects_bad_geometry():
    with pytest.raises(ValueError):
        FeasibleSet.box([1.0], [0.0])
    with pytest.raises(ValueError):
        FeasibleSet.ball([0.0], 0.0)


def test_problem_dimension_checks():
    term = Objective(quadratic_term(np.eye(2), np.zeros(2), 0.0), zero_convex(2))
    with pytest.raises(ValueError):
        MultiobjectiveProblem(n=2, objectives=[], feasible_set=FeasibleSet.reals(2))
    with pytest.raises(ValueError):
        MultiobjectiveProblem(n=2, objectives=[term], feasible_set=FeasibleSet.reals(3))
    with pytest.raises(ValueError):
        MultiobjectiveProblem(n=2, objectives=[term], feasible_set=FeasibleSet.reals(2),
                              metadata=ConvexityMetadata.empty(2))


def test_infinite_sentinel_never_summed():
    f = quadratic_term(np.eye(1), np.zeros(1), 5.0)
    problem = MultiobjectiveProblem(1, [Objective(f, _indicator_positive())], FeasibleSet.reals(1))
    assert problem.F_i(0, np.array([-1.0])) == INFINITE_VALUE
    assert problem.F_i(0, np.array([1.0])) == pytest.approx(5.5)


def test_facts_rho_and_aggregates():
    facts = ObjectiveFacts(mu=-1.0, sigma=3.0, lip=1.5)
    assert facts.rho() == pytest.approx(2.0)
    assert ObjectiveFacts(sigma=2.0).rho() is None

    meta = ConvexityMetadata((ObjectiveFacts(mu=1.0, sigma=1.0, lip=2.0), ObjectiveFacts(mu=0.5, sigma=2.0, lip=4.0)))
    assert meta.min_mu == 0.5
    assert meta.max_lip == 4.0
    assert meta.min_sigma == 1.0
    assert meta.all_strongly_convex
    assert ConvexityMetadata((ObjectiveFacts(mu=1.0), ObjectiveFacts())).min_mu is None

    with pytest.raises(ValueError):
        ObjectiveFacts(sigma=0.0)


def test_directional_derivative_of_composite():
    f = quadratic_term(np.eye(1), np.zeros(1), 0.0)
    problem = MultiobjectiveProblem(1, [Objective(f, l1_term(1, [1.0]))], FeasibleSet.reals(1))
    assert problem.directional_F(0, np.array([0.0]), np.array([1.0])) == pytest.approx(1.0)
    assert problem.directional_F(0, np.array([0.0]), np.array([-1.0])) == pytest.approx(1.0)
    assert problem.directional_F(0, np.array([2.0]), np.array([-1.0])) == pytest.approx(-3.0)


def test_hessians_required():
    f = SmoothTerm(eval=lambda x: float(x @ x), gradient=lambda x: 2 * x)
    problem = MultiobjectiveProblem(1, [Objective(f, zero_convex(1))], FeasibleSet.reals(1))
    with pytest.raises(HessianRequired):
        problem.hessians(np.array([0.0]))


@pytest.mark.parametrize("problem_id", ["quad-pair-2d", "composite-pair-1d", "l1-blocks-2d", "box-pair-2d",
                                        "paper-abs", "paper-negsq", "random-quad-2d"])
def test_builtin_problems_pass_validation(builtin, problem_id):
    report = validate_problem(builtin(problem_id), samples=60, seed=3)
    assert report.passed, report.worst()


def test_corrupted_lipschitz_constant_is_falsified(corrupted_spec_text):
    problem = load_spec(corrupted_spec_text)
    with pytest.raises(OracleInconsistent) as excinfo:
        validate_problem(problem, samples=60, seed=0)
    assert excinfo.value.check == "lipschitz"
    assert excinfo.value.magnitude > 0.0


def test_wrong_gradient_is_falsified():
    f = SmoothTerm(eval=lambda x: float(x @ x), gradient=lambda x: 3 * x, kind="custom")
    problem = MultiobjectiveProblem(1, [Objective(f, zero_convex(1))], FeasibleSet.reals(1))
    report = validate_problem(problem, samples=20, raise_on_failure=False)
    assert not report.passed
    assert report.worst().name == "gradient"
