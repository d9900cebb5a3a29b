"""
tests/test_inner_solver.py
==========================
Solveurs internes: gradient proximal régularisé, scalarisation, oracle de grille
"""

import numpy as np
import pytest

from core.errors import ConvexityRequired, DimensionTooLarge, NotConverged, Unbounded
from core.inner_solver import (
    InnerSolution, InnerSolveConfig, StepRule, grid_oracle_maxmin, grid_oracle_search, merit_integrand,
    solve_regularized_weighted, solve_weighted_scalarization,
)
from core.problem import ConvexityMetadata, FeasibleSet, MultiobjectiveProblem, Objective, ObjectiveFacts
from core.simplex import SimplexWeights
from core.zoo import quadratic_term, zero_convex


def _regularized_closed_form(lam: float, ell: float, c: float) -> float:
    """argmin λ(y−1)² + (1−λ)(y+1)² + (ℓ/2)(c−y)²."""
    return (ell * c + 2.0 * (2.0 * lam - 1.0)) / (2.0 + ell)


@pytest.mark.parametrize("lam, ell, c", [(0.5, 1.0, 3.0), (0.2, 0.5, -2.0), (1.0, 2.0, 0.0), (0.9, 4.0, 1.5)])
def test_regularized_weighted_matches_closed_form(builtin, lam, ell, c):
    problem = builtin("quad-pair-1d")
    weights = SimplexWeights(np.array([lam, 1.0 - lam]))
    solution = solve_regularized_weighted(problem, weights, np.array([c]), ell, InnerSolveConfig(tol=1e-10))
    assert solution.converged
    assert solution.point[0] == pytest.approx(_regularized_closed_form(lam, ell, c), abs=1e-8)


def test_regularized_weighted_with_fixed_step(builtin):
    problem = builtin("quad-pair-1d")
    cfg = InnerSolveConfig(tol=1e-10, step_rule=StepRule.fixed(0.2))
    solution = solve_regularized_weighted(problem, SimplexWeights.barycenter(2), np.array([3.0]), 1.0, cfg)
    assert solution.point[0] == pytest.approx(_regularized_closed_form(0.5, 1.0, 3.0), abs=1e-8)


def test_regularized_weighted_composite_uses_prox(builtin):
    problem = builtin("paper-abs")
    for x, ell in [(0.5, 1.0), (2.0, 1.0), (0.2, 4.0)]:
        solution = solve_regularized_weighted(problem, SimplexWeights.vertex(1, 0), np.array([x]), ell,
                                              InnerSolveConfig(tol=1e-12))
        expected = np.sign(x) * max(abs(x) - 1.0 / ell, 0.0)
        assert solution.point[0] == pytest.approx(expected, abs=1e-9)


def test_regularized_weighted_requires_convexity(builtin):
    with pytest.raises(ConvexityRequired):
        solve_regularized_weighted(builtin("paper-negsq"), SimplexWeights.vertex(1, 0), np.array([0.5]), 1.0,
                                   InnerSolveConfig())


def test_not_converged_carries_best_iterate(builtin):
    problem = builtin("quad-pair-1d")
    with pytest.raises(NotConverged) as excinfo:
        solve_regularized_weighted(problem, SimplexWeights.vertex(2, 0), np.array([3.0]), 1.0,
                                   InnerSolveConfig(tol=1e-14, max_iter=1))
    best = excinfo.value.best
    assert isinstance(best, InnerSolution)
    assert not best.converged
    assert np.isfinite(best.value)


def test_weighted_scalarization_minimizer(builtin):
    problem = builtin("quad-pair-2d")
    solution = solve_weighted_scalarization(problem, SimplexWeights(np.array([0.75, 0.25])), InnerSolveConfig(tol=1e-10))
    assert np.allclose(solution.point, [0.5, 0.0], atol=1e-8)


def test_weighted_scalarization_detects_unbounded():
    linear = quadratic_term(np.zeros((1, 1)), np.array([1.0]), 0.0)
    problem = MultiobjectiveProblem(
        1, [Objective(linear, zero_convex(1))], FeasibleSet.reals(1),
        metadata=ConvexityMetadata((ObjectiveFacts(f_convex=True, F_convex=True),)),
    )
    with pytest.raises(Unbounded):
        solve_weighted_scalarization(problem, SimplexWeights.vertex(1, 0), InnerSolveConfig(max_iter=10000))


def test_step_rule_validation():
    with pytest.raises(ValueError):
        StepRule(kind="armijo")
    with pytest.raises(ValueError):
        StepRule.fixed(0.0)
    with pytest.raises(ValueError):
        StepRule.backtracking(beta=1.5)
    with pytest.raises(ValueError):
        InnerSolveConfig(tol=0.0)


# === ORACLE DE GRILLE ===

def test_grid_oracle_reproduces_abs_example(builtin):
    problem = builtin("paper-abs")
    result = grid_oracle_search(problem, np.array([0.5]), 1.0, linearized=False)
    assert result.value == pytest.approx(0.375, abs=result.slack + 1e-9)
    assert result.slack < 1e-2


def test_grid_oracle_value_at_least_integrand_at_x(builtin):
    problem = builtin("quad-pair-2d")
    x = np.array([0.3, 0.7])
    assert merit_integrand(problem, x, x, 1.0, linearized=True) == 0.0
    assert grid_oracle_maxmin(problem, x, 1.0, linearized=True, grid=21) >= 0.0


def test_grid_oracle_requires_small_dimension_and_box():
    f = quadratic_term(np.eye(4), np.zeros(4), 0.0)
    big = MultiobjectiveProblem(4, [Objective(f, zero_convex(4))], FeasibleSet.box(-np.ones(4), np.ones(4)))
    with pytest.raises(DimensionTooLarge):
        grid_oracle_search(big, np.zeros(4), 1.0, linearized=False)

    g = quadratic_term(np.eye(1), np.zeros(1), 0.0)
    unbounded = MultiobjectiveProblem(1, [Objective(g, zero_convex(1))], FeasibleSet.reals(1))
    with pytest.raises(DimensionTooLarge):
        grid_oracle_search(unbounded, np.zeros(1), 1.0, linearized=False)
