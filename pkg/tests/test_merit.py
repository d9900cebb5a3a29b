"""
tests/test_merit.py
===================
Fonctions de mérite u₀, u_ℓ, w_ℓ: exemples de référence, équivalence avec la grille,
dérivées directionnelles et certificats
"""

import numpy as np
import pytest

from core.errors import ConvexityRequired, InfeasiblePoint, NotConverged, UnsupportedProblem
from core.inner_solver import InnerSolveConfig, grid_oracle_search
from core.merit import (
    DualSolveConfig, MeritEvaluation, MeritKind, directional_derivative_u_ell, directional_derivative_w_ell,
    eval_u0, eval_u_ell, eval_w_ell, evaluate_merit, gradient_u_ell, gradient_w_ell_smooth_part,
    is_pareto_stationary, is_weakly_pareto_optimal, primal_value,
)
from core.problem import FeasibleSet, MultiobjectiveProblem, Objective
from core.verifier import MeritCache
from core.zoo import CLOSED_FORMS, default_zoo, negated_square_term, zero_convex

PRECISE = DualSolveConfig(gap_tol=1e-11, inner=InnerSolveConfig(tol=1e-12, max_iter=50000))


# === EXEMPLES DE RÉFÉRENCE ===

@pytest.mark.parametrize("ell", [1.0, 0.5, 2.0])
def test_abs_u_ell_matches_closed_form(builtin, cfg, ell):
    problem = builtin("paper-abs")
    closed_form = CLOSED_FORMS["abs_u_ell"]
    for x in np.linspace(-2.0, 2.0, 41):
        evaluation = eval_u_ell(problem, [x], ell, cfg)
        assert evaluation.value == pytest.approx(closed_form([x], ell), abs=1e-6), x


def test_abs_u_ell_reference_values(builtin, cfg):
    problem = builtin("paper-abs")
    values = [eval_u_ell(problem, [x], 1.0, cfg).value for x in (0.0, 0.5, 2.0)]
    assert values == pytest.approx([0.0, 0.375, 0.5], abs=1e-9)


@pytest.mark.parametrize("ell", [0.5, 1.0, 2.0])
def test_negsq_is_stationary_but_not_weakly_optimal(builtin, cfg, ell):
    problem = builtin("paper-negsq")
    assert abs(eval_w_ell(problem, [0.0], ell, cfg).value) <= 1e-8

    u0 = eval_u0(problem, [0.0], cfg)
    assert u0.diagnostics.route == "grid"
    assert u0.value >= 0.1


def test_level_bounded_example_has_identically_zero_u0(builtin, cfg):
    problem = builtin("paper-levelbound")
    for x in np.linspace(-3.0, 3.0, 21):
        evaluation = eval_u0(problem, [x], cfg)
        assert abs(evaluation.value) <= evaluation.diagnostics.grid_slack + cfg.eps_eval
        assert evaluation.is_zero


def test_u0_dual_route_on_strongly_convex_problem(builtin, cfg):
    problem = builtin("quad-pair-1d")
    evaluation = eval_u0(problem, [0.3], cfg)
    assert evaluation.diagnostics.route == "dual"
    assert evaluation.is_zero
    assert eval_u0(problem, [3.0], cfg).value > 10 * cfg.eps_eval


# === ÉQUIVALENCE AVEC L'ORACLE DE GRILLE ===

GRID_ELL = 1.0
GRID_POINTS_2D = 121


def _grid_points(entry, problem):
    known = entry.document.get('known', {})
    points = known.get('non_solution_points', []) + known.get('weak_pareto_points', [])
    if not points:
        lo, hi = problem.feasible_set.bounding_box
        middle = 0.5 * (lo + hi)
        points = [middle.tolist(), (middle + 0.2 * (hi - lo)).tolist()]
    return [np.asarray(p, dtype=float) for p in points]


def _grid_cases():
    cases = []
    zoo = default_zoo()
    for entry in zoo.entries():
        problem = zoo.get(entry.id)
        if problem.n > 2 or problem.feasible_set.bounding_box is None:
            continue
        kinds = [MeritKind.W_ELL]
        if problem.metadata.all_F_convex:
            kinds.append(MeritKind.U_ELL)
            if problem.metadata.all_strongly_convex:
                kinds.append(MeritKind.U0)
        cases.extend(pytest.param(entry.id, kind, id=f"{entry.id}-{kind.value}") for kind in kinds)
    return cases


@pytest.mark.parametrize("problem_id, kind", _grid_cases())
def test_dual_route_matches_grid_oracle(zoo, cfg, problem_id, kind):
    problem = zoo.get(problem_id)
    ell = 0.0 if kind is MeritKind.U0 else GRID_ELL
    grid = GRID_POINTS_2D if problem.n == 2 else None
    lo, hi = problem.feasible_set.bounding_box
    for x in _grid_points(zoo.entry(problem_id), problem):
        evaluation = evaluate_merit(problem, x, kind, ell, cfg)
        assert evaluation.diagnostics.route == "dual"
        reference = grid_oracle_search(problem, x, ell, kind is MeritKind.W_ELL, grid)
        # la grille ne voit que S ∩ boîte: elle minore toujours
        assert reference.value <= evaluation.value + evaluation.eps_eval, x
        y = evaluation.maximizer
        if np.all(y >= lo - 1e-9) and np.all(y <= hi + 1e-9):
            assert evaluation.value <= reference.value + reference.slack + evaluation.eps_eval, x


def test_grid_cases_cover_every_small_problem():
    pairs = {tuple(case.values) for case in _grid_cases()}
    for expected in [("composite-pair-1d", MeritKind.W_ELL), ("abs-pair-1d", MeritKind.U_ELL),
                     ("abs-pair-1d", MeritKind.W_ELL), ("l1-blocks-2d", MeritKind.U0),
                     ("quad-pair-2d", MeritKind.U_ELL), ("random-quad-2d", MeritKind.U0),
                     ("paper-levelbound", MeritKind.U_ELL), ("paper-levelbound", MeritKind.W_ELL)]:
        assert expected in pairs
    assert ("paper-negsq", MeritKind.U_ELL) not in pairs


def test_primal_value_bounded_by_fw_gap(builtin, cfg):
    problem = builtin("quad-pair-2d")
    x = [0.0, 1.5]
    evaluation = eval_u_ell(problem, x, 1.0, cfg)
    primal = primal_value(problem, x, evaluation)
    assert primal <= evaluation.value + 1e-9
    assert evaluation.value - primal <= evaluation.fw_gap + evaluation.eps_eval


def test_w_ell_matches_u_ell_without_smooth_part(builtin, cfg, rng):
    problem = builtin("paper-abs")
    for x in rng.uniform(-3.0, 3.0, 50):
        ell = float(rng.uniform(0.25, 4.0))
        w = eval_w_ell(problem, [x], ell, cfg)
        u = eval_u_ell(problem, [x], ell, cfg)
        assert abs(w.value - u.value) <= 2 * cfg.eps_eval

    pair = builtin("abs-pair-1d")
    for x in (-2.5, 0.4, 2.0):
        w = eval_w_ell(pair, [x], 1.0, cfg)
        u = eval_u_ell(pair, [x], 1.0, cfg)
        assert abs(w.value - u.value) <= 2 * cfg.eps_eval


# === DÉRIVÉES ===

def test_directional_derivatives_match_finite_differences(builtin):
    problem = builtin("quad-pair-1d")
    x, z, h = np.array([2.0]), np.array([3.0]), 1e-4

    analytic = directional_derivative_u_ell(problem, x, z, 1.0, PRECISE)
    numeric = (eval_u_ell(problem, x + h, 1.0, PRECISE).value - eval_u_ell(problem, x - h, 1.0, PRECISE).value) / (2 * h)
    assert analytic == pytest.approx(4.0 / 3.0, abs=1e-6)
    assert abs(analytic - numeric) <= 1e-4 * max(1.0, abs(numeric))

    analytic = directional_derivative_w_ell(problem, x, z, 1.0, PRECISE)
    numeric = (eval_w_ell(problem, x + h, 1.0, PRECISE).value - eval_w_ell(problem, x - h, 1.0, PRECISE).value) / (2 * h)
    assert analytic == pytest.approx(4.0, abs=1e-6)
    assert abs(analytic - numeric) <= 1e-4 * max(1.0, abs(numeric))


def test_zero_direction_gives_exact_zero(builtin):
    problem = builtin("quad-pair-2d")
    x = np.array([0.2, 0.4])
    assert directional_derivative_u_ell(problem, x, x.copy(), 1.0) == 0.0
    assert directional_derivative_w_ell(problem, x, x.copy(), 1.0) == 0.0


def test_gradients_of_smooth_merits(builtin):
    problem = builtin("quad-pair-2d")
    x = np.array([2.0, 0.5])
    h = 1e-5
    for gradient, evaluate in ((gradient_u_ell, eval_u_ell), (gradient_w_ell_smooth_part, eval_w_ell)):
        analytic = gradient(problem, x, 1.0, PRECISE)
        numeric = np.array([
            (evaluate(problem, x + h * e, 1.0, PRECISE).value - evaluate(problem, x - h * e, 1.0, PRECISE).value) / (2 * h)
            for e in np.eye(2)
        ])
        assert np.allclose(analytic, numeric, atol=1e-4)


def test_gradient_u_ell_requires_smooth_objectives(builtin):
    with pytest.raises(UnsupportedProblem):
        gradient_u_ell(builtin("composite-pair-1d"), [0.0], 1.0)


# === CERTIFICATS ET ERREURS ===

def test_pareto_certificates(builtin, cfg):
    negsq = builtin("paper-negsq")
    assert is_pareto_stationary(negsq, [0.0], 1.0, cfg)
    assert not is_weakly_pareto_optimal(negsq, [0.0], 1.0, cfg)

    pair = builtin("quad-pair-1d")
    assert is_weakly_pareto_optimal(pair, [0.3], 1.0, cfg)
    assert not is_pareto_stationary(pair, [2.0], 1.0, cfg)


def test_invalid_inputs(builtin, cfg):
    negsq = builtin("paper-negsq")
    with pytest.raises(InfeasiblePoint):
        eval_w_ell(negsq, [2.0], 1.0, cfg)
    with pytest.raises(InfeasiblePoint):
        eval_w_ell(negsq, [0.0, 0.0], 1.0, cfg)
    with pytest.raises(ValueError):
        eval_w_ell(negsq, [0.0], 0.0, cfg)
    with pytest.raises(ConvexityRequired):
        eval_u_ell(negsq, [0.0], 1.0, cfg)
    with pytest.raises(ValueError):
        MeritKind.parse("v_ell")


def test_u0_unsupported_without_grid_or_strong_convexity():
    problem = MultiobjectiveProblem(4, [Objective(negated_square_term(4), zero_convex(4))], FeasibleSet.reals(4))
    with pytest.raises(UnsupportedProblem):
        eval_u0(problem, np.zeros(4))


# === NON-CONVERGENCE DES SOLVEURS INTERNES ===

def _starved(max_iter):
    return DualSolveConfig(inner=InnerSolveConfig(max_iter=max_iter))


def _assert_partial(info, kind):
    best = info.value.best
    assert isinstance(best, MeritEvaluation)
    assert best.kind is kind
    assert not best.diagnostics.converged
    assert best.diagnostics.oracle_calls >= 1
    assert best.diagnostics.inner_iterations >= 1
    assert np.isfinite(best.value)
    assert np.isclose(best.dual_weights.w.sum(), 1.0)
    assert "solveur interne" in str(info.value)
    return best


def test_u_ell_inner_failure_returns_partial_evaluation(builtin):
    with pytest.raises(NotConverged) as info:
        eval_u_ell(builtin("quad-pair-1d"), [2.0], 1.0, _starved(1))
    best = _assert_partial(info, MeritKind.U_ELL)
    assert best.diagnostics.route == "dual"


def test_u0_inner_failure_returns_partial_evaluation(builtin):
    with pytest.raises(NotConverged) as info:
        eval_u0(builtin("random-quad-2d"), [3.0, -3.0], _starved(2))
    _assert_partial(info, MeritKind.U0)


def test_w_ell_iterative_prox_failure_returns_partial_evaluation(builtin):
    with pytest.raises(NotConverged) as info:
        eval_w_ell(builtin("abs-pair-1d"), [2.0], 1.0, _starved(1))
    best = _assert_partial(info, MeritKind.W_ELL)
    assert best.diagnostics.prox_strategy == "iterative"


def test_w_ell_records_iterative_prox_solves(builtin, cfg):
    evaluation = eval_w_ell(builtin("abs-pair-1d"), [2.0], 1.0, cfg)
    assert evaluation.diagnostics.prox_strategy == "iterative"
    assert evaluation.diagnostics.inner_iterations > 0
    assert evaluation.diagnostics.inner_max_residual <= cfg.inner.tol

    closed = eval_w_ell(builtin("paper-abs"), [2.0], 1.0, cfg)
    assert closed.diagnostics.inner_iterations == 0


def test_cache_keeps_partial_evaluation(builtin):
    cache = MeritCache(builtin("quad-pair-1d"), _starved(1))
    evaluation = cache.get(MeritKind.U_ELL, [2.0], 1.0)
    assert cache.unconverged == 1
    assert not evaluation.diagnostics.converged
