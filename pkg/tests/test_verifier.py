"""
tests/test_verifier.py
======================
Vérificateur de propriétés: contrôles unitaires, sondes, suite complète, rapports
"""

import numpy as np
import pytest

from core.errors import DistanceOracleMissing, MetadataMissing
from core.merit import MeritKind
from core.verifier import (
    CSV_HEADER, CheckId, PropertyVerifier, SamplePlan, TheoremCheck, check_between, check_error_bound,
    check_inner_scaling, default_suite, error_bound_constant, kappa, probe_level_boundedness, run_all,
)
from core.zoo import load_spec
from utils.sampling import sample_feasible

TOLERANCE_FACTOR = 10.0


def test_kappa_branches():
    assert kappa(4.0, 1.0) == pytest.approx(1.5)
    assert kappa(4.0, 3.0) == pytest.approx(16.0 / 24.0)
    # continuité au changement de branche
    assert kappa(4.0, 2.0) == pytest.approx(0.5 * (4.0 - 2.0))


def test_error_bound_constants(builtin):
    problem = builtin("quad-pair-1d")
    assert error_bound_constant(problem, MeritKind.W_ELL, 1.0) == pytest.approx(1.5)
    assert error_bound_constant(problem, MeritKind.U_ELL, 0.5) == pytest.approx(0.75)
    assert error_bound_constant(problem, MeritKind.U0, 1.0) == pytest.approx(1.0)
    with pytest.raises(MetadataMissing):
        error_bound_constant(builtin("paper-abs"), MeritKind.U_ELL, 1.0)


def test_check_error_bound_requires_distance_oracle(builtin):
    with pytest.raises(DistanceOracleMissing):
        check_error_bound(builtin("paper-negsq"), [0.5], MeritKind.W_ELL, 1.0)


# === INÉGALITÉS ===

@pytest.mark.parametrize("problem_id", ["quad-pair-1d", "quad-pair-2d", "random-quad-2d", "composite-pair-1d"])
def test_between_inequalities_hold(builtin, cfg, problem_id):
    problem = builtin(problem_id)
    points = sample_feasible(problem, np.random.default_rng(5), 6)
    for x in points:
        for ell in (0.5, 1.0, 2.0):
            assert check_between(problem, x, ell, cfg) <= TOLERANCE_FACTOR * cfg.eps_eval


def test_between_requires_constants(builtin, cfg):
    with pytest.raises(MetadataMissing):
        check_between(builtin("paper-abs"), [0.5], 1.0, cfg, branch="lipschitz")


def test_inner_scaling_random_draws(zoo, cfg, rng):
    ids = ["quad-pair-1d", "quad-pair-2d", "paper-abs", "composite-pair-1d", "random-quad-2d"]
    problems = [zoo.get(i) for i in ids]
    samples = {p.name: sample_feasible(p, np.random.default_rng(7), 20) for p in problems}
    for _ in range(100):
        problem = problems[int(rng.integers(len(problems)))]
        x = samples[problem.name][int(rng.integers(20))]
        ell = float(rng.uniform(0.25, 2.0))
        r = ell * float(rng.uniform(1.0, 4.0))
        for kind in (MeritKind.W_ELL, MeritKind.U_ELL):
            assert check_inner_scaling(problem, x, ell, r, cfg, kind) <= TOLERANCE_FACTOR * cfg.eps_eval


def test_inner_scaling_rejects_r_below_ell(builtin, cfg):
    with pytest.raises(ValueError):
        check_inner_scaling(builtin("quad-pair-1d"), [0.0], 2.0, 1.0, cfg)


@pytest.mark.parametrize("problem_id", ["quad-pair-1d", "quad-pair-2d"])
@pytest.mark.parametrize("ell", [1.0, 3.0])
def test_error_bound_for_both_kappa_branches(builtin, cfg, problem_id, ell):
    problem = builtin(problem_id)
    points = sample_feasible(problem, np.random.default_rng(11), 20)
    tolerance = TOLERANCE_FACTOR * cfg.eps_eval
    for x in points:
        assert check_error_bound(problem, x, MeritKind.W_ELL, ell, cfg) <= tolerance
        assert check_error_bound(problem, x, MeritKind.U_ELL, ell, cfg) <= tolerance
    for x in points[:5]:
        assert check_error_bound(problem, x, MeritKind.U0, 0.0, cfg) <= tolerance


# === SONDES ===

def test_probe_bounded_quadratics(builtin, cfg):
    report = probe_level_boundedness(builtin("quad-pair-1d"), MeritKind.W_ELL, 1.0, cfg=cfg)
    assert report.expectation == "bounded"
    assert report.verdict == "PASS"
    assert report.outer_min > 1.0
    assert report.largest_sublevel_radius[0.1] is not None


def test_probe_persistent_zero_merit(builtin, cfg):
    report = probe_level_boundedness(builtin("paper-levelbound"), MeritKind.U0, cfg=cfg, threshold_grid=(0.1,))
    assert report.expectation == "persistent"
    assert report.verdict == "PASS"
    assert report.largest_sublevel_radius[0.1] == max(report.radii)


def test_probe_without_assumptions_is_informational(builtin, cfg):
    report = probe_level_boundedness(builtin("paper-negsq"), MeritKind.W_ELL, 1.0, cfg=cfg)
    assert report.verdict == "INFO"


# === SUITE ===

def test_check_id_parse():
    assert CheckId.parse("error_bound_w") is CheckId.ERROR_BOUND_W
    assert len(default_suite()) == 17
    with pytest.raises(ValueError):
        CheckId.parse("BETWEEN_EVERYTHING")


def test_sample_plan_validation():
    with pytest.raises(ValueError):
        SamplePlan(points=0)
    with pytest.raises(ValueError):
        SamplePlan(ells=(1.0, -1.0))


def test_zero_iff_on_catalogued_problems(zoo, cfg):
    problems = [zoo.get(i) for i in ("quad-pair-1d", "composite-pair-1d", "paper-abs", "paper-negsq")]
    checks = [CheckId.IFF_WEAK_PARETO_U0, CheckId.IFF_WEAK_PARETO_UL, CheckId.IFF_STATIONARY_WL]
    report = PropertyVerifier(cfg, SamplePlan(points=20, seed=2)).run(problems, checks)
    assert report.passed, report.render_text()
    assert all(report.outcome(c).samples > 0 for c in checks)


def test_error_bound_w_on_quadratic_family(zoo, cfg):
    report = PropertyVerifier(cfg, SamplePlan(points=10, seed=0)).run([zoo.get("random-quad-2d")],
                                                                        [CheckId.ERROR_BOUND_W])
    assert report.outcome(CheckId.ERROR_BOUND_W).status == "PASS"


def test_corrupted_metadata_fails_with_witness(corrupted_spec_text, cfg):
    problem = load_spec(corrupted_spec_text)
    report = run_all([TheoremCheck(CheckId.BETWEEN_LIPSCHITZ), TheoremCheck(CheckId.NONNEG_WL)], [problem], cfg,
                     SamplePlan(points=12, seed=0))
    outcome = report.outcome(CheckId.BETWEEN_LIPSCHITZ)
    assert outcome.status == "FAIL"
    assert outcome.witness.problem == "corrupted-lipschitz"
    assert outcome.worst_violation > outcome.tolerance
    assert report.outcome(CheckId.NONNEG_WL).status == "PASS"
    assert not report.passed
    assert "[FAIL] BETWEEN_LIPSCHITZ" in report.render_text()


def test_reports_are_deterministic(zoo, cfg):
    problems = [zoo.get("quad-pair-1d"), zoo.get("paper-abs")]
    plan = SamplePlan(points=4, seed=9)
    first = run_all(default_suite(), problems, cfg, plan)
    second = run_all(default_suite(), [zoo.get("quad-pair-1d"), zoo.get("paper-abs")], cfg, plan)
    assert first.csv_rows() == second.csv_rows()
    assert first.render_text() == second.render_text()
    assert first.csv_rows()[0] == CSV_HEADER
    assert len(first.csv_rows()) == 18


def test_skipped_checks_carry_notes(builtin, cfg):
    report = run_all([TheoremCheck(CheckId.REMARK_W_EQUALS_U)], [builtin("quad-pair-1d")], cfg, SamplePlan(points=2))
    outcome = report.outcome(CheckId.REMARK_W_EQUALS_U)
    assert outcome.status == "SKIP"
    assert outcome.notes and "quad-pair-1d" in outcome.notes[0]
    assert report.passed


@pytest.mark.slow
def test_default_suite_passes_on_default_zoo(zoo, cfg):
    problems = [zoo.get(i) for i in zoo.ids()]
    report = PropertyVerifier(cfg, SamplePlan(seed=0)).run(problems)
    assert report.passed, report.render_text()
