"""
tests/test_settings.py
======================
Paramètres numériques: défauts, fichier INI, surcharges de la ligne de commande
"""

import pytest

from core.constants import DEFAULT_GAP_TOL, DEFAULT_INNER_TOL
from core.settings_manager import SettingsManager


def test_defaults_without_file():
    sm = SettingsManager(None)
    assert sm.get_gap_tol() == DEFAULT_GAP_TOL
    assert sm.get_inner_tol() == DEFAULT_INNER_TOL
    assert sm.get_verify_ells() == (0.5, 1.0, 2.0)
    assert sm.get_seed() == 0
    assert sm.get_jobs() == 1
    assert sm.get_grid_points() is None
    assert sm.get_step_rule().kind == "backtracking"


def test_memory_values_without_file():
    sm = SettingsManager(None)
    sm.set_verify_ells([0.25, 4])
    sm.set_seed(12)
    assert sm.get_verify_ells() == (0.25, 4.0)
    assert sm.get_seed() == 12
    sm.reset_all()
    assert sm.get_seed() == 0


def test_ini_file_is_read(tmp_path):
    path = tmp_path / "merit.ini"
    path.write_text(
        "[solver]\ngap_tol=1e-6\nstep_rule=fixed\nstep_gamma=0.25\n"
        "[grid]\npoints=51\n"
        "[verify]\nells=0.25,1\nsamples=3\n"
        "[cli]\njobs=0\n",
        encoding="utf-8",
    )
    sm = SettingsManager(str(path))
    assert sm.get_gap_tol() == pytest.approx(1e-6)
    assert sm.get_grid_points() == 51
    assert sm.get_verify_ells() == (0.25, 1.0)
    assert sm.get_verify_samples() == 3
    assert sm.get_jobs() == 1
    rule = sm.get_step_rule()
    assert rule.kind == "fixed" and rule.gamma == pytest.approx(0.25)


def test_invalid_values_fall_back_to_defaults(tmp_path):
    path = tmp_path / "merit.ini"
    path.write_text("[solver]\ngap_tol=abc\nstep_rule=armijo\n[verify]\nells=x\n", encoding="utf-8")
    sm = SettingsManager(str(path))
    assert sm.get_gap_tol() == DEFAULT_GAP_TOL
    assert sm.get_step_rule().kind == "backtracking"
    assert sm.get_verify_ells() == (0.5, 1.0, 2.0)


def test_build_dual_config_with_overrides():
    sm = SettingsManager(None)
    sm.set_grid_points(101)
    cfg = sm.build_dual_config(gap_tol=1e-5, inner_tol=1e-9)
    assert cfg.gap_tol == 1e-5
    assert cfg.inner.tol == 1e-9
    assert cfg.grid_points == 101
    assert cfg.eps_eval == pytest.approx(10 * (1e-5 + 1e-9))

    default = sm.build_dual_config()
    assert default.gap_tol == DEFAULT_GAP_TOL


def test_export_import_roundtrip():
    source = SettingsManager(None)
    source.set_verify_samples(9)
    target = SettingsManager(None)
    target.import_settings({**source.export_settings(), "unknown/key": 1})
    assert target.get_verify_samples() == 9
    assert "unknown/key" not in target.export_settings()
