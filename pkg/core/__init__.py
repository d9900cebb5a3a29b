"""
core/__init__.py
================
Package core - Modèle de problème, prox, solveurs, fonctions de mérite et vérification
"""

from .logger import LoggerSetup, get_logger
from .errors import MeritError
from .problem import MultiobjectiveProblem, validate_problem
from .merit import DualSolveConfig, MeritEvaluation, MeritKind, eval_u0, eval_u_ell, eval_w_ell, evaluate_merit
from .verifier import CheckId, PropertyVerifier, SamplePlan, VerificationReport, run_all
from .zoo import ProblemZoo, builtin, default_zoo, load_spec, serialize
from .settings_manager import SettingsManager
from .report_manager import ReportManager

__all__ = [
    'LoggerSetup',
    'get_logger',
    'MeritError',
    'MultiobjectiveProblem',
    'validate_problem',
    'DualSolveConfig',
    'MeritEvaluation',
    'MeritKind',
    'eval_u0',
    'eval_u_ell',
    'eval_w_ell',
    'evaluate_merit',
    'CheckId',
    'PropertyVerifier',
    'SamplePlan',
    'VerificationReport',
    'run_all',
    'ProblemZoo',
    'builtin',
    'default_zoo',
    'load_spec',
    'serialize',
    'SettingsManager',
    'ReportManager'
]
