"""
core/main_controller.py
=======================
Contrôleur principal - Orchestration (problèmes, évaluations, vérification)
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import MeritError
from .logger import LoggerSetup, get_logger
from .merit import DualSolveConfig, MeritEvaluation, MeritKind, evaluate_merit
from .report_manager import ReportManager
from .settings_manager import SettingsManager
from .verifier import CheckId, PropertyVerifier, SamplePlan, VerificationReport
from .zoo import ProblemZoo, ZooEntry, default_zoo, load_spec
from workers.evaluation_worker import run_in_workers


@dataclass
class EvalRow:
    """Une évaluation (point, genre, ℓ) ou son erreur."""
    index: int
    x: np.ndarray
    kind: MeritKind
    ell: float
    evaluation: Optional[MeritEvaluation] = None
    error: str = ""

    @property
    def value(self) -> Optional[float]:
        return None if self.evaluation is None else self.evaluation.value


class MeritController:
    """
    Contrôleur principal de l'outil.

    Responsabilités:
    - Chargement des problèmes (zoo intégré ou document JSON)
    - Configuration des solveurs depuis les paramètres
    - Évaluations ordonnées, en parallèle selon `jobs`
    - Exécution de la vérification
    """

    def __init__(self, settings_file: Optional[str] = None, jobs: Optional[int] = None,
                 zoo: Optional[ProblemZoo] = None):
        """
        Initialise le contrôleur.

        Args:
            settings_file: Fichier INI de paramètres (optionnel)
            jobs: Nombre de threads (défaut: paramètre cli/jobs)
            zoo: Registre de problèmes (défaut: zoo intégré)
        """
        self.logger = get_logger()
        self.settings_manager = SettingsManager(settings_file)
        self.report_manager = ReportManager()
        self.zoo = zoo or default_zoo()
        self.jobs = jobs if jobs is not None else self.settings_manager.get_jobs()
        LoggerSetup().log_config({'settings': self.settings_manager.describe(), 'jobs': self.jobs})
        self.logger.debug("[CONTROLLER] Initialisé")

    # === PROBLÈMES ===

    def load_problem(self, builtin: Optional[str] = None, spec_path: Optional[str] = None,
                     validate: bool = False, seed: int = 0):
        """
        Charge un problème intégré ou un document ProblemSpec.

        Raises:
            UnknownId, ParseError, UnknownKind, InconsistentDimensions, OracleInconsistent
            OSError: document illisible
        """
        if builtin:
            problem = self.zoo.get(builtin)
        else:
            text = Path(spec_path).read_text(encoding='utf-8')
            problem = load_spec(text)
            if not problem.name or problem.name == 'problem':
                problem.name = Path(spec_path).stem
        if validate:
            from .problem import validate_problem
            validate_problem(problem, seed=seed)
        self.logger.info(f"[CONTROLLER] Problème '{problem.name}' (n={problem.n}, m={problem.m})")
        return problem

    def zoo_entries(self) -> List[ZooEntry]:
        return self.zoo.entries()

    def dual_config(self, gap_tol: Optional[float] = None, inner_tol: Optional[float] = None) -> DualSolveConfig:
        return self.settings_manager.build_dual_config(gap_tol, inner_tol)

    def _runner(self) -> Callable[[list, Callable], list]:
        jobs = self.jobs
        return lambda tasks, fn: run_in_workers(tasks, fn, jobs)

    # === ÉVALUATIONS ===

    def evaluate_points(self, problem, points: Sequence[np.ndarray], kind: MeritKind, ells: Sequence[float],
                        cfg: Optional[DualSolveConfig] = None) -> List[EvalRow]:
        """
        Une ligne par (point, ℓ), ordonnée par indice de point puis ℓ.
        Les erreurs d'évaluation deviennent des lignes avec colonne d'erreur.
        """
        cfg = cfg or self.dual_config()
        tasks = [(k, np.asarray(x, dtype=float), ell) for k, x in enumerate(points) for ell in ells]

        def evaluate(task) -> EvalRow:
            index, x, ell = task
            try:
                return EvalRow(index, x, kind, ell, evaluate_merit(problem, x, kind, ell, cfg))
            except (MeritError, ValueError) as e:
                LoggerSetup().log_error(f"{kind.value} au point {index}", e)
                best = getattr(e, 'best', None)
                evaluation = best if isinstance(best, MeritEvaluation) else None
                return EvalRow(index, x, kind, ell, evaluation, f"{type(e).__name__}: {e}")

        return run_in_workers(tasks, evaluate, self.jobs)

    def sweep(self, problem, points, kind: MeritKind, ells: Sequence[float],
              cfg: Optional[DualSolveConfig] = None) -> List[EvalRow]:
        """Balayage en ℓ croissant pour chaque point (valeurs attendues décroissantes)."""
        return self.evaluate_points(problem, points, kind, sorted(ells), cfg)

    def trace(self, problem, iterates, kind: MeritKind, ell: float,
              cfg: Optional[DualSolveConfig] = None) -> List[EvalRow]:
        """Mérite le long d'une suite d'itérés produite à l'extérieur."""
        return self.evaluate_points(problem, iterates, kind, [ell], cfg)

    # === VÉRIFICATION ===

    def verify(self, problems: Sequence, checks: Optional[Sequence[CheckId]] = None,
               plan: Optional[SamplePlan] = None, cfg: Optional[DualSolveConfig] = None) -> VerificationReport:
        """Exécute la suite (ou la sélection `checks`) sur les problèmes donnés."""
        sm = self.settings_manager
        plan = plan or SamplePlan(
            problems=tuple(p.name for p in problems),
            points=sm.get_verify_samples(),
            ells=sm.get_verify_ells(),
            seed=sm.get_seed(),
        )
        verifier = PropertyVerifier(cfg or self.dual_config(), plan, self._runner(),
                                    tolerance_factor=sm.get_tolerance_factor())
        return verifier.run(problems, list(checks) if checks else None)
