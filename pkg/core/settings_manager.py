"""
core/settings_manager.py
========================
Gestionnaire de paramètres avec QSettings (fichier INI optionnel)
"""

from typing import Optional

from PyQt6.QtCore import QSettings

from .constants import (
    APP_NAME, APP_ORGANIZATION, CHECK_TOLERANCE_FACTOR, DEFAULT_BACKTRACK_BETA, DEFAULT_BACKTRACK_C,
    DEFAULT_DUAL_MAX_ITER, DEFAULT_GAP_TOL, DEFAULT_INNER_MAX_ITER, DEFAULT_INNER_TOL, DEFAULT_VERIFY_SAMPLES,
)
from .inner_solver import InnerSolveConfig, StepRule
from .logger import get_logger
from .merit import DualSolveConfig


class SettingsManager:
    """
    Gestionnaire centralisé des paramètres numériques.

    Sans fichier, les valeurs par défaut s'appliquent et rien n'est écrit;
    avec un fichier, QSettings lit/écrit un INI.
    """

    # Valeurs par défaut
    DEFAULTS = {
        # Solveur dual
        'solver/gap_tol': DEFAULT_GAP_TOL,
        'solver/max_iter': DEFAULT_DUAL_MAX_ITER,

        # Solveur interne
        'solver/inner_tol': DEFAULT_INNER_TOL,
        'solver/inner_max_iter': DEFAULT_INNER_MAX_ITER,
        'solver/step_rule': 'backtracking',   # 'backtracking' ou 'fixed'
        'solver/step_gamma': 1.0,
        'solver/backtrack_beta': DEFAULT_BACKTRACK_BETA,
        'solver/backtrack_c': DEFAULT_BACKTRACK_C,

        # Oracle de grille (0 = résolution par défaut selon n)
        'grid/points': 0,

        # Vérification
        'verify/samples': DEFAULT_VERIFY_SAMPLES,
        'verify/ells': '0.5,1,2',
        'verify/tolerance_factor': CHECK_TOLERANCE_FACTOR,

        # CLI
        'cli/seed': 0,
        'cli/jobs': 1,
    }

    def __init__(self, settings_file: Optional[str] = None):
        """
        Initialise le gestionnaire.

        Args:
            settings_file: Chemin d'un fichier INI (optionnel).
                          Si None, seules les valeurs par défaut sont utilisées.
        """
        self.logger = get_logger()
        self.settings_file = settings_file
        self._memory = {}

        if settings_file:
            self.settings = QSettings(settings_file, QSettings.Format.IniFormat)
            self.logger.debug(f"[SETTINGS] Initialisé avec fichier: {settings_file}")
        else:
            self.settings = None
            self.logger.debug("[SETTINGS] Aucun fichier: valeurs par défaut")

    # === SOLVEURS ===

    def get_gap_tol(self) -> float:
        """Retourne la tolérance du gap de Frank–Wolfe."""
        return self._get('solver/gap_tol', float)

    def set_gap_tol(self, value: float):
        self._set('solver/gap_tol', value)

    def get_max_iter(self) -> int:
        return self._get('solver/max_iter', int)

    def set_max_iter(self, value: int):
        self._set('solver/max_iter', value)

    def get_inner_tol(self) -> float:
        """Retourne la tolérance du solveur interne."""
        return self._get('solver/inner_tol', float)

    def set_inner_tol(self, value: float):
        self._set('solver/inner_tol', value)

    def get_inner_max_iter(self) -> int:
        return self._get('solver/inner_max_iter', int)

    def set_inner_max_iter(self, value: int):
        self._set('solver/inner_max_iter', value)

    def get_step_rule(self) -> StepRule:
        """Construit la règle de pas ('fixed' ou 'backtracking')."""
        kind = self._get('solver/step_rule', str)
        if kind not in ('fixed', 'backtracking'):
            self.logger.warning(f"[SETTINGS] Règle de pas invalide: {kind}, utilisation de 'backtracking'")
            kind = 'backtracking'
        if kind == 'fixed':
            return StepRule.fixed(self._get('solver/step_gamma', float))
        return StepRule.backtracking(self._get('solver/backtrack_beta', float),
                                     self._get('solver/backtrack_c', float))

    def get_grid_points(self) -> Optional[int]:
        """Résolution de grille par axe (None = défaut selon n)."""
        value = self._get('grid/points', int)
        return value if value > 0 else None

    def set_grid_points(self, value: Optional[int]):
        self._set('grid/points', value or 0)

    # === VÉRIFICATION ===

    def get_verify_samples(self) -> int:
        return self._get('verify/samples', int)

    def set_verify_samples(self, value: int):
        self._set('verify/samples', value)

    def get_verify_ells(self) -> tuple:
        """Grille de ℓ de la vérification (liste 'a,b,c')."""
        raw = self._get('verify/ells', str)
        try:
            values = tuple(float(v) for v in raw.split(',') if v.strip())
        except ValueError:
            self.logger.warning(f"[SETTINGS] Grille de ℓ invalide: '{raw}', valeur par défaut")
            values = tuple(float(v) for v in self.DEFAULTS['verify/ells'].split(','))
        return values

    def set_verify_ells(self, ells):
        self._set('verify/ells', ','.join(format(float(v), 'g') for v in ells))

    def get_tolerance_factor(self) -> float:
        return self._get('verify/tolerance_factor', float)

    # === CLI ===

    def get_seed(self) -> int:
        return self._get('cli/seed', int)

    def set_seed(self, value: int):
        self._set('cli/seed', value)

    def get_jobs(self) -> int:
        return max(1, self._get('cli/jobs', int))

    def set_jobs(self, value: int):
        self._set('cli/jobs', value)

    # === CONSTRUCTION DES CONFIGURATIONS ===

    def build_inner_config(self) -> InnerSolveConfig:
        return InnerSolveConfig(
            tol=self.get_inner_tol(),
            max_iter=self.get_inner_max_iter(),
            step_rule=self.get_step_rule(),
        )

    def build_dual_config(self, gap_tol: Optional[float] = None, inner_tol: Optional[float] = None) -> DualSolveConfig:
        """
        Configuration du solveur dual, avec surcharges ponctuelles (options CLI).

        Args:
            gap_tol: Remplace solver/gap_tol si fourni
            inner_tol: Remplace solver/inner_tol si fourni
        """
        inner = self.build_inner_config()
        if inner_tol is not None:
            inner = inner.with_tol(inner_tol)
        return DualSolveConfig(
            gap_tol=gap_tol if gap_tol is not None else self.get_gap_tol(),
            max_iter=self.get_max_iter(),
            inner=inner,
            grid_points=self.get_grid_points(),
        )

    # === MÉTHODES PRIVÉES ===

    def _get(self, key: str, value_type: type):
        """
        Récupère une valeur (fichier, sinon mémoire, sinon défaut).

        Args:
            key: Clé du paramètre
            value_type: Type attendu (str, int, bool, float)

        Returns:
            Valeur du paramètre ou valeur par défaut
        """
        default = self._memory.get(key, self.DEFAULTS.get(key))
        value = self.settings.value(key, default) if self.settings is not None else default
        # Une liste 'a,b' non quotée d'un INI écrit à la main revient en QStringList
        if isinstance(value, (list, tuple)):
            value = ','.join(str(v) for v in value)

        if value_type == bool:
            if isinstance(value, str):
                return value.lower() in ('true', '1', 'yes')
            return bool(value)
        try:
            if value_type == int:
                return int(float(value)) if value not in (None, '') else 0
            if value_type == float:
                return float(value) if value not in (None, '') else 0.0
        except (TypeError, ValueError):
            self.logger.warning(f"[SETTINGS] Valeur invalide pour {key}: {value!r}, valeur par défaut")
            return value_type(self.DEFAULTS[key])
        return str(value) if value is not None else ''

    def _set(self, key: str, value):
        """
        Sauvegarde une valeur (fichier INI si configuré, sinon en mémoire).

        Args:
            key: Clé du paramètre
            value: Valeur à sauvegarder
        """
        if self.settings is None:
            self._memory[key] = value
        else:
            self.settings.setValue(key, value)
            self.settings.sync()
        self.logger.debug(f"[SETTINGS] Paramètre sauvegardé: {key}")

    # === UTILITAIRES ===

    def reset_all(self):
        """Réinitialise tous les paramètres aux valeurs par défaut."""
        self._memory.clear()
        if self.settings is not None:
            self.settings.clear()
            self.settings.sync()
        self.logger.debug("[SETTINGS] Tous les paramètres réinitialisés")

    def export_settings(self) -> dict:
        """Exporte tous les paramètres sous forme de dictionnaire."""
        exported = {}
        for key, default in self.DEFAULTS.items():
            exported[key] = self._get(key, type(default) if default is not None else str)
        self.logger.debug(f"[SETTINGS] {len(exported)} paramètres exportés")
        return exported

    def import_settings(self, settings_dict: dict):
        """
        Importe des paramètres depuis un dictionnaire (clés inconnues ignorées).

        Args:
            settings_dict: Dictionnaire de paramètres
        """
        imported = 0
        for key, value in settings_dict.items():
            if key in self.DEFAULTS:
                self._set(key, value)
                imported += 1
        self.logger.debug(f"[SETTINGS] {imported} paramètres importés")

    def describe(self) -> str:
        """Identifiant lisible de la source des paramètres."""
        return self.settings_file or f"{APP_ORGANIZATION}/{APP_NAME} (défauts)"
