"""
core/logger.py
==============
Système de logging centralisé avec support CLI
"""

import logging
import os
import sys
from typing import Optional

from .constants import ENV_LOG_LEVEL, LOGGER_NAME


class LoggerSetup:
    """
    Configuration centralisée du système de logging.
    Les logs partent sur stderr: stdout est réservé aux CSV.
    """

    _instance: Optional['LoggerSetup'] = None
    _initialized: bool = False

    LEVELS = {
        'DEBUG': logging.DEBUG,
        'INFO': logging.INFO,
        'WARNING': logging.WARNING,
        'ERROR': logging.ERROR,
    }

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not LoggerSetup._initialized:
            self.logger = logging.getLogger(LOGGER_NAME)
            self.logger.setLevel(logging.WARNING)
            self.logger.propagate = True
            LoggerSetup._initialized = True

    def resolve_level(self, debug: bool = False) -> int:
        """
        Détermine le niveau de log: --debug, sinon MERIT_LOG, sinon WARNING.

        Args:
            debug: Drapeau --debug de la ligne de commande

        Returns:
            Niveau logging
        """
        if debug:
            return logging.DEBUG
        env_value = os.environ.get(ENV_LOG_LEVEL, '').strip().upper()
        return self.LEVELS.get(env_value, logging.WARNING)

    def setup_console_logging(self, debug: bool = False) -> None:
        """
        Configure le logging console avec format personnalisé.

        Args:
            debug: Active le mode DEBUG avec affichage détaillé
        """
        level = self.resolve_level(debug)
        self.logger.setLevel(level)

        # Éviter les doublons
        if not any(getattr(h, '_merit_console', False) for h in self.logger.handlers):
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler._merit_console = True
            console_handler.setFormatter(logging.Formatter(
                fmt='[%(levelname)-8s] [%(name)s] %(message)s'
            ))
            self.logger.addHandler(console_handler)

        for handler in self.logger.handlers:
            handler.setLevel(level)
            if getattr(handler, '_merit_console', False):
                # Flux courant: sys.stderr a pu être remplacé
                handler.setStream(sys.stderr)

        if level == logging.DEBUG:
            self.logger.debug("=" * 70)
            self.logger.debug("MODE DEBUG ACTIVÉ - Logging console démarré")
            self.logger.debug("=" * 70)

    def log_config(self, config: dict) -> None:
        """Log l'état de la configuration au démarrage."""
        self.logger.debug("[CONFIG] État de la configuration:")
        for key, value in config.items():
            self.logger.debug(f"  - {key}: {value}")

    def log_dual_solve(self, kind: str, ell: float, iterations: int, gap: float) -> None:
        """Log la fin d'une résolution duale (Frank–Wolfe)."""
        self.logger.debug(f"[DUAL] {kind} ℓ={ell:g}: {iterations} itération(s), gap={gap:.3e}")

    def log_inner_solve(self, solver: str, iterations: int, residual: float, converged: bool) -> None:
        """Log la fin d'une résolution interne."""
        state = "convergé" if converged else "NON convergé"
        self.logger.debug(f"[INNER] {solver}: {iterations} itération(s), résidu={residual:.3e} ({state})")

    def log_check_result(self, check_id: str, status: str, worst: float, samples: int) -> None:
        """Log le résultat agrégé d'un contrôle de propriété."""
        self.logger.info(f"[VERIFY] {check_id}: {status} (pire violation {worst:.3e}, {samples} échantillon(s))")

    def log_error(self, context: str, error: Exception) -> None:
        """Log une erreur avec stacktrace complète."""
        self.logger.error(f"[ERREUR] {context}: {error}", exc_info=True)

    def log_export(self, format_type: str, row_count: int, filepath: str) -> None:
        """Log une opération d'export."""
        self.logger.info(f"[REPORT] Export {format_type}: {row_count} ligne(s) -> {filepath}")

    @staticmethod
    def get_logger() -> logging.Logger:
        """Retourne l'instance du logger."""
        if LoggerSetup._instance is None:
            LoggerSetup()
        return LoggerSetup._instance.logger


# Fonction d'accès rapide
def get_logger() -> logging.Logger:
    """Fonction helper pour accéder au logger depuis n'importe où."""
    return LoggerSetup.get_logger()
