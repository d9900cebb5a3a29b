"""
workers/evaluation_worker.py
============================
Worker thread pour évaluer des lots de points (option --jobs)
"""

import time
from typing import Any, Callable, List, Sequence, Tuple

from PyQt6.QtCore import QCoreApplication, QThread, pyqtSignal

from core.logger import get_logger

# Application Qt minimale créée à la demande (threads hors interface)
_APP = None


class EvaluationWorker(QThread):
    """
    Worker thread traitant une tranche de tâches indexées.

    Les résultats sont conservés avec leur indice d'entrée pour que
    l'appelant restitue l'ordre d'origine quel que soit l'ordre de fin.
    """

    # Signaux émis
    point_done = pyqtSignal(int)       # Indice de la tâche terminée
    error_occurred = pyqtSignal(str)   # Erreur rencontrée

    def __init__(self, tasks: Sequence[Tuple[int, Any]], fn: Callable[[Any], Any]):
        """
        Initialise le worker.

        Args:
            tasks: Couples (indice, tâche)
            fn: Fonction appliquée à chaque tâche
        """
        super().__init__()
        self.logger = get_logger()
        self.tasks = list(tasks)
        self.fn = fn

        self._is_running = False
        self._results: List[Tuple[int, Any]] = []
        self._errors: List[Tuple[int, BaseException]] = []

    def run(self):
        """Traite les tâches dans le thread."""
        self._is_running = True
        start_time = time.time()
        try:
            for index, task in self.tasks:
                if not self._is_running:
                    self.logger.debug("[WORKER] Thread arrêté avant la fin du lot")
                    break
                try:
                    self._results.append((index, self.fn(task)))
                    self.point_done.emit(index)
                except Exception as e:
                    self.logger.error(f"[WORKER] Tâche {index}", exc_info=True)
                    self._errors.append((index, e))
                    self.error_occurred.emit(f"Tâche {index}: {e}")
            duration = time.time() - start_time
            self.logger.debug(f"[WORKER] {len(self._results)} tâche(s) en {duration:.2f}s")
        finally:
            self._is_running = False

    def stop(self):
        """Arrête le thread après la tâche en cours."""
        self._is_running = False
        self.logger.debug("[WORKER] Arrêt demandé")

    def get_results(self) -> List[Tuple[int, Any]]:
        """Retourne les couples (indice, résultat) accumulés."""
        return list(self._results)

    def get_errors(self) -> List[Tuple[int, BaseException]]:
        return list(self._errors)

    def is_running(self) -> bool:
        """Vérifie si le thread est en cours d'exécution."""
        return self._is_running


def run_in_workers(tasks: Sequence, fn: Callable[[Any], Any], jobs: int = 1) -> list:
    """
    Applique fn à chaque tâche, en parallèle sur `jobs` threads si jobs > 1.

    Args:
        tasks: Tâches à traiter
        fn: Fonction pure (lecture seule sur les données partagées)
        jobs: Nombre de threads

    Returns:
        Résultats dans l'ordre des tâches

    Raises:
        La première exception (par indice de tâche) levée par fn
    """
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]

    global _APP
    if QCoreApplication.instance() is None:
        _APP = QCoreApplication([])

    indexed = list(enumerate(tasks))
    jobs = min(jobs, len(tasks))
    workers = [EvaluationWorker(indexed[k::jobs], fn) for k in range(jobs)]
    for worker in workers:
        worker.start()
    for worker in workers:
        worker.wait()

    errors = sorted((e for w in workers for e in w.get_errors()), key=lambda item: item[0])
    if errors:
        raise errors[0][1]
    results = dict(r for w in workers for r in w.get_results())
    return [results[k] for k in range(len(tasks))]
