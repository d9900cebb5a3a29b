"""
core/errors.py
==============
Hiérarchie d'exceptions du toolkit.

Les couches numériques lèvent ces exceptions; les couches de frontière
(commandes CLI, rapports, workers) les interceptent et les convertissent
en codes de sortie ou en colonnes d'erreur.
"""

from typing import Any, Optional, Sequence


class MeritError(Exception):
    """Racine de toutes les erreurs du toolkit."""


# === MODÈLE DE PROBLÈME ===

class OracleInconsistent(MeritError):
    """Un oracle (gradient, prox, constante déclarée...) contredit l'échantillonnage."""

    def __init__(self, check: str, point: Optional[Sequence[float]], magnitude: float):
        self.check = check
        self.point = None if point is None else tuple(float(v) for v in point)
        self.magnitude = float(magnitude)
        super().__init__(
            f"Oracle incohérent ({check}): violation {self.magnitude:.3e} au point {self.point}"
        )


class InfeasiblePoint(MeritError, ValueError):
    """Le point fourni n'appartient pas à l'ensemble admissible S."""


# === PROX / SOLVEURS ===

class ProxUnavailable(MeritError):
    """Aucun opérateur proximal n'est disponible pour ce terme ou cette somme."""


class NotConverged(MeritError):
    """Le solveur a atteint sa limite d'itérations; `best` porte le meilleur itéré."""

    def __init__(self, message: str, best: Any = None):
        self.best = best
        super().__init__(message)


class ConvexityRequired(MeritError):
    """L'opération exige des F_i déclarées convexes."""


class Unbounded(MeritError):
    """Les itérés divergent: la scalarisation n'a pas de minimiseur."""


class DimensionTooLarge(MeritError):
    """L'oracle de grille est limité à n ≤ 3."""


class UnsupportedProblem(MeritError):
    """Aucune route de calcul n'est applicable à ce problème."""


class HessianRequired(MeritError):
    """Les hessiennes de toutes les f_i sont nécessaires."""


# === VÉRIFICATION ===

class MetadataMissing(MeritError):
    """Les constantes déclarées (μ, σ, L) nécessaires au contrôle sont absentes."""


class DistanceOracleMissing(MeritError):
    """Le problème ne fournit pas de distance à l'ensemble de Pareto."""


# === ZOO / FORMAT JSON ===

class ParseError(MeritError):
    """Document ProblemSpec mal formé."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"ligne {line}")
        if field is not None:
            location.append(f"champ '{field}'")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")


class UnknownKind(ParseError):
    """Type ('kind') inconnu dans un document ProblemSpec."""


class InconsistentDimensions(ParseError):
    """Dimensions incompatibles (ou matrice Q non symétrique)."""


class UnknownId(MeritError):
    """Identifiant de problème intégré ou d'objectif custom inconnu."""
