"""
core/solution_set.py
====================
Géométries d'ensembles de solutions connus (distance et échantillonnage).

Utilisées par le zoo pour annoter les problèmes et par le vérificateur
(bornes d'erreur, contrôles « zéro si et seulement si solution »).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from utils.sampling import sample_polyline


class SolutionSet:
    """Interface: distance euclidienne à l'ensemble et tirage de points."""

    kind = "abstract"

    def distance(self, x) -> float:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, count: int) -> List[np.ndarray]:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class PointSet(SolutionSet):
    """Ensemble fini de points."""

    kind = "points"

    def __init__(self, points: Sequence[Sequence[float]]):
        self.points = [np.asarray(p, dtype=float) for p in points]
        if not self.points:
            raise ValueError("Un ensemble de points ne peut pas être vide")

    def distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(min(np.linalg.norm(x - p) for p in self.points))

    def sample(self, rng, count):
        picks = rng.integers(0, len(self.points), size=count)
        return [self.points[int(k)].copy() for k in picks]

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'points': [p.tolist() for p in self.points]}


class Polyline(SolutionSet):
    """Ligne brisée (un segment en 1-D = un intervalle)."""

    kind = "polyline"

    def __init__(self, vertices: Sequence[Sequence[float]]):
        self.vertices = [np.asarray(v, dtype=float) for v in vertices]
        if not self.vertices:
            raise ValueError("Une polyligne doit avoir au moins un sommet")

    @staticmethod
    def _segment_distance(x, a, b) -> float:
        ab = b - a
        denom = float(np.dot(ab, ab))
        if denom == 0.0:
            return float(np.linalg.norm(x - a))
        t = min(1.0, max(0.0, float(np.dot(x - a, ab)) / denom))
        return float(np.linalg.norm(x - (a + t * ab)))

    def distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if len(self.vertices) == 1:
            return float(np.linalg.norm(x - self.vertices[0]))
        return min(self._segment_distance(x, a, b) for a, b in zip(self.vertices[:-1], self.vertices[1:]))

    def sample(self, rng, count):
        return sample_polyline(rng, self.vertices, count)

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'vertices': [v.tolist() for v in self.vertices]}


class Everywhere(SolutionSet):
    """Tout S est solution (distance nulle)."""

    kind = "everywhere"

    def __init__(self, feasible_set=None):
        self.feasible_set = feasible_set

    def distance(self, x) -> float:
        return 0.0

    def sample(self, rng, count):
        if self.feasible_set is None:
            raise ValueError("Échantillonnage impossible sans ensemble admissible")
        lo, hi = self.feasible_set.sampling_box()
        raw = lo + (hi - lo) * rng.random((count, lo.size))
        return [self.feasible_set.project(row) for row in raw]

    def to_dict(self) -> dict:
        return {'kind': self.kind}


class WeightedQuadraticCurve(SolutionSet):
    """
    Courbe des minimiseurs pondérés de deux quadratiques fortement convexes
    f_i(x) = ½(x − c_i)ᵀQ_i(x − c_i), paramétrée par t ∈ [0, 1]:
    x(t) = (tQ₁ + (1−t)Q₂)⁻¹ (tQ₁c₁ + (1−t)Q₂c₂).
    """

    kind = "weighted_quadratic_curve"
    GRID = 2001

    def __init__(self, Q1, c1, Q2, c2):
        self.Q1 = np.asarray(Q1, dtype=float)
        self.Q2 = np.asarray(Q2, dtype=float)
        self.c1 = np.asarray(c1, dtype=float)
        self.c2 = np.asarray(c2, dtype=float)
        self._ts = np.linspace(0.0, 1.0, self.GRID)
        self._nodes = np.array([self.point(t) for t in self._ts])

    def point(self, t: float) -> np.ndarray:
        matrix = t * self.Q1 + (1.0 - t) * self.Q2
        rhs = t * self.Q1 @ self.c1 + (1.0 - t) * self.Q2 @ self.c2
        return np.linalg.solve(matrix, rhs)

    def distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        gaps = np.linalg.norm(self._nodes - x, axis=1)
        k = int(np.argmin(gaps))
        lo = self._ts[max(k - 1, 0)]
        hi = self._ts[min(k + 1, self.GRID - 1)]
        refined = minimize_scalar(
            lambda t: float(np.linalg.norm(self.point(t) - x)),
            bounds=(lo, hi), method='bounded', options={'xatol': 1e-12},
        )
        return float(min(gaps[k], refined.fun))

    def sample(self, rng, count):
        return [self.point(t) for t in rng.random(count)]

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'Q1': self.Q1.tolist(), 'c1': self.c1.tolist(),
            'Q2': self.Q2.tolist(), 'c2': self.c2.tolist(),
        }


@dataclass
class KnownSolutions:
    """
    Annotations connues d'un problème.

    weak_pareto_points: points faiblement Pareto-optimaux
    stationary_points: points Pareto-stationnaires (pas forcément optimaux)
    non_solution_points: points ni stationnaires ni optimaux
    pareto_set: géométrie de l'ensemble de Pareto X* (oracle de distance)
    weak_pareto_set: géométrie de l'ensemble faiblement Pareto (échantillonnage)
    closed_forms: nom de mérite → identifiant de forme close
    identically_zero: mérites nuls partout sur S ('u0', 'u_ell', 'w_ell')
    """
    weak_pareto_points: List[np.ndarray] = field(default_factory=list)
    stationary_points: List[np.ndarray] = field(default_factory=list)
    non_solution_points: List[np.ndarray] = field(default_factory=list)
    pareto_set: Optional[SolutionSet] = None
    weak_pareto_set: Optional[SolutionSet] = None
    closed_forms: Dict[str, str] = field(default_factory=dict)
    identically_zero: Tuple[str, ...] = ()

    def solution_sampler(self) -> Optional[SolutionSet]:
        """Ensemble où tirer des solutions faibles (faible Pareto, sinon Pareto)."""
        return self.weak_pareto_set if self.weak_pareto_set is not None else self.pareto_set


def solution_set_from_dict(data: dict, feasible_set=None) -> SolutionSet:
    """Reconstruit une géométrie depuis sa forme JSON (voir docs/PROBLEM_SPEC.md)."""
    kind = data.get('kind')
    if kind == PointSet.kind:
        return PointSet(data['points'])
    if kind == Polyline.kind:
        return Polyline(data['vertices'])
    if kind == Everywhere.kind:
        return Everywhere(feasible_set)
    if kind == WeightedQuadraticCurve.kind:
        return WeightedQuadraticCurve(data['Q1'], data['c1'], data['Q2'], data['c2'])
    raise KeyError(kind)
