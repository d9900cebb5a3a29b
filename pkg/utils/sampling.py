"""
utils/sampling.py
=================
Échantillonnage reproductible: points admissibles, anneaux, polylignes
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np


def sample_in_box(rng: np.random.Generator, lo: np.ndarray, hi: np.ndarray, count: int) -> np.ndarray:
    """Tirage uniforme de `count` points dans la boîte [lo, hi] (lignes)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    return lo + (hi - lo) * rng.random((count, lo.size))


def sample_feasible(problem, rng: np.random.Generator, count: int,
                    box: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> List[np.ndarray]:
    """
    Points admissibles: tirage dans la boîte englobante puis projection sur S.

    Args:
        problem: MultiobjectiveProblem
        rng: Générateur numpy
        count: Nombre de points
        box: Boîte d'échantillonnage (défaut: boîte englobante de S, sinon [-3, 3]ⁿ)

    Returns:
        Liste de points de S
    """
    if box is None:
        box = problem.feasible_set.sampling_box()
    raw = sample_in_box(rng, box[0], box[1], count)
    return [problem.feasible_set.project(row) for row in raw]


def sample_pairs(rng: np.random.Generator, n: int, count: int, scale: float = 3.0) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Paires (a, b) gaussiennes, utilisées pour les contrôles de non-expansivité."""
    a = scale * rng.standard_normal((count, n))
    b = scale * rng.standard_normal((count, n))
    return list(zip(a, b))


def ring_points(center: np.ndarray, radius: float, count: int) -> List[np.ndarray]:
    """
    Points à distance `radius` du centre.

    n = 1: les deux points ±radius; n = 2: `count` angles réguliers;
    n ≥ 3: ±radius sur chaque axe puis directions diagonales.
    """
    center = np.asarray(center, dtype=float)
    n = center.size
    if n == 1:
        return [center - radius, center + radius]
    if n == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return [center + radius * np.array([np.cos(a), np.sin(a)]) for a in angles]
    points = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = radius
        points.extend([center + e, center - e])
    diag = np.ones(n) * radius / np.sqrt(n)
    points.extend([center + diag, center - diag])
    return points


def sample_polyline(rng: np.random.Generator, vertices: Sequence[np.ndarray], count: int) -> List[np.ndarray]:
    """Points uniformes (en abscisse curviligne) sur une polyligne."""
    vertices = [np.asarray(v, dtype=float) for v in vertices]
    if len(vertices) == 1:
        return [vertices[0].copy() for _ in range(count)]
    lengths = np.array([np.linalg.norm(b - a) for a, b in zip(vertices[:-1], vertices[1:])])
    total = lengths.sum()
    if total == 0.0:
        return [vertices[0].copy() for _ in range(count)]
    cumulative = np.concatenate([[0.0], np.cumsum(lengths)])
    points = []
    for s in rng.random(count) * total:
        k = min(int(np.searchsorted(cumulative, s, side='right')) - 1, len(lengths) - 1)
        t = 0.0 if lengths[k] == 0 else (s - cumulative[k]) / lengths[k]
        points.append(vertices[k] + t * (vertices[k + 1] - vertices[k]))
    return points
