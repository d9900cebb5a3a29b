"""
core/frank_wolfe.py
===================
Minimisation d'une fonction convexe différentiable sur le simplexe Δᵐ
par Frank–Wolfe « pairwise » avec recherche linéaire exacte.

Le sommet de Frank–Wolfe (argmin du gradient, plus petit indice en cas
d'égalité) définit le gap certifié; le pas déplace la masse du sommet
« away » (argmax du gradient sur le support) vers ce sommet.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional

import numpy as np

from .constants import LINE_SEARCH_MAX_ITER
from .errors import NotConverged
from .logger import get_logger
from .simplex import SimplexWeights

logger = get_logger()


@dataclass
class DualPoint:
    """Évaluation de l'objectif dual en un point du simplexe."""
    weights: SimplexWeights
    value: float
    gradient: np.ndarray
    point: np.ndarray          # minimiseur interne associé (y_λ ou y_γ)
    payload: Any = None        # diagnostic du solveur interne


@dataclass
class FrankWolfeResult:
    """Sortie du solveur dual."""
    best: DualPoint
    gap: float
    iterations: int
    converged: bool
    oracle_calls: int
    gaps: List[float] = field(default_factory=list, repr=False)


def frank_wolfe_gap(point: DualPoint) -> float:
    """λᵀ∇φ(λ) − min_j ∂_jφ(λ) (≥ 0)."""
    grad = point.gradient
    return float(point.weights.w @ grad - grad.min())


def _step(weights: SimplexWeights, s: int, v: int, eta: float) -> SimplexWeights:
    arr = weights.as_array()
    arr[s] += eta
    arr[v] -= eta
    if arr[v] < 1e-15:
        arr[v] = 0.0
    return SimplexWeights.normalized(arr)


def minimize_on_simplex(oracle: Callable[[SimplexWeights], DualPoint], m: int, gap_tol: float,
                        max_iter: int, label: str = "dual") -> FrankWolfeResult:
    """
    Frank–Wolfe pairwise sur Δᵐ, départ au barycentre.

    Args:
        oracle: λ ↦ DualPoint (valeur, gradient, minimiseur interne)
        m: Dimension du simplexe
        gap_tol: Arrêt quand le gap de Frank–Wolfe ≤ gap_tol
        max_iter: Nombre maximal d'itérations
        label: Étiquette pour les logs

    Returns:
        FrankWolfeResult

    Raises:
        NotConverged: `best` porte le FrankWolfeResult non convergé
    """
    current = oracle(SimplexWeights.barycenter(m))
    calls = 1
    gaps = []
    line_tol = 0.5 * gap_tol

    for iteration in range(max_iter + 1):
        grad = current.gradient
        gap = frank_wolfe_gap(current)
        gaps.append(gap)
        if gap <= gap_tol:
            logger.debug(f"[DUAL] {label}: convergé en {iteration} itération(s), gap={gap:.3e}")
            return FrankWolfeResult(current, gap, iteration, True, calls, gaps)
        if iteration == max_iter:
            break

        s = int(np.argmin(grad))
        support = current.weights.support()
        v = support[int(np.argmax(grad[support]))]
        eta_max = current.weights[v]

        def slope(point: DualPoint) -> float:
            return float(point.gradient[s] - point.gradient[v])

        end = oracle(_step(current.weights, s, v, eta_max))
        calls += 1
        d_hi = slope(end)
        if d_hi <= 0.0:
            current = end
            continue

        # Illinois sur ψ'(η) = ∂_sφ − ∂_vφ, croissante par convexité
        lo, hi = 0.0, eta_max
        d_lo = slope(current)
        best = end if end.value < current.value else current
        side = 0
        for _ in range(LINE_SEARCH_MAX_ITER):
            eta = (lo * d_hi - hi * d_lo) / (d_hi - d_lo)
            eta = min(max(eta, lo), hi)
            trial = oracle(_step(current.weights, s, v, eta))
            calls += 1
            d_mid = slope(trial)
            if trial.value <= best.value:
                best = trial
            if abs(d_mid) <= line_tol or hi - lo <= 1e-15:
                best = trial
                break
            if d_mid < 0.0:
                lo, d_lo = eta, d_mid
                if side == -1:
                    d_hi *= 0.5
                side = -1
            else:
                hi, d_hi = eta, d_mid
                if side == 1:
                    d_lo *= 0.5
                side = 1
        current = best

    result = FrankWolfeResult(current, gaps[-1], max_iter, False, calls, gaps)
    logger.warning(f"[DUAL] {label}: non convergé après {max_iter} itérations (gap={gaps[-1]:.3e})")
    raise NotConverged(f"{label}: gap {gaps[-1]:.3e} > {gap_tol:.1e} après {max_iter} itérations", best=result)
