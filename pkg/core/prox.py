"""
core/prox.py
============
Opérateurs proximaux en forme close, projections et enveloppe de Moreau.

Convention unique: `t` est l'échelle du terme quadratique, prox_{t·g}(x)
minimise g(y) + ‖x − y‖² / (2t). Pour les duals, t = 1/ℓ.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .constants import INFINITE_VALUE
from .errors import NotConverged, ProxUnavailable
from .logger import get_logger
from .simplex import SimplexWeights

logger = get_logger()


def _check_scale(t: float) -> float:
    t = float(t)
    if not t > 0.0:
        raise ValueError(f"L'échelle du prox doit être > 0 (reçu {t})")
    return t


# === PROX ÉLÉMENTAIRES ===

def prox_zero(x, t: float) -> np.ndarray:
    """prox de g = 0: l'identité."""
    _check_scale(t)
    return np.array(x, dtype=float)


def prox_abs(x, t: float) -> np.ndarray:
    """
    Seuillage doux: sign(x)·max(|x| − t, 0), coordonnée par coordonnée.

    C'est le prox de t·‖·‖₁ (et de t·|·| en dimension 1).
    """
    t = _check_scale(t)
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def prox_weighted_l1(x, t: float, weights, center=None) -> np.ndarray:
    """prox de y ↦ Σ_j w_j |y_j − c_j| (poids nuls autorisés)."""
    t = _check_scale(t)
    x = np.asarray(x, dtype=float)
    center = np.zeros_like(x) if center is None else np.asarray(center, dtype=float)
    shifted = x - center
    return center + np.sign(shifted) * np.maximum(np.abs(shifted) - t * np.asarray(weights, dtype=float), 0.0)


# === PROJECTIONS ===

def project_simplex(v) -> SimplexWeights:
    """
    Projection euclidienne sur Δᵐ par tri et seuillage.

    Args:
        v: Vecteur de ℝᵐ (m ≥ 1)

    Returns:
        SimplexWeights le plus proche de v
    """
    v = np.asarray(v, dtype=float).ravel()
    if v.size < 1:
        raise ValueError("project_simplex attend m ≥ 1")
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u) - 1.0
    ranks = np.arange(1, v.size + 1)
    rho = int(np.nonzero(u - cumulative / ranks > 0)[0][-1])
    theta = cumulative[rho] / (rho + 1)
    return SimplexWeights.normalized(np.maximum(v - theta, 0.0))


def project_box(x, lo, hi) -> np.ndarray:
    """Projection sur la boîte [lo, hi] (bornes infinies autorisées)."""
    return np.clip(np.asarray(x, dtype=float), np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))


def project_ball(x, center, radius: float) -> np.ndarray:
    """Projection sur la boule fermée B(center, radius)."""
    x = np.asarray(x, dtype=float)
    center = np.asarray(center, dtype=float)
    offset = x - center
    norm = float(np.linalg.norm(offset))
    if norm <= radius:
        return x.copy()
    return center + offset * (radius / norm)


# === ENVELOPPE DE MOREAU ===

def moreau_envelope(g, x, t: float) -> Tuple[float, np.ndarray]:
    """
    Enveloppe de Moreau E_{t·g}(x) = min_y g(y) + ‖x − y‖² / (2t).

    Args:
        g: ConvexTerm (doit exposer un prox)
        x: Point
        t: Échelle > 0

    Returns:
        (valeur, minimiseur prox_{t·g}(x))
    """
    t = _check_scale(t)
    if getattr(g, 'prox', None) is None:
        raise ProxUnavailable(f"Le terme '{getattr(g, 'kind', '?')}' ne fournit pas de prox")
    x = np.asarray(x, dtype=float)
    y = np.asarray(g.prox(x, t), dtype=float)
    value = g.evaluate(y) + float(np.dot(x - y, x - y)) / (2.0 * t)
    return float(value), y


# === CATALOGUE ===

@dataclass(frozen=True)
class ProxCatalogEntry:
    """Fonction convexe de référence avec son prox en forme close."""
    name: str
    prox: Callable[[np.ndarray, float], np.ndarray]
    eval: Callable[[np.ndarray], float]


def catalog(n: int) -> Dict[str, ProxCatalogEntry]:
    """
    Catalogue des prox en forme close pour la dimension n.

    Returns:
        Dictionnaire nom → entrée (zero, abs, weighted_l1, box_indicator, ball_indicator)
    """
    weights = np.linspace(0.5, 2.0, n)
    center = np.linspace(-0.5, 0.5, n)
    lo, hi = -np.ones(n), np.ones(n)

    def box_eval(y):
        return 0.0 if np.all(y >= lo - 1e-12) and np.all(y <= hi + 1e-12) else INFINITE_VALUE

    def ball_eval(y):
        return 0.0 if np.linalg.norm(y) <= 1.0 + 1e-12 else INFINITE_VALUE

    entries = [
        ProxCatalogEntry('zero', prox_zero, lambda y: 0.0),
        ProxCatalogEntry('abs', prox_abs, lambda y: float(np.sum(np.abs(y)))),
        ProxCatalogEntry(
            'weighted_l1',
            lambda y, t: prox_weighted_l1(y, t, weights, center),
            lambda y: float(np.sum(weights * np.abs(np.asarray(y) - center))),
        ),
        ProxCatalogEntry('box_indicator', lambda y, t: project_box(y, lo, hi), box_eval),
        ProxCatalogEntry('ball_indicator', lambda y, t: project_ball(y, np.zeros(n), 1.0), ball_eval),
    ]
    return {entry.name: entry for entry in entries}


# === PROX D'UNE SOMME PONDÉRÉE ===

class ProxStrategy(Enum):
    """Stratégies de calcul de prox_{t(Σ w_i g_i + δ_S)}, testées dans cet ordre."""
    IDENTICAL = "identical"
    ZERO = "zero"
    DISJOINT_BLOCKS = "disjoint_blocks"
    ITERATIVE = "iterative"


def _active_terms(g_list: Sequence, weights: SimplexWeights) -> Tuple[list, np.ndarray]:
    if len(g_list) != weights.m:
        raise ValueError(f"{len(g_list)} terme(s) pour {weights.m} poids")
    active = [i for i in range(weights.m) if weights[i] > 0.0]
    return [g_list[i] for i in active], np.array([weights[i] for i in active])


def _blocks_disjoint(terms: Sequence) -> bool:
    seen = set()
    for g in terms:
        if g.block is None:
            return False
        block = set(g.block)
        if seen & block:
            return False
        seen |= block
    return True


def select_prox_strategy(g_list: Sequence, weights: SimplexWeights, feasible_set=None) -> ProxStrategy:
    """
    Choisit la stratégie (première règle applicable), sur les seuls termes de poids > 0.

    Args:
        g_list: Termes convexes g_i
        weights: Poids du simplexe
        feasible_set: Ensemble S (None = ℝⁿ)

    Returns:
        ProxStrategy retenue
    """
    terms, _ = _active_terms(g_list, weights)
    whole = feasible_set is None or feasible_set.is_whole_space
    if all(g.key == terms[0].key for g in terms):
        g = terms[0]
        if g.is_zero or whole or (g.separable and feasible_set.kind == 'box'):
            return ProxStrategy.IDENTICAL
    if all(g.is_zero for g in terms):
        return ProxStrategy.ZERO
    if whole and _blocks_disjoint(terms):
        return ProxStrategy.DISJOINT_BLOCKS
    return ProxStrategy.ITERATIVE


def weighted_sum_prox(g_list: Sequence, weights: SimplexWeights, x, t: float,
                      feasible_set=None, inner_cfg=None, allow_iterative: bool = True,
                      strict: bool = False, on_solve: Optional[Callable] = None) -> np.ndarray:
    """
    prox de t·(Σ w_i g_i + δ_S) au point x.

    Args:
        g_list: Termes convexes g_i (ConvexTerm)
        weights: Poids λ ou γ
        x: Point
        t: Échelle > 0
        feasible_set: Ensemble S (None = ℝⁿ)
        inner_cfg: InnerSolveConfig pour la stratégie itérative
        allow_iterative: Si False, lève ProxUnavailable au lieu d'itérer
        strict: Si True, un prox itératif non convergé lève NotConverged
        on_solve: Appelé avec l'InnerSolution de chaque résolution itérative

    Returns:
        Le point prox

    Raises:
        NotConverged: (strict) `best` porte l'InnerSolution non convergée
    """
    t = _check_scale(t)
    x = np.asarray(x, dtype=float)
    strategy = select_prox_strategy(g_list, weights, feasible_set)
    terms, w = _active_terms(g_list, weights)
    scale = t * float(w.sum())

    def project(y):
        return y if feasible_set is None else feasible_set.project(y)

    if strategy in (ProxStrategy.IDENTICAL, ProxStrategy.ZERO):
        g = terms[0]
        if g.is_zero:
            return project(x.copy())
        if g.prox is None:
            raise ProxUnavailable(f"Le terme '{g.kind}' ne fournit pas de prox")
        return project(np.asarray(g.prox(x, scale), dtype=float))

    if strategy is ProxStrategy.DISJOINT_BLOCKS:
        y = x.copy()
        for g, wi in zip(terms, w):
            if g.is_zero or not g.block:
                continue
            if g.prox is None:
                raise ProxUnavailable(f"Le terme '{g.kind}' ne fournit pas de prox")
            block = list(g.block)
            y[block] = np.asarray(g.prox(x, t * wi), dtype=float)[block]
        return y

    if not allow_iterative:
        raise ProxUnavailable("Aucune forme close pour cette somme pondérée et le solveur itératif est désactivé")

    # Import local: inner_solver dépend lui-même de ce module
    from .inner_solver import InnerSolveConfig, solve_weighted_prox
    cfg = inner_cfg if inner_cfg is not None else InnerSolveConfig()
    solution = solve_weighted_prox(terms, w, x, t, feasible_set, cfg)
    if on_solve is not None:
        on_solve(solution)
    if not solution.converged:
        if strict:
            raise NotConverged(
                f"prox-somme: {solution.iterations} itérations, résidu {solution.residual:.3e}", best=solution
            )
        logger.warning(f"[PROX] Prox itératif non convergé (résidu {solution.residual:.3e})")
    return solution.point
