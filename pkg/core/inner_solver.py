"""
core/inner_solver.py
====================
Solveurs internes des reformulations duales:

- prox itératif d'une somme pondérée (algorithme parallèle de type Dykstra)
- min_{y∈S} Σλ_i F_i(y) + (ℓ/2)‖c − y‖² par gradient proximal
- minimisation globale de la scalarisation pondérée Σλ_i F_i sur S
- oracle de grille (force brute, n ≤ 3) pour les définitions primales
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .constants import (
    DEFAULT_BACKTRACK_BETA, DEFAULT_BACKTRACK_C, DEFAULT_GRID_POINTS, DEFAULT_INNER_MAX_ITER,
    DEFAULT_INNER_TOL, INFINITE_VALUE, MAX_GRID_DIMENSION, MAX_STEP_SIZE, UNBOUNDED_FACTOR,
)
from .errors import ConvexityRequired, DimensionTooLarge, NotConverged, Unbounded
from .logger import LoggerSetup, get_logger
from .prox import weighted_sum_prox
from .simplex import SimplexWeights

logger = get_logger()


# === CONFIGURATION ===

@dataclass(frozen=True)
class StepRule:
    """Règle de pas: fixe (γ) ou rebroussement d'Armijo (β, c)."""
    kind: str = "backtracking"
    gamma: float = 1.0
    beta: float = DEFAULT_BACKTRACK_BETA
    c: float = DEFAULT_BACKTRACK_C

    def __post_init__(self):
        if self.kind not in ("fixed", "backtracking"):
            raise ValueError(f"Règle de pas inconnue: {self.kind}")
        if self.kind == "fixed" and not self.gamma > 0:
            raise ValueError("Le pas fixe γ doit être > 0")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("β doit être dans ]0, 1[")
        if not 0.0 < self.c < 1.0:
            raise ValueError("c doit être dans ]0, 1[")

    @classmethod
    def fixed(cls, gamma: float) -> 'StepRule':
        return cls(kind="fixed", gamma=gamma)

    @classmethod
    def backtracking(cls, beta: float = DEFAULT_BACKTRACK_BETA, c: float = DEFAULT_BACKTRACK_C) -> 'StepRule':
        return cls(kind="backtracking", beta=beta, c=c)


@dataclass(frozen=True)
class InnerSolveConfig:
    """Paramètres des solveurs internes."""
    tol: float = DEFAULT_INNER_TOL
    max_iter: int = DEFAULT_INNER_MAX_ITER
    step_rule: StepRule = field(default_factory=StepRule)

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol doit être > 0 (reçu {self.tol})")
        if self.max_iter < 1:
            raise ValueError(f"max_iter doit être ≥ 1 (reçu {self.max_iter})")

    def with_tol(self, tol: float) -> 'InnerSolveConfig':
        return InnerSolveConfig(tol=tol, max_iter=self.max_iter, step_rule=self.step_rule)


@dataclass
class InnerSolution:
    """Résultat d'une résolution interne."""
    point: np.ndarray
    value: float
    residual: float
    iterations: int
    converged: bool
    history: List[float] = field(default_factory=list, repr=False)


# === PROX ITÉRATIF D'UNE SOMME ===

def solve_weighted_prox(g_terms: Sequence, weights, center, t: float, feasible_set,
                        cfg: InnerSolveConfig) -> InnerSolution:
    """
    prox_{t(Σ w_k g_k + δ_S)}(center) par l'algorithme parallèle de type Dykstra.

    Chaque terme h_k ∈ {t·w_k·g_k} ∪ {δ_S} reçoit un poids ω = 1/K:
    p_k = prox_{h_k/ω}(z_k), x⁺ = Σ ω p_k, z_k ← z_k + x⁺ − p_k.
    La moyenne des z_k reste égale au centre; au point fixe tous les p_k
    coïncident avec x, qui est alors le prox cherché.

    Args:
        g_terms: Termes convexes (poids non nuls uniquement)
        weights: Poids associés (tableau ou SimplexWeights)
        center: Point dont on prend le prox
        t: Échelle > 0
        feasible_set: Ensemble S (None = ℝⁿ)
        cfg: Tolérance et nombre maximal d'itérations

    Returns:
        InnerSolution (non convergée si max_iter atteint)
    """
    center = np.asarray(center, dtype=float)
    weights = np.asarray(list(weights), dtype=float)
    terms = [(g, t * w) for g, w in zip(g_terms, weights) if not g.is_zero and w > 0.0]
    constrained = feasible_set is not None and not feasible_set.is_whole_space
    count = len(terms) + (1 if constrained else 0)

    def objective(y):
        value = sum(w * g.evaluate(y) for g, w in zip(g_terms, weights) if w > 0.0)
        return float(value + np.dot(y - center, y - center) / (2.0 * t))

    def apply(k, z):
        if k == len(terms):
            return feasible_set.project(z)
        g, scale = terms[k]
        return np.asarray(g.prox(z, count * scale), dtype=float)

    if count == 0:
        return InnerSolution(center.copy(), 0.0, 0.0, 0, True)

    z = [center.copy() for _ in range(count)]
    x = center.copy()
    residual = np.inf
    iteration = 0
    for iteration in range(1, cfg.max_iter + 1):
        p = [apply(k, zk) for k, zk in enumerate(z)]
        x_new = np.mean(p, axis=0)
        z = [zk + x_new - pk for zk, pk in zip(z, p)]
        residual = max(float(np.linalg.norm(x_new - x)), max(float(np.linalg.norm(pk - x_new)) for pk in p))
        x = x_new
        if residual <= cfg.tol:
            break
    if constrained:
        x = feasible_set.project(x)
    converged = residual <= cfg.tol
    LoggerSetup().log_inner_solve("prox-somme", iteration, residual, converged)
    return InnerSolution(x, objective(x), residual, iteration, converged)


# === GRADIENT PROXIMAL ===

def _active_lipschitz(problem, weights: SimplexWeights) -> Optional[float]:
    """Σ w_i L_i sur les objectifs actifs (f nulle compte pour 0), None si inconnu."""
    total = 0.0
    for i in range(problem.m):
        if weights[i] == 0.0 or problem.objectives[i].f.is_zero:
            continue
        lip = problem.metadata[i].lip
        if lip is None:
            return None
        total += weights[i] * lip
    return total


def _proximal_gradient(problem, weights: SimplexWeights, smooth, start, ell: float, cfg: InnerSolveConfig,
                       seed_step: Optional[float], allow_growth: bool, label: str,
                       divergence_radius: Optional[float] = None) -> InnerSolution:
    """
    Boucle commune de gradient proximal sur φ(y) + Σ w_i g_i(y) + δ_S(y).

    `smooth(y)` renvoie (φ(y), ∇φ(y)); le prox est weighted_sum_prox à l'échelle du pas.
    """
    S = problem.feasible_set
    g_list = problem.g_list
    rule = cfg.step_rule
    step = rule.gamma if rule.kind == "fixed" else (seed_step if seed_step is not None else 1.0)
    prox_cfg = cfg.with_tol(max(cfg.tol * 1e-2, 1e-14))

    def g_part(y):
        return sum(weights[i] * g_list[i].evaluate(y) for i in range(problem.m) if weights[i] > 0.0)

    y = S.project(start)
    phi, grad = smooth(y)
    history = [phi + g_part(y)]
    residual = np.inf
    best = (history[0], y)

    for iteration in range(1, cfg.max_iter + 1):
        while True:
            candidate = weighted_sum_prox(g_list, weights, y - step * grad, step, S, prox_cfg)
            delta = candidate - y
            phi_c, grad_c = smooth(candidate)
            if rule.kind == "fixed":
                break
            bound = phi + float(grad @ delta) + (rule.c / step) * float(delta @ delta)
            if phi_c <= bound + 1e-14 * (1.0 + abs(phi)):
                break
            step *= rule.beta
            if step < 1e-20:
                break
        residual = float(np.linalg.norm(delta)) / step
        y, phi, grad = candidate, phi_c, grad_c
        total = phi + g_part(y)
        history.append(total)
        if total < best[0]:
            best = (total, y)
        if divergence_radius is not None and float(np.linalg.norm(y)) > divergence_radius:
            raise Unbounded(
                f"[INNER] {label}: ‖y‖ = {np.linalg.norm(y):.3e} dépasse le seuil {divergence_radius:.3e}"
            )
        if residual <= cfg.tol:
            LoggerSetup().log_inner_solve(label, iteration, residual, True)
            return InnerSolution(y, total, residual, iteration, True, history)
        if allow_growth and rule.kind == "backtracking":
            step = min(step / rule.beta, MAX_STEP_SIZE)

    LoggerSetup().log_inner_solve(label, cfg.max_iter, residual, False)
    best_solution = InnerSolution(best[1], best[0], residual, cfg.max_iter, False, history)
    raise NotConverged(f"{label}: {cfg.max_iter} itérations, résidu {residual:.3e}", best=best_solution)


def _require_convex(problem, operation: str) -> None:
    if not problem.metadata.all_F_convex:
        raise ConvexityRequired(f"{operation}: toutes les F_i doivent être déclarées convexes ('{problem.name}')")


def solve_regularized_weighted(problem, weights: SimplexWeights, center, ell: float, cfg: InnerSolveConfig,
                               initial=None) -> InnerSolution:
    """
    min_{y∈S} Σ w_i F_i(y) + (ℓ/2)‖center − y‖² par gradient proximal.

    Partie lisse Σ w_i f_i + (ℓ/2)‖center − ·‖², partie prox Σ w_i g_i + δ_S.
    Pas initial 1/(ℓ + Σ w_i L_i) quand les L_i sont déclarées.

    Args:
        problem: MultiobjectiveProblem (F_i convexes)
        weights: Poids λ
        center: Centre de la régularisation
        ell: ℓ > 0
        cfg: InnerSolveConfig
        initial: Point de départ (défaut: project(center))

    Returns:
        InnerSolution; la valeur est Σ w_i F_i(y) + (ℓ/2)‖center − y‖²
    """
    _require_convex(problem, "solve_regularized_weighted")
    if not ell > 0:
        raise ValueError(f"ℓ doit être > 0 (reçu {ell})")
    center = np.asarray(center, dtype=float)
    active = [i for i in range(problem.m) if weights[i] > 0.0 and not problem.objectives[i].f.is_zero]

    def smooth(y):
        diff = y - center
        value = 0.5 * ell * float(diff @ diff)
        grad = ell * diff
        for i in active:
            value += weights[i] * float(problem.objectives[i].f.eval(y))
            grad = grad + weights[i] * np.asarray(problem.objectives[i].f.gradient(y), dtype=float)
        return value, grad

    lip = _active_lipschitz(problem, weights)
    seed = 1.0 / (ell + lip) if lip is not None else 1.0 / ell
    start = center if initial is None else initial
    return _proximal_gradient(problem, weights, smooth, start, ell, cfg, seed,
                              allow_growth=lip is None, label="régularisé")


def solve_weighted_scalarization(problem, weights: SimplexWeights, cfg: InnerSolveConfig,
                                 initial=None) -> InnerSolution:
    """
    Minimiseur global de Σ w_i F_i sur S (F_i convexes).

    Raises:
        Unbounded: si ‖y‖ dépasse 1e6 × (1 + diamètre de la boîte englobante)
        NotConverged: limite d'itérations (meilleur itéré joint)
    """
    _require_convex(problem, "solve_weighted_scalarization")
    active = [i for i in range(problem.m) if weights[i] > 0.0 and not problem.objectives[i].f.is_zero]

    def smooth(y):
        value = 0.0
        grad = np.zeros(problem.n)
        for i in active:
            value += weights[i] * float(problem.objectives[i].f.eval(y))
            grad = grad + weights[i] * np.asarray(problem.objectives[i].f.gradient(y), dtype=float)
        return value, grad

    lip = _active_lipschitz(problem, weights)
    seed = 1.0 / lip if lip is not None and lip > 0 else 1.0
    radius = UNBOUNDED_FACTOR * (1.0 + problem.feasible_set.box_diameter())
    start = np.zeros(problem.n) if initial is None else np.asarray(initial, dtype=float)
    return _proximal_gradient(problem, weights, smooth, start, 0.0, cfg, seed,
                              allow_growth=not (lip is not None and lip > 0), label="scalarisation",
                              divergence_radius=radius)


# === ORACLE DE GRILLE ===

def merit_integrand(problem, x, y, ell: float, linearized: bool, Fx=None, grads=None, gx=None) -> float:
    """
    Intégrande primal en y: min_i(F_i(x) − F_i(y)) − (ℓ/2)‖x − y‖², ou
    min_i(∇f_i(x)ᵀ(x − y) + g_i(x) − g_i(y)) − (ℓ/2)‖x − y‖² si `linearized`.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = x - y
    penalty = 0.5 * ell * float(diff @ diff)
    if linearized:
        grads = problem.jacobian(x) if grads is None else grads
        gx = problem.g_values(x) if gx is None else gx
        gy = problem.g_values(y)
        if np.any(gy >= INFINITE_VALUE):
            return -INFINITE_VALUE
        terms = grads @ diff + gx - gy
    else:
        Fx = problem.F(x) if Fx is None else Fx
        Fy = problem.F(y)
        if np.any(Fy >= INFINITE_VALUE):
            return -INFINITE_VALUE
        terms = Fx - Fy
    return float(np.min(terms)) - penalty


@dataclass
class GridOracleResult:
    """Maximum de grille, point réalisant et marge d'erreur de discrétisation."""
    value: float
    point: np.ndarray
    slack: float
    nodes: int


def grid_oracle_search(problem, x, ell: float, linearized: bool, grid: Optional[int] = None) -> GridOracleResult:
    """
    Maximise l'intégrande primal sur une grille régulière de S ∩ boîte englobante.

    La grille contient toujours x. La marge (slack) vaut √n fois le plus grand
    écart entre nœuds voisins admissibles.

    Raises:
        DimensionTooLarge: n > 3 ou boîte englobante absente
    """
    S = problem.feasible_set
    if problem.n > MAX_GRID_DIMENSION:
        raise DimensionTooLarge(f"Oracle de grille limité à n ≤ {MAX_GRID_DIMENSION} (n = {problem.n})")
    if S.bounding_box is None:
        raise DimensionTooLarge(f"Oracle de grille: boîte englobante absente pour '{problem.name}'")
    x = np.asarray(x, dtype=float)
    resolution = grid if grid is not None else DEFAULT_GRID_POINTS[problem.n]
    lo, hi = S.bounding_box
    axes = [np.linspace(lo[j], hi[j], resolution) for j in range(problem.n)]
    mesh = np.meshgrid(*axes, indexing='ij')
    nodes = np.stack([m.ravel() for m in mesh], axis=1)

    Fx = problem.F(x)
    grads = problem.jacobian(x) if linearized else None
    gx = problem.g_values(x) if linearized else None
    values = np.full(nodes.shape[0], np.nan)
    for k, y in enumerate(nodes):
        if S.contains(y):
            values[k] = merit_integrand(problem, x, y, ell, linearized, Fx, grads, gx)

    shaped = values.reshape([resolution] * problem.n)
    jumps = [0.0]
    for axis in range(problem.n):
        diffs = np.abs(np.diff(shaped, axis=axis))
        if np.any(np.isfinite(diffs)):
            jumps.append(float(np.nanmax(diffs)))
    slack = float(np.sqrt(problem.n) * max(jumps))

    at_x = merit_integrand(problem, x, x, ell, linearized, Fx, grads, gx)
    best_value, best_point = at_x, x.copy()
    if np.any(np.isfinite(values)):
        k = int(np.nanargmax(values))
        if values[k] > best_value:
            best_value, best_point = float(values[k]), nodes[k].copy()
    logger.debug(f"[INNER] Grille {resolution}^{problem.n}: max={best_value:.6g}, marge={slack:.3e}")
    return GridOracleResult(best_value, best_point, slack, int(np.sum(np.isfinite(values))) + 1)


def grid_oracle_maxmin(problem, x, ell: float, linearized: bool, grid: Optional[int] = None) -> float:
    """Valeur de grille de sup_{y∈S} min_i(intégrande); voir grid_oracle_search."""
    return grid_oracle_search(problem, x, ell, linearized, grid).value
