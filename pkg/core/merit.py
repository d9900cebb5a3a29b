"""
core/merit.py
=============
Évaluation des fonctions de mérite u₀, u_ℓ et w_ℓ par leurs duaux sur le
simplexe, applications maximisantes U_ℓ / W_ℓ, dérivées directionnelles et
certificats de stationnarité.

Duaux résolus (Frank–Wolfe):
    u_ℓ(x) = min_λ  λᵀ(F(x) − F(y_λ)) − (ℓ/2)‖x − y_λ‖²,
             y_λ = argmin_{y∈S} Σλ_i F_i(y) + (ℓ/2)‖x − y‖²
    w_ℓ(x) = min_γ  γᵀb(y_γ) − (ℓ/2)‖x − y_γ‖²,
             y_γ = prox_{(1/ℓ)(Σγ_i g_i + δ_S)}(x − (1/ℓ)Σγ_i∇f_i(x)),
             b_i(y) = ∇f_i(x)ᵀ(x − y) + g_i(x) − g_i(y)
    u₀(x)  = min_λ  λᵀ(F(x) − F(y_λ)), y_λ minimiseur de Σλ_i F_i sur S
Le gradient dual est a = F(x) − F(y_λ) (resp. b(y_γ)); le gap de
Frank–Wolfe est exactement l'écart entre la valeur duale et l'intégrande
primal au maximiseur retourné.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional

import numpy as np

from .constants import (
    DEFAULT_DUAL_MAX_ITER, DEFAULT_GAP_TOL, EVAL_ERROR_FACTOR, FEASIBILITY_TOL, MIN_INNER_TOL,
)
from .errors import (
    ConvexityRequired, DimensionTooLarge, InfeasiblePoint, NotConverged, UnsupportedProblem,
)
from .frank_wolfe import DualPoint, FrankWolfeResult, frank_wolfe_gap, minimize_on_simplex
from .inner_solver import (
    InnerSolution, InnerSolveConfig, grid_oracle_search, merit_integrand, solve_regularized_weighted,
    solve_weighted_scalarization,
)
from .logger import LoggerSetup, get_logger
from .prox import select_prox_strategy, weighted_sum_prox
from .simplex import SimplexWeights

logger = get_logger()


class MeritKind(Enum):
    """Les trois fonctions de mérite."""
    U0 = "u0"
    U_ELL = "u_ell"
    W_ELL = "w_ell"

    @classmethod
    def parse(cls, text: str) -> 'MeritKind':
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValueError(f"Mérite inconnu: '{text}' (attendu u0, u_ell ou w_ell)")


@dataclass(frozen=True)
class DualSolveConfig:
    """Paramètres du solveur dual."""
    gap_tol: float = DEFAULT_GAP_TOL
    max_iter: int = DEFAULT_DUAL_MAX_ITER
    inner: InnerSolveConfig = field(default_factory=InnerSolveConfig)
    grid_points: Optional[int] = None

    def __post_init__(self):
        if not self.gap_tol > 0:
            raise ValueError(f"gap_tol doit être > 0 (reçu {self.gap_tol})")
        if self.max_iter < 1:
            raise ValueError(f"max_iter doit être ≥ 1 (reçu {self.max_iter})")
        if self.grid_points is not None and self.grid_points < 2:
            raise ValueError("grid_points doit être ≥ 2")

    @property
    def eps_eval(self) -> float:
        """Budget d'erreur d'une évaluation: 10 × (gap_tol + tol interne)."""
        return EVAL_ERROR_FACTOR * (self.gap_tol + self.inner.tol)


@dataclass
class MeritDiagnostics:
    """Résumé de la résolution (route, itérations, résolutions internes)."""
    route: str
    iterations: int = 0
    oracle_calls: int = 0
    inner_iterations: int = 0
    inner_max_residual: float = 0.0
    converged: bool = True
    grid_slack: float = 0.0
    prox_strategy: Optional[str] = None

    def as_dict(self) -> Dict:
        return dict(self.__dict__)


@dataclass
class MeritEvaluation:
    """Valeur d'un mérite en x, maximiseur, poids duaux et diagnostics."""
    kind: MeritKind
    ell: float
    value: float
    maximizer: np.ndarray
    dual_weights: SimplexWeights
    fw_gap: float
    diagnostics: MeritDiagnostics
    eps_eval: float

    @property
    def is_zero(self) -> bool:
        return self.value <= self.eps_eval


# === OUTILS COMMUNS ===

def _check_point(problem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != problem.n:
        raise InfeasiblePoint(f"Point de dimension {x.size}, attendu {problem.n}")
    if not problem.feasible_set.contains(x, FEASIBILITY_TOL):
        raise InfeasiblePoint(f"Le point {x.tolist()} n'appartient pas à S")
    return x


def _check_ell(ell: float) -> float:
    ell = float(ell)
    if not ell > 0:
        raise ValueError(f"ℓ doit être > 0 (reçu {ell})")
    return ell


def _adaptive_inner(cfg: DualSolveConfig, modulus: float, grads: np.ndarray) -> InnerSolveConfig:
    """Resserre la tolérance interne pour que le bruit du gradient dual reste sous gap_tol."""
    scale = 1.0 + float(np.max(np.linalg.norm(grads, axis=1))) if grads.size else 1.0
    tol = min(cfg.inner.tol, 0.05 * cfg.gap_tol * modulus / scale)
    return cfg.inner.with_tol(max(tol, MIN_INNER_TOL))


class _InnerTracker:
    """Accumule les diagnostics internes et mémorise le dernier point (démarrage à chaud)."""

    def __init__(self):
        self.calls = 0
        self.iterations = 0
        self.max_residual = 0.0
        self.last_point: Optional[np.ndarray] = None
        self.failure: Optional[DualPoint] = None
        self.failure_message = ""

    def record(self, solution) -> None:
        if solution is None:
            return
        self.iterations += solution.iterations
        self.max_residual = max(self.max_residual, solution.residual)
        self.last_point = solution.point

    def call(self, solve, rebuild) -> DualPoint:
        """
        Évalue l'oracle dual et enregistre sa résolution interne.

        Si le solveur interne lève NotConverged, `rebuild(InnerSolution)` reconstruit
        le point dual au meilleur itéré interne; il est conservé dans `failure` et
        l'exception est relancée pour arrêter Frank–Wolfe.
        """
        self.calls += 1
        try:
            point = solve()
        except NotConverged as exc:
            if not isinstance(exc.best, InnerSolution):
                raise
            self.record(exc.best)
            self.failure = rebuild(exc.best)
            self.failure_message = str(exc)
            raise
        self.record(point.payload)
        return point


def _solve_dual(oracle, m: int, cfg: DualSolveConfig, label: str, tracker: _InnerTracker):
    """
    Lance Frank–Wolfe; renvoie (résultat, convergé, motif).

    Un dual non convergé rend son meilleur itéré. Un échec interne rend un
    résultat partiel construit sur le dernier itéré dual (gap recalculé).
    """
    try:
        return minimize_on_simplex(oracle, m, cfg.gap_tol, cfg.max_iter, label), True, None
    except NotConverged as exc:
        if isinstance(exc.best, FrankWolfeResult):
            return exc.best, False, None
        if tracker.failure is None:
            raise
        point = tracker.failure
        partial = FrankWolfeResult(
            best=point,
            gap=frank_wolfe_gap(point),
            iterations=max(tracker.calls - 1, 0),
            converged=False,
            oracle_calls=tracker.calls,
        )
        logger.warning(f"[MERIT] {label}: solveur interne non convergé ({tracker.failure_message})")
        return partial, False, f"solveur interne non convergé ({tracker.failure_message})"


def _build_evaluation(kind: MeritKind, ell: float, result: FrankWolfeResult, converged: bool,
                      tracker: _InnerTracker, cfg: DualSolveConfig, route: str,
                      strategy: Optional[str] = None, reason: Optional[str] = None) -> MeritEvaluation:
    diagnostics = MeritDiagnostics(
        route=route,
        iterations=result.iterations,
        oracle_calls=result.oracle_calls,
        inner_iterations=tracker.iterations,
        inner_max_residual=tracker.max_residual,
        converged=converged,
        prox_strategy=strategy,
    )
    evaluation = MeritEvaluation(
        kind=kind,
        ell=ell,
        value=float(result.best.value),
        maximizer=np.asarray(result.best.point, dtype=float),
        dual_weights=result.best.weights,
        fw_gap=float(result.gap),
        diagnostics=diagnostics,
        eps_eval=cfg.eps_eval,
    )
    LoggerSetup().log_dual_solve(kind.value, ell, result.iterations, result.gap)
    if not converged:
        reason = reason or f"le dual n'a pas convergé (gap {result.gap:.3e})"
        raise NotConverged(f"{kind.value}: {reason}", best=evaluation)
    return evaluation


# === OBJECTIFS DUAUX (publics pour les contrôles de gradient) ===

def _u_ell_point(problem, x, ell: float, weights: SimplexWeights, solution: InnerSolution) -> DualPoint:
    y = solution.point
    a = problem.F(x) - problem.F(y)
    diff = x - y
    value = float(weights.w @ a) - 0.5 * ell * float(diff @ diff)
    return DualPoint(weights, value, a, y, solution)


def _w_ell_point(problem, x, ell: float, weights: SimplexWeights, y, grads, gx, solution=None) -> DualPoint:
    diff = x - y
    b = grads @ diff + gx - problem.g_values(y)
    value = float(weights.w @ b) - 0.5 * ell * float(diff @ diff)
    return DualPoint(weights, value, b, y, solution)


def _u0_point(problem, x, weights: SimplexWeights, solution: InnerSolution) -> DualPoint:
    a = problem.F(x) - problem.F(solution.point)
    return DualPoint(weights, float(weights.w @ a), a, solution.point, solution)


def dual_objective_u_ell(problem, x, ell: float, weights: SimplexWeights, cfg: InnerSolveConfig,
                         initial=None) -> DualPoint:
    """
    φ(λ) = λᵀ(F(x) − F(y_λ)) − (ℓ/2)‖x − y_λ‖² et son gradient F(x) − F(y_λ).

    Returns:
        DualPoint (point = y_λ, payload = InnerSolution)
    """
    x = np.asarray(x, dtype=float)
    solution = solve_regularized_weighted(problem, weights, x, ell, cfg, initial)
    return _u_ell_point(problem, x, ell, weights, solution)


def dual_objective_w_ell(problem, x, ell: float, weights: SimplexWeights, cfg: InnerSolveConfig,
                         grads: Optional[np.ndarray] = None, gx: Optional[np.ndarray] = None) -> DualPoint:
    """
    φ(γ) = γᵀb(y_γ) − (ℓ/2)‖x − y_γ‖² et son gradient b(y_γ).

    Returns:
        DualPoint (point = y_γ = prox_{(1/ℓ)(Σγ_i g_i + δ_S)}(c(γ)),
        payload = InnerSolution du prox itératif, None pour une forme close)

    Raises:
        NotConverged: Le prox itératif n'a pas convergé (`best` = InnerSolution)
    """
    x = np.asarray(x, dtype=float)
    grads = problem.jacobian(x) if grads is None else grads
    gx = problem.g_values(x) if gx is None else gx
    c = x - (weights.w @ grads) / ell
    solves = []
    y = weighted_sum_prox(problem.g_list, weights, c, 1.0 / ell, problem.feasible_set, cfg,
                          strict=True, on_solve=solves.append)
    return _w_ell_point(problem, x, ell, weights, y, grads, gx, solves[-1] if solves else None)


def dual_objective_u0(problem, x, weights: SimplexWeights, cfg: InnerSolveConfig, initial=None) -> DualPoint:
    """φ(λ) = λᵀ(F(x) − F(y_λ)), y_λ minimiseur de la scalarisation pondérée."""
    x = np.asarray(x, dtype=float)
    solution = solve_weighted_scalarization(problem, weights, cfg, initial if initial is not None else x)
    return _u0_point(problem, x, weights, solution)


# === ÉVALUATIONS ===

def eval_u_ell(problem, x, ell: float, cfg: Optional[DualSolveConfig] = None) -> MeritEvaluation:
    """
    u_ℓ(x) par Frank–Wolfe sur le dual (F_i convexes requises).

    Args:
        problem: MultiobjectiveProblem
        x: Point de S
        ell: ℓ > 0
        cfg: DualSolveConfig (défaut si None)

    Returns:
        MeritEvaluation (maximiseur = U_ℓ(x), poids = élément de Λ(x))

    Raises:
        NotConverged: `best` porte l'évaluation partielle (dual ou solveur interne)
    """
    cfg = cfg or DualSolveConfig()
    x = _check_point(problem, x)
    ell = _check_ell(ell)
    if not problem.metadata.all_F_convex:
        raise ConvexityRequired(f"u_ℓ: F_i non déclarées convexes pour '{problem.name}'")

    inner = _adaptive_inner(cfg, ell, problem.jacobian(x))
    tracker = _InnerTracker()

    def oracle(weights: SimplexWeights) -> DualPoint:
        return tracker.call(
            lambda: dual_objective_u_ell(problem, x, ell, weights, inner, tracker.last_point),
            lambda solution: _u_ell_point(problem, x, ell, weights, solution),
        )

    result, converged, reason = _solve_dual(oracle, problem.m, cfg, f"u_ell({problem.name})", tracker)
    return _build_evaluation(MeritKind.U_ELL, ell, result, converged, tracker, cfg, "dual", reason=reason)


def eval_w_ell(problem, x, ell: float, cfg: Optional[DualSolveConfig] = None) -> MeritEvaluation:
    """
    w_ℓ(x) par Frank–Wolfe sur le dual (aucune convexité des f_i requise).

    Returns:
        MeritEvaluation (maximiseur = W_ℓ(x), poids = élément de Γ(x))
    """
    cfg = cfg or DualSolveConfig()
    x = _check_point(problem, x)
    ell = _check_ell(ell)
    grads = problem.jacobian(x)
    gx = problem.g_values(x)
    inner = _adaptive_inner(cfg, ell, grads)
    tracker = _InnerTracker()
    strategy = select_prox_strategy(problem.g_list, SimplexWeights.barycenter(problem.m), problem.feasible_set)

    def oracle(weights: SimplexWeights) -> DualPoint:
        return tracker.call(
            lambda: dual_objective_w_ell(problem, x, ell, weights, inner, grads, gx),
            lambda solution: _w_ell_point(problem, x, ell, weights, solution.point, grads, gx, solution),
        )

    result, converged, reason = _solve_dual(oracle, problem.m, cfg, f"w_ell({problem.name})", tracker)
    return _build_evaluation(MeritKind.W_ELL, ell, result, converged, tracker, cfg, "dual",
                             strategy.value, reason)


def _u0_dual_available(problem) -> bool:
    return problem.metadata.all_F_convex and problem.metadata.all_strongly_convex


def eval_u0(problem, x, cfg: Optional[DualSolveConfig] = None) -> MeritEvaluation:
    """
    u₀(x) = sup_{y∈S} min_i (F_i(x) − F_i(y)).

    Route duale si toutes les F_i sont déclarées fortement convexes, sinon
    route de grille (n ≤ 3 et boîte englobante), sinon UnsupportedProblem.
    La route de grille calcule le sup sur S ∩ boîte englobante.
    """
    cfg = cfg or DualSolveConfig()
    x = _check_point(problem, x)

    if _u0_dual_available(problem):
        inner = _adaptive_inner(cfg, problem.metadata.min_sigma, problem.jacobian(x))
        tracker = _InnerTracker()

        def oracle(weights: SimplexWeights) -> DualPoint:
            return tracker.call(
                lambda: dual_objective_u0(problem, x, weights, inner, tracker.last_point),
                lambda solution: _u0_point(problem, x, weights, solution),
            )

        result, converged, reason = _solve_dual(oracle, problem.m, cfg, f"u0({problem.name})", tracker)
        return _build_evaluation(MeritKind.U0, 0.0, result, converged, tracker, cfg, "dual", reason=reason)

    try:
        grid = grid_oracle_search(problem, x, 0.0, False, cfg.grid_points)
    except DimensionTooLarge as exc:
        raise UnsupportedProblem(
            f"u₀ indisponible pour '{problem.name}': ni convexité forte déclarée, ni grille possible ({exc})"
        ) from exc

    terms = problem.F(x) - problem.F(grid.point)
    active = int(np.argmin(terms))
    diagnostics = MeritDiagnostics(route="grid", grid_slack=grid.slack, oracle_calls=grid.nodes)
    logger.debug(f"[MERIT] u0({problem.name}) par grille: {grid.value:.6g} (marge {grid.slack:.3e})")
    return MeritEvaluation(
        kind=MeritKind.U0,
        ell=0.0,
        value=grid.value,
        maximizer=grid.point,
        dual_weights=SimplexWeights.vertex(problem.m, active),
        fw_gap=0.0,
        diagnostics=diagnostics,
        eps_eval=cfg.eps_eval + grid.slack,
    )


def evaluate_merit(problem, x, kind: MeritKind, ell: float = 0.0,
                   cfg: Optional[DualSolveConfig] = None) -> MeritEvaluation:
    """Répartiteur commun (CLI, vérificateur)."""
    if kind is MeritKind.U0:
        return eval_u0(problem, x, cfg)
    if kind is MeritKind.U_ELL:
        return eval_u_ell(problem, x, ell, cfg)
    return eval_w_ell(problem, x, ell, cfg)


def primal_value(problem, x, evaluation: MeritEvaluation) -> float:
    """Intégrande primal au maximiseur retourné (≤ valeur, écart ≤ fw_gap)."""
    linearized = evaluation.kind is MeritKind.W_ELL
    return merit_integrand(problem, x, evaluation.maximizer, evaluation.ell, linearized)


# === DÉRIVÉES DIRECTIONNELLES ===

def directional_derivative_u_ell(problem, x, z, ell: float, cfg: Optional[DualSolveConfig] = None,
                                 evaluation: Optional[MeritEvaluation] = None) -> float:
    """
    Σλ_i F_i'(x; z − x) − ℓ(x − y_λ)ᵀ(z − x) au λ calculé.

    Avec Λ(x) non réduit à un point, la valeur majore la vraie dérivée.
    """
    x = _check_point(problem, x)
    z = _check_point(problem, z)
    d = z - x
    if not np.any(d):
        return 0.0
    ev = evaluation if evaluation is not None else eval_u_ell(problem, x, ell, cfg)
    lam = ev.dual_weights
    total = sum(lam[i] * problem.directional_F(i, x, d) for i in range(problem.m) if lam[i] > 0.0)
    return float(total - ev.ell * float((x - ev.maximizer) @ d))


def directional_derivative_w_ell(problem, x, z, ell: float, cfg: Optional[DualSolveConfig] = None,
                                 evaluation: Optional[MeritEvaluation] = None) -> float:
    """
    Σγ_i g_i'(x; d) − ℓ([I − (1/ℓ)Σγ_i∇²f_i(x)](x − y_γ) − (1/ℓ)Σγ_i∇f_i(x))ᵀd, d = z − x.

    Raises:
        HessianRequired: si une f_i n'a pas de hessienne
    """
    x = _check_point(problem, x)
    z = _check_point(problem, z)
    d = z - x
    if not np.any(d):
        return 0.0
    hessians = problem.hessians(x)
    ev = evaluation if evaluation is not None else eval_w_ell(problem, x, ell, cfg)
    gamma = ev.dual_weights.w
    ell = ev.ell
    weighted_hessian = sum(g * H for g, H in zip(gamma, hessians))
    weighted_grad = gamma @ problem.jacobian(x)
    diff = x - ev.maximizer
    vector = (np.eye(problem.n) - weighted_hessian / ell) @ diff - weighted_grad / ell
    g_part = sum(gamma[i] * problem.objectives[i].g.derivative(x, d) for i in range(problem.m) if gamma[i] > 0.0)
    return float(g_part - ell * float(vector @ d))


def gradient_u_ell(problem, x, ell: float, cfg: Optional[DualSolveConfig] = None) -> np.ndarray:
    """∇u_ℓ(x) = Σλ_i∇F_i(x) − ℓ(x − U_ℓ(x)) quand toutes les g_i sont nulles."""
    if not problem.all_g_zero:
        raise UnsupportedProblem("gradient_u_ell: F doit être lisse (g_i ≡ 0)")
    ev = eval_u_ell(problem, x, ell, cfg)
    x = np.asarray(x, dtype=float)
    return ev.dual_weights.w @ problem.jacobian(x) - ev.ell * (x - ev.maximizer)


def gradient_w_ell_smooth_part(problem, x, ell: float, cfg: Optional[DualSolveConfig] = None) -> np.ndarray:
    """
    ∇(w_ℓ − g₁)(x) = −ℓ[I − (1/ℓ)Σγ_i∇²f_i(x)](x − W_ℓ(x)) + Σγ_i∇f_i(x),
    valable quand toutes les g_i sont identiques.
    """
    keys = {g.key for g in problem.g_list}
    if len(keys) != 1:
        raise UnsupportedProblem("gradient_w_ell_smooth_part: les g_i doivent être identiques")
    hessians = problem.hessians(x)
    ev = eval_w_ell(problem, x, ell, cfg)
    x = np.asarray(x, dtype=float)
    gamma = ev.dual_weights.w
    weighted_hessian = sum(g * H for g, H in zip(gamma, hessians))
    correction = (np.eye(problem.n) - weighted_hessian / ev.ell) @ (x - ev.maximizer)
    return -ev.ell * correction + gamma @ problem.jacobian(x)


# === CERTIFICATS ===

def pareto_stationarity_residual(problem, x, ell: float, cfg: Optional[DualSolveConfig] = None) -> float:
    """w_ℓ(x): nul (à ε_eval près) si et seulement si x est Pareto-stationnaire."""
    return eval_w_ell(problem, x, ell, cfg).value


def is_pareto_stationary(problem, x, ell: float = 1.0, cfg: Optional[DualSolveConfig] = None) -> bool:
    return eval_w_ell(problem, x, ell, cfg).is_zero


def is_weakly_pareto_optimal(problem, x, ell: float = 1.0, cfg: Optional[DualSolveConfig] = None) -> bool:
    """Certificat par u₀ si disponible, sinon par u_ℓ (F convexes)."""
    try:
        return eval_u0(problem, x, cfg).is_zero
    except UnsupportedProblem:
        return eval_u_ell(problem, x, ell, cfg).is_zero
