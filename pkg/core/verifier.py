"""
core/verifier.py
================
Vérification mécanique des propriétés des fonctions de mérite sur des
ensembles (problèmes × points × ℓ), avec rapport traçable.

Chaque contrôle porte un identifiant stable (CheckId) et l'énoncé
mathématique vérifié. Le rapport est déterministe pour une graine donnée:
les points d'un problème viennent de default_rng([graine, indice du problème]),
l'aléa propre d'un contrôle de default_rng([graine, indice du contrôle, indice du problème]).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .constants import (
    CHECK_TOLERANCE_FACTOR, DEFAULT_VERIFY_SAMPLES, FLOAT_FORMAT, MAX_GRID_DIMENSION, NON_SOLUTION_MARGIN,
    REMARK_TOLERANCE_FACTOR,
)
from .errors import (
    ConvexityRequired, DistanceOracleMissing, HessianRequired, MeritError, MetadataMissing, NotConverged,
    UnsupportedProblem,
)
from .logger import LoggerSetup, get_logger
from .merit import DualSolveConfig, MeritEvaluation, MeritKind, evaluate_merit
from .prox import moreau_envelope, weighted_sum_prox
from .simplex import SimplexWeights
from utils.finite_diff import central_gradient
from utils.sampling import ring_points, sample_feasible

logger = get_logger()


# === IDENTIFIANTS ET ÉNONCÉS ===

class CheckId(Enum):
    """Identifiants stables des contrôles (ordre = indice de graine)."""
    NONNEG_U0 = "NONNEG_U0"
    IFF_WEAK_PARETO_U0 = "IFF_WEAK_PARETO_U0"
    NONNEG_UL = "NONNEG_UL"
    IFF_WEAK_PARETO_UL = "IFF_WEAK_PARETO_UL"
    NONNEG_WL = "NONNEG_WL"
    IFF_STATIONARY_WL = "IFF_STATIONARY_WL"
    BETWEEN_CONVEX = "BETWEEN_CONVEX"
    BETWEEN_LIPSCHITZ = "BETWEEN_LIPSCHITZ"
    INNER_SCALING_W = "INNER_SCALING_W"
    INNER_SCALING_U = "INNER_SCALING_U"
    LEVEL_BOUNDED_PROBE = "LEVEL_BOUNDED_PROBE"
    ERROR_BOUND_W = "ERROR_BOUND_W"
    ERROR_BOUND_U = "ERROR_BOUND_U"
    ERROR_BOUND_U0 = "ERROR_BOUND_U0"
    GRAD_ENVELOPE = "GRAD_ENVELOPE"
    SECOND_PROX = "SECOND_PROX"
    REMARK_W_EQUALS_U = "REMARK_W_EQUALS_U"

    @classmethod
    def parse(cls, text: str) -> 'CheckId':
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValueError(f"Contrôle inconnu: '{text}'") from None

    @property
    def index(self) -> int:
        return list(CheckId).index(self)


STATEMENTS: Dict[CheckId, str] = {
    CheckId.NONNEG_U0: "u₀(x) ≥ 0 pour tout x ∈ S",
    CheckId.IFF_WEAK_PARETO_U0: "u₀(x) = 0 ⇔ x faiblement Pareto-optimal",
    CheckId.NONNEG_UL: "u_ℓ(x) ≥ 0 pour tout x ∈ S (F_i convexes)",
    CheckId.IFF_WEAK_PARETO_UL: "u_ℓ(x) = 0 ⇔ x faiblement Pareto-optimal (F_i convexes)",
    CheckId.NONNEG_WL: "w_ℓ(x) ≥ 0 pour tout x ∈ S",
    CheckId.IFF_STATIONARY_WL: "w_ℓ(x) = 0 ⇔ x Pareto-stationnaire",
    CheckId.BETWEEN_CONVEX: "μ = min μ_i ≥ 0: u₀ ≤ w_μ et u_ℓ ≤ w_{μ+ℓ}; μ < 0: u_{ℓ−μ} ≤ w_ℓ",
    CheckId.BETWEEN_LIPSCHITZ: "L = max L_i: u_{L+ℓ} ≤ w_ℓ, u₀ ≥ w_L, u_ℓ ≥ w_{L+ℓ}",
    CheckId.INNER_SCALING_W: "r ≥ ℓ > 0: w_r(x) ≤ w_ℓ(x) ≤ (r/ℓ)·w_r(x)",
    CheckId.INNER_SCALING_U: "r ≥ ℓ > 0: u_r(x) ≤ u_ℓ(x) ≤ (r/ℓ)·u_r(x)",
    CheckId.LEVEL_BOUNDED_PROBE: "F_i bornées en niveau (+ hypothèses) ⇒ mérite borné en niveau (sondé par anneaux)",
    CheckId.ERROR_BOUND_W: "w_ℓ(x) ≥ κ(ρ)·dist(x, X*)², κ(ρ) = (ρ−ℓ)/2 si ℓ < ρ/2, ρ²/(8ℓ) sinon",
    CheckId.ERROR_BOUND_U: "u_ℓ(x) ≥ υ(σ)·dist(x, X*)², υ(σ) = (σ−ℓ)/2 si ℓ < σ/2, σ²/(8ℓ) sinon",
    CheckId.ERROR_BOUND_U0: "u₀(x) ≥ (σ/2)·dist(x, X*)²",
    CheckId.GRAD_ENVELOPE: "∇e_t g(x) = (x − prox_{tg}(x))/t",
    CheckId.SECOND_PROX: "‖x − prox_{th}(x)‖²/t ≤ h(x) − h(prox_{th}(x)), h = g_i ou Σλ_i g_i + δ_S",
    CheckId.REMARK_W_EQUALS_U: "f_i ≡ 0 ⇒ w_ℓ(x) = u_ℓ(x)",
}


# === TYPES DU RAPPORT ===

@dataclass(frozen=True)
class SamplePlan:
    """Plan d'échantillonnage: problèmes, nombre de points, grille de ℓ, graine."""
    problems: Tuple[str, ...] = ()
    points: int = DEFAULT_VERIFY_SAMPLES
    ells: Tuple[float, ...] = (0.5, 1.0, 2.0)
    seed: int = 0

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("Le plan doit contenir au moins un point par problème")
        if not self.ells or any(not ell > 0 for ell in self.ells):
            raise ValueError("La grille de ℓ doit être non vide et strictement positive")


@dataclass(frozen=True)
class TheoremCheck:
    """Un contrôle de la suite: identifiant et facteur de tolérance (× ε_eval)."""
    id: CheckId
    tolerance_factor: float = CHECK_TOLERANCE_FACTOR

    @property
    def statement(self) -> str:
        return STATEMENTS[self.id]


@dataclass(frozen=True)
class Witness:
    """Données permettant de rejouer la pire violation."""
    problem: str
    x: Tuple[float, ...]
    ell: Optional[float] = None
    r: Optional[float] = None
    role: str = ""

    def render(self) -> str:
        parts = [f"problem={self.problem}", f"x=({', '.join(_fmt(v) for v in self.x)})"]
        if self.ell is not None:
            parts.append(f"ℓ={_fmt(self.ell)}")
        if self.r is not None:
            parts.append(f"r={_fmt(self.r)}")
        if self.role:
            parts.append(self.role)
        return ", ".join(parts)


@dataclass
class CheckOutcome:
    """Résultat agrégé d'un contrôle sur tous les problèmes."""
    check_id: CheckId
    status: str
    worst_violation: float
    tolerance: float
    samples: int
    witness: Optional[Witness] = None
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status != "FAIL"


CSV_HEADER = ["check_id", "status", "worst_violation", "tolerance", "samples",
              "problem", "x", "ell", "r", "statement", "note"]


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return format(float(value), FLOAT_FORMAT)


@dataclass
class VerificationReport:
    """Rapport complet, rendu en texte et en lignes CSV (sans horodatage)."""
    outcomes: List[CheckOutcome] = field(default_factory=list)
    seed: int = 0
    problems: Tuple[str, ...] = ()
    eps_eval: float = 0.0

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def failures(self) -> List[CheckOutcome]:
        return [o for o in self.outcomes if o.status == "FAIL"]

    def outcome(self, check_id: CheckId) -> Optional[CheckOutcome]:
        return next((o for o in self.outcomes if o.check_id is check_id), None)

    def render_text(self) -> str:
        lines = [
            f"Rapport de vérification (graine {self.seed})",
            f"Problèmes: {', '.join(self.problems) if self.problems else '(aucun)'}",
            f"ε_eval: {_fmt(self.eps_eval)}",
            "",
        ]
        for o in self.outcomes:
            lines.append(f"[{o.status}] {o.check_id.value}")
            lines.append(f"  Énoncé: {STATEMENTS[o.check_id]}")
            lines.append(f"  Pire violation: {_fmt(o.worst_violation)} (tolérance {_fmt(o.tolerance)})")
            if o.witness is not None:
                lines.append(f"  Témoin: {o.witness.render()}")
            lines.append(f"  Échantillons: {o.samples}")
            for note in o.notes:
                lines.append(f"  Note: {note}")
            lines.append("")
        failed = len(self.failures())
        skipped = sum(1 for o in self.outcomes if o.status == "SKIP")
        lines.append(f"Résultat: {len(self.outcomes)} contrôle(s), {failed} échec(s), {skipped} ignoré(s)")
        return "\n".join(lines) + "\n"

    def csv_rows(self) -> List[List[str]]:
        rows = [list(CSV_HEADER)]
        for o in self.outcomes:
            w = o.witness
            rows.append([
                o.check_id.value,
                o.status,
                _fmt(o.worst_violation),
                _fmt(o.tolerance),
                str(o.samples),
                w.problem if w else "",
                ";".join(_fmt(v) for v in w.x) if w else "",
                _fmt(w.ell) if w else "",
                _fmt(w.r) if w else "",
                STATEMENTS[o.check_id],
                " | ".join(o.notes),
            ])
        return rows


@dataclass
class ProbeReport:
    """
    Résultat d'une sonde de bornitude en niveau.

    largest_sublevel_radius[α]: plus grand rayon d'anneau où un point de
    mérite ≤ α a été observé (None si aucun). expectation vaut 'bounded',
    'persistent' ou 'informational'.
    """
    problem: str
    kind: MeritKind
    ell: float
    thresholds: Tuple[float, ...]
    radii: Tuple[float, ...]
    largest_sublevel_radius: Dict[float, Optional[float]]
    outer_min: float
    outer_argmin: Tuple[float, ...]
    expectation: str
    violation: float = 0.0

    @property
    def verdict(self) -> str:
        if self.expectation == "informational":
            return "INFO"
        return "FAIL" if self.violation > 0.0 else "PASS"


# === CACHE D'ÉVALUATIONS ===

class MeritCache:
    """
    Mémoïse les évaluations (genre, ℓ, x) d'un problème.
    Un cache n'est utilisé que par un seul thread.
    """

    def __init__(self, problem, cfg: Optional[DualSolveConfig] = None):
        self.problem = problem
        self.cfg = cfg or DualSolveConfig()
        self.unconverged = 0
        self._store: Dict[tuple, MeritEvaluation] = {}

    def get(self, kind: MeritKind, x, ell: float = 0.0) -> MeritEvaluation:
        x = np.asarray(x, dtype=float)
        key = (kind, float(ell), x.tobytes())
        if key not in self._store:
            try:
                evaluation = evaluate_merit(self.problem, x, kind, ell, self.cfg)
            except NotConverged as exc:
                if not isinstance(exc.best, MeritEvaluation):
                    raise
                self.unconverged += 1
                evaluation = exc.best
            self._store[key] = evaluation
        return self._store[key]

    def value(self, kind: MeritKind, x, ell: float = 0.0) -> Tuple[float, float]:
        """(valeur, marge de grille) de l'évaluation."""
        evaluation = self.get(kind, x, ell)
        return evaluation.value, evaluation.diagnostics.grid_slack


# === DISPONIBILITÉ DES MÉRITES ===

def u0_reliable(problem) -> bool:
    """
    u₀ évaluable à sa vraie valeur: route duale (F_i fortement convexes), ou
    route de grille quand la boîte englobante couvre S, ou u₀ ≡ 0 annoté.
    """
    meta = problem.metadata
    if meta.all_F_convex and meta.all_strongly_convex:
        return True
    S = problem.feasible_set
    if problem.n > MAX_GRID_DIMENSION or S.bounding_box is None:
        return False
    return not S.is_whole_space or 'u0' in problem.known.identically_zero


def u_ell_available(problem) -> bool:
    return problem.metadata.all_F_convex


# === CONTRÔLES UNITAIRES ===

def _between_pairs(problem, ell: float, branch: Optional[str]) -> List[Tuple[Tuple[MeritKind, float], Tuple[MeritKind, float]]]:
    """Inégalités applicables (gauche ≤ droite) selon la métadonnée et la disponibilité des mérites."""
    meta = problem.metadata
    branches = ("convex", "lipschitz") if branch is None else (branch,)
    mu, lip = meta.min_mu, meta.max_lip
    if ("convex" not in branches or mu is None) and ("lipschitz" not in branches or lip is None):
        raise MetadataMissing(f"'{problem.name}': μ_i ou L_i requis pour les inégalités d'encadrement")
    u_ok = u_ell_available(problem)
    u0_ok = u0_reliable(problem)
    U0, U, W = MeritKind.U0, MeritKind.U_ELL, MeritKind.W_ELL
    pairs = []
    if "convex" in branches and mu is not None:
        if mu >= 0.0:
            if mu > 0.0 and u0_ok:
                pairs.append(((U0, 0.0), (W, mu)))
            if u_ok:
                pairs.append(((U, ell), (W, mu + ell)))
        elif u_ok:
            pairs.append(((U, ell - mu), (W, ell)))
    if "lipschitz" in branches and lip is not None:
        if u_ok:
            pairs.append(((U, lip + ell), (W, ell)))
        if u0_ok:
            pairs.append(((W, lip), (U0, 0.0)))
        if u_ok:
            pairs.append(((W, lip + ell), (U, ell)))
    return pairs


def check_between(problem, x, ell: float, cfg: Optional[DualSolveConfig] = None, branch: Optional[str] = None,
                  cache: Optional[MeritCache] = None) -> float:
    """
    Inégalités d'encadrement entre u et w.

    Args:
        problem: MultiobjectiveProblem
        x: Point de S
        ell: ℓ > 0
        cfg: Configuration des évaluations
        branch: 'convex' (μ), 'lipschitz' (L) ou None pour les deux
        cache: MeritCache partagé (optionnel)

    Returns:
        Plus grande violation positive (marges de grille déduites), 0.0 si tout tient

    Raises:
        MetadataMissing: aucune des constantes nécessaires n'est déclarée
    """
    cache = cache or MeritCache(problem, cfg)
    worst = 0.0
    for (ka, la), (kb, lb) in _between_pairs(problem, ell, branch):
        va, sa = cache.value(ka, x, la)
        vb, sb = cache.value(kb, x, lb)
        worst = max(worst, va - vb - sa - sb)
    return worst


def check_inner_scaling(problem, x, ell: float, r: float, cfg: Optional[DualSolveConfig] = None,
                        kind: MeritKind = MeritKind.W_ELL, cache: Optional[MeritCache] = None) -> float:
    """w_r ≤ w_ℓ ≤ (r/ℓ)·w_r (ou la même chose pour u); renvoie la violation positive."""
    if not r >= ell > 0:
        raise ValueError(f"Il faut r ≥ ℓ > 0 (ℓ={ell}, r={r})")
    cache = cache or MeritCache(problem, cfg)
    v_ell, _ = cache.value(kind, x, ell)
    v_r, _ = cache.value(kind, x, r)
    return max(0.0, v_r - v_ell, v_ell - (r / ell) * v_r)


def kappa(rho: float, ell: float) -> float:
    """κ(ρ) = (ρ − ℓ)/2 si ℓ < ρ/2, ρ²/(8ℓ) sinon."""
    return 0.5 * (rho - ell) if ell < 0.5 * rho else rho * rho / (8.0 * ell)


def error_bound_constant(problem, kind: MeritKind, ell: float) -> float:
    """Constante de la borne d'erreur: κ(ρ) pour w_ℓ, υ(σ) pour u_ℓ, σ/2 pour u₀."""
    meta = problem.metadata
    if kind is MeritKind.W_ELL:
        rho = meta.min_rho
        if rho is None or not rho > 0:
            raise MetadataMissing(f"'{problem.name}': ρ_i = σ_i + μ_i ou σ_i − L_i > 0 requis")
        return kappa(rho, ell)
    sigma = meta.min_sigma
    if sigma is None:
        raise MetadataMissing(f"'{problem.name}': σ_i requis")
    return kappa(sigma, ell) if kind is MeritKind.U_ELL else 0.5 * sigma


def check_error_bound(problem, x, kind: MeritKind, ell: float = 1.0, cfg: Optional[DualSolveConfig] = None,
                      cache: Optional[MeritCache] = None) -> float:
    """
    mérite(x) ≥ c·dist(x, X*)², c selon error_bound_constant.

    Raises:
        DistanceOracleMissing: pas de géométrie de X* connue
        MetadataMissing: constantes absentes
    """
    pareto = problem.known.pareto_set
    if pareto is None:
        raise DistanceOracleMissing(f"'{problem.name}': aucun oracle de distance à X*")
    constant = error_bound_constant(problem, kind, ell)
    cache = cache or MeritCache(problem, cfg)
    dist = pareto.distance(x)
    value, slack = cache.value(kind, x, 0.0 if kind is MeritKind.U0 else ell)
    return max(0.0, constant * dist * dist - value - slack)


def _probe_expectation(problem, kind: MeritKind) -> str:
    if kind.value in problem.known.identically_zero:
        return "persistent"
    meta = problem.metadata
    if not meta.all_level_bounded:
        return "informational"
    if kind is MeritKind.U0:
        return "bounded"
    if not meta.all_F_convex:
        return "informational"
    if kind is MeritKind.U_ELL:
        return "bounded"
    return "bounded" if meta.min_mu is not None or meta.max_lip is not None else "informational"


def probe_level_boundedness(problem, kind: MeritKind, ell: float = 1.0,
                            threshold_grid: Sequence[float] = (0.1, 1.0),
                            radius_grid: Optional[Sequence[float]] = None,
                            cfg: Optional[DualSolveConfig] = None, cache: Optional[MeritCache] = None,
                            count: int = 8) -> ProbeReport:
    """
    Sonde les ensembles de sous-niveau sur des anneaux de rayon croissant.

    Attendu 'bounded' (hypothèses déclarées): échec si un point de mérite ≤ α
    apparaît sur l'anneau extérieur. Attendu 'persistent' (mérite annoté
    identiquement nul): échec si aucun point de l'anneau extérieur n'est ≤ α.
    """
    lo, hi = problem.feasible_set.sampling_box()
    center = 0.5 * (lo + hi)
    if radius_grid is None:
        half = float(np.max(hi - lo)) / 2.0
        radius_grid = tuple(half * factor for factor in (0.25, 0.5, 1.0, 2.0, 4.0))
    radii = tuple(sorted(float(r) for r in radius_grid))
    thresholds = tuple(float(a) for a in threshold_grid)
    cache = cache or MeritCache(problem, cfg)
    merit_ell = 0.0 if kind is MeritKind.U0 else ell

    largest = {alpha: None for alpha in thresholds}
    outer_values = []
    for radius in radii:
        for x in ring_points(center, radius, count):
            x = problem.feasible_set.project(x)
            value, _ = cache.value(kind, x, merit_ell)
            if radius == radii[-1]:
                outer_values.append((value, x))
            for alpha in thresholds:
                if value <= alpha:
                    largest[alpha] = radius
    outer_min, outer_x = min(outer_values, key=lambda item: item[0])

    expectation = _probe_expectation(problem, kind)
    violation = 0.0
    if expectation == "bounded":
        violation = max(0.0, max(thresholds) - outer_min)
    elif expectation == "persistent":
        violation = max(0.0, outer_min - min(thresholds))
    report = ProbeReport(problem.name, kind, merit_ell, thresholds, radii, largest, outer_min,
                         tuple(float(v) for v in outer_x), expectation, violation)
    logger.debug(f"[VERIFY] Sonde {kind.value} sur '{problem.name}': {expectation}, verdict {report.verdict}")
    return report


# === EXÉCUTION D'UN CONTRÔLE SUR UN PROBLÈME ===

class _Skip(Exception):
    """Contrôle non applicable à ce problème."""


class _Tally:
    """Agrège les échantillons d'un contrôle: pire excès (violation − tolérance) et témoin."""

    def __init__(self):
        self.samples = 0
        self.worst_excess = -np.inf
        self.worst_violation = 0.0
        self.tolerance = 0.0
        self.witness: Optional[Witness] = None
        self.notes: List[str] = []

    def record(self, violation: float, tolerance: float, witness: Witness) -> None:
        self.samples += 1
        excess = violation - tolerance
        if self.witness is None or excess > self.worst_excess:
            self.worst_excess = excess
            self.worst_violation = float(violation)
            self.tolerance = float(tolerance)
            self.witness = witness

    def merge(self, other: '_Tally') -> None:
        self.samples += other.samples
        if other.witness is not None and (self.witness is None or other.worst_excess > self.worst_excess):
            self.worst_excess = other.worst_excess
            self.worst_violation = other.worst_violation
            self.tolerance = other.tolerance
            self.witness = other.witness
        self.notes.extend(other.notes)


@dataclass
class _Context:
    problem: object
    name: str
    cache: MeritCache
    points: List[np.ndarray]
    rng: np.random.Generator
    plan: SamplePlan
    tolerance: float

    def witness(self, x, ell=None, r=None, role: str = "") -> Witness:
        return Witness(self.name, tuple(float(v) for v in np.atleast_1d(x)), ell, r, role)


def _contains(points: Sequence[np.ndarray], x) -> bool:
    return any(np.allclose(p, x, atol=1e-12) for p in points)


def _all_points(ctx: _Context) -> List[np.ndarray]:
    known = ctx.problem.known
    extra = known.weak_pareto_points + known.stationary_points + known.non_solution_points
    return ctx.points + [ctx.problem.feasible_set.project(p) for p in extra]


def _weak_solutions(ctx: _Context) -> List[np.ndarray]:
    known = ctx.problem.known
    solutions = list(known.weak_pareto_points)
    sampler = known.solution_sampler()
    if sampler is not None:
        solutions.extend(sampler.sample(ctx.rng, ctx.plan.points))
    return [ctx.problem.feasible_set.project(p) for p in solutions]


def _weak_distance_oracle(problem):
    known = problem.known
    if known.weak_pareto_set is not None:
        return known.weak_pareto_set
    strict = all(facts.F_strictly_convex or facts.sigma is not None for facts in problem.metadata.objectives)
    return known.pareto_set if strict else None


def _far_points(ctx: _Context) -> List[np.ndarray]:
    oracle = _weak_distance_oracle(ctx.problem)
    if oracle is None:
        return []
    return [x for x in ctx.points if oracle.distance(x) >= NON_SOLUTION_MARGIN]


def _iff(ctx: _Context, tally: _Tally, kind: MeritKind, ells, solutions, non_solutions) -> None:
    for ell in ells:
        for x in solutions:
            value, slack = ctx.cache.value(kind, x, ell)
            tally.record(max(0.0, value - slack), ctx.tolerance, ctx.witness(x, ell or None, role="solution"))
        for x in non_solutions:
            value, _ = ctx.cache.value(kind, x, ell)
            tally.record(max(0.0, ctx.tolerance - value), 0.0, ctx.witness(x, ell or None, role="non-solution"))


def _nonneg(ctx: _Context, tally: _Tally, kind: MeritKind, ells) -> None:
    for ell in ells:
        for x in _all_points(ctx):
            value, slack = ctx.cache.value(kind, x, ell)
            tally.record(max(0.0, -value - slack), ctx.tolerance, ctx.witness(x, ell or None))


def _require_u0(ctx):
    if not u0_reliable(ctx.problem):
        raise _Skip("u₀ non évaluable exactement (ni convexité forte, ni grille couvrant S)")


def _require_u(ctx):
    if not u_ell_available(ctx.problem):
        raise _Skip("F_i non déclarées convexes (u_ℓ indisponible)")


def _run_nonneg_u0(ctx, tally):
    _require_u0(ctx)
    _nonneg(ctx, tally, MeritKind.U0, (0.0,))


def _run_nonneg_ul(ctx, tally):
    _require_u(ctx)
    _nonneg(ctx, tally, MeritKind.U_ELL, ctx.plan.ells)


def _run_nonneg_wl(ctx, tally):
    _nonneg(ctx, tally, MeritKind.W_ELL, ctx.plan.ells)


def _u_non_solutions(ctx) -> List[np.ndarray]:
    known = ctx.problem.known
    not_weak = [p for p in known.stationary_points if not _contains(known.weak_pareto_points, p)]
    return [ctx.problem.feasible_set.project(p) for p in known.non_solution_points + not_weak] + _far_points(ctx)


def _run_iff_u0(ctx, tally):
    _require_u0(ctx)
    _iff(ctx, tally, MeritKind.U0, (0.0,), _weak_solutions(ctx), _u_non_solutions(ctx))


def _run_iff_ul(ctx, tally):
    _require_u(ctx)
    _iff(ctx, tally, MeritKind.U_ELL, ctx.plan.ells, _weak_solutions(ctx), _u_non_solutions(ctx))


def _run_iff_wl(ctx, tally):
    known = ctx.problem.known
    solutions = _weak_solutions(ctx) + [ctx.problem.feasible_set.project(p) for p in known.stationary_points]
    non_solutions = [ctx.problem.feasible_set.project(p) for p in known.non_solution_points]
    if u_ell_available(ctx.problem):
        non_solutions += _far_points(ctx)
    _iff(ctx, tally, MeritKind.W_ELL, ctx.plan.ells, solutions, non_solutions)


def _run_between(branch: str):
    def run(ctx, tally):
        try:
            pairs = _between_pairs(ctx.problem, ctx.plan.ells[0], branch)
        except MetadataMissing as exc:
            raise _Skip(str(exc)) from exc
        if not pairs:
            raise _Skip("aucune inégalité applicable (mérites indisponibles)")
        for ell in ctx.plan.ells:
            for x in ctx.points:
                violation = check_between(ctx.problem, x, ell, branch=branch, cache=ctx.cache)
                tally.record(violation, ctx.tolerance, ctx.witness(x, ell))
    return run


def _ell_pairs(ells) -> List[Tuple[float, float]]:
    ordered = sorted(set(ells))
    return [(a, b) for k, a in enumerate(ordered) for b in ordered[k:]]


def _run_scaling(kind: MeritKind):
    def run(ctx, tally):
        if kind is MeritKind.U_ELL:
            _require_u(ctx)
        for ell, r in _ell_pairs(ctx.plan.ells):
            for x in _all_points(ctx):
                violation = check_inner_scaling(ctx.problem, x, ell, r, kind=kind, cache=ctx.cache)
                tally.record(violation, ctx.tolerance, ctx.witness(x, ell, r))
    return run


def _run_probe(ctx, tally):
    problem = ctx.problem
    if not problem.feasible_set.is_whole_space:
        raise _Skip("S borné: ses sous-niveaux le sont trivialement")
    kinds = [MeritKind.W_ELL]
    if u_ell_available(problem):
        kinds.insert(0, MeritKind.U_ELL)
    if u0_reliable(problem):
        kinds.insert(0, MeritKind.U0)
    ell = 1.0 if 1.0 in ctx.plan.ells else ctx.plan.ells[0]
    thresholds = (ctx.tolerance, 0.1, 1.0)
    probed = 0
    for kind in kinds:
        report = probe_level_boundedness(problem, kind, ell, thresholds, cache=ctx.cache)
        if report.expectation == "informational":
            continue
        probed += 1
        tally.record(report.violation, 0.0,
                     ctx.witness(report.outer_argmin, report.ell or None, role=f"{kind.value}:{report.expectation}"))
    if probed == 0:
        raise _Skip("hypothèses de bornitude non déclarées")


def _run_error_bound(kind: MeritKind):
    def run(ctx, tally):
        try:
            error_bound_constant(ctx.problem, kind, ctx.plan.ells[0])
            if ctx.problem.known.pareto_set is None:
                raise DistanceOracleMissing("aucun oracle de distance à X*")
        except (MetadataMissing, DistanceOracleMissing) as exc:
            raise _Skip(str(exc)) from exc
        ells = (0.0,) if kind is MeritKind.U0 else ctx.plan.ells
        solutions = _weak_solutions(ctx) if ctx.problem.known.pareto_set is not None else []
        for ell in ells:
            for x in ctx.points + solutions[:2]:
                violation = check_error_bound(ctx.problem, x, kind, ell, cache=ctx.cache)
                tally.record(violation, ctx.tolerance, ctx.witness(x, ell or None))
    return run


def _run_grad_envelope(ctx, tally):
    problem = ctx.problem
    terms = [(i, o.g) for i, o in enumerate(problem.objectives) if o.g.prox is not None]
    if not terms:
        raise _Skip("aucun prox disponible")
    for i, g in terms:
        for ell in ctx.plan.ells:
            t = 1.0 / ell
            for x in ctx.points:
                _, y = moreau_envelope(g, x, t)
                expected = (x - y) / t
                fd = central_gradient(lambda z: moreau_envelope(g, z, t)[0], x)
                tolerance = 1e-5 * max(1.0, float(np.linalg.norm(expected)))
                tally.record(float(np.linalg.norm(fd - expected)), tolerance, ctx.witness(x, ell, role=f"g_{i + 1}"))


def _run_second_prox(ctx, tally):
    problem = ctx.problem
    S = problem.feasible_set
    for ell in ctx.plan.ells:
        t = 1.0 / ell
        for x in ctx.points:
            for i, objective in enumerate(problem.objectives):
                g = objective.g
                if g.prox is None:
                    continue
                p = np.asarray(g.prox(x, t), dtype=float)
                lhs = float((x - p) @ (x - p)) / t
                tally.record(max(0.0, lhs - (g.evaluate(x) - g.evaluate(p))), ctx.tolerance,
                             ctx.witness(x, ell, role=f"g_{i + 1}"))
            weights = SimplexWeights.normalized(ctx.rng.dirichlet(np.ones(problem.m)))
            p = weighted_sum_prox(problem.g_list, weights, x, t, S)

            def h(z):
                return float(sum(weights[k] * problem.g_list[k].evaluate(z) for k in range(problem.m)))

            lhs = float((x - p) @ (x - p)) / t
            tally.record(max(0.0, lhs - (h(x) - h(p))), ctx.tolerance, ctx.witness(x, ell, role="Σλg + δ_S"))


def _run_remark(ctx, tally):
    problem = ctx.problem
    if not problem.all_f_zero:
        raise _Skip("au moins une f_i non nulle")
    _require_u(ctx)
    for ell in ctx.plan.ells:
        for x in _all_points(ctx):
            w, _ = ctx.cache.value(MeritKind.W_ELL, x, ell)
            u, _ = ctx.cache.value(MeritKind.U_ELL, x, ell)
            tally.record(abs(w - u), ctx.tolerance, ctx.witness(x, ell))


RUNNERS: Dict[CheckId, Callable[[_Context, _Tally], None]] = {
    CheckId.NONNEG_U0: _run_nonneg_u0,
    CheckId.IFF_WEAK_PARETO_U0: _run_iff_u0,
    CheckId.NONNEG_UL: _run_nonneg_ul,
    CheckId.IFF_WEAK_PARETO_UL: _run_iff_ul,
    CheckId.NONNEG_WL: _run_nonneg_wl,
    CheckId.IFF_STATIONARY_WL: _run_iff_wl,
    CheckId.BETWEEN_CONVEX: _run_between("convex"),
    CheckId.BETWEEN_LIPSCHITZ: _run_between("lipschitz"),
    CheckId.INNER_SCALING_W: _run_scaling(MeritKind.W_ELL),
    CheckId.INNER_SCALING_U: _run_scaling(MeritKind.U_ELL),
    CheckId.LEVEL_BOUNDED_PROBE: _run_probe,
    CheckId.ERROR_BOUND_W: _run_error_bound(MeritKind.W_ELL),
    CheckId.ERROR_BOUND_U: _run_error_bound(MeritKind.U_ELL),
    CheckId.ERROR_BOUND_U0: _run_error_bound(MeritKind.U0),
    CheckId.GRAD_ENVELOPE: _run_grad_envelope,
    CheckId.SECOND_PROX: _run_second_prox,
    CheckId.REMARK_W_EQUALS_U: _run_remark,
}


def _run_problem(suite: Sequence[TheoremCheck], problem, problem_index: int, cfg: DualSolveConfig,
                 plan: SamplePlan) -> Dict[CheckId, _Tally]:
    """Tous les contrôles de la suite sur un problème (un cache, un thread)."""
    cache = MeritCache(problem, cfg)
    points = sample_feasible(problem, np.random.default_rng([plan.seed, problem_index]), plan.points)
    tallies = {}
    for check in suite:
        tally = _Tally()
        factor = REMARK_TOLERANCE_FACTOR if check.id is CheckId.REMARK_W_EQUALS_U else check.tolerance_factor
        ctx = _Context(
            problem=problem,
            name=problem.name,
            cache=cache,
            points=list(points),
            rng=np.random.default_rng([plan.seed, check.id.index, problem_index]),
            plan=plan,
            tolerance=factor * cfg.eps_eval,
        )
        try:
            RUNNERS[check.id](ctx, tally)
        except _Skip as reason:
            tally.notes.append(f"{problem.name}: ignoré ({reason})")
        except (ConvexityRequired, UnsupportedProblem, HessianRequired) as exc:
            tally.notes.append(f"{problem.name}: ignoré ({exc})")
        except MeritError as exc:
            logger.error(f"[VERIFY] {check.id.value} sur '{problem.name}': {exc}", exc_info=True)
            tally.record(np.inf, 0.0, Witness(problem.name, (), role=f"erreur: {type(exc).__name__}"))
            tally.notes.append(f"{problem.name}: échec d'évaluation ({exc})")
        tallies[check.id] = tally
    if cache.unconverged:
        logger.warning(f"[VERIFY] '{problem.name}': {cache.unconverged} évaluation(s) non convergée(s)")
    return tallies


def _sequential(tasks, fn):
    return [fn(task) for task in tasks]


def run_all(suite: Sequence[TheoremCheck], problems: Sequence, cfg: Optional[DualSolveConfig] = None,
            plan: Optional[SamplePlan] = None,
            runner: Optional[Callable[[list, Callable], list]] = None) -> VerificationReport:
    """
    Exécute la suite sur les problèmes et agrège les pires violations.

    Args:
        suite: Contrôles à exécuter (ordre conservé dans le rapport)
        problems: MultiobjectiveProblem à vérifier
        cfg: Configuration des évaluations
        plan: Plan d'échantillonnage (graine, points, ℓ)
        runner: (tâches, fonction) -> résultats ordonnés; séquentiel par défaut

    Returns:
        VerificationReport déterministe pour une graine donnée
    """
    cfg = cfg or DualSolveConfig()
    plan = plan or SamplePlan()
    runner = runner or _sequential
    problems = list(problems)
    report = VerificationReport(seed=plan.seed, problems=tuple(p.name for p in problems), eps_eval=cfg.eps_eval)
    if not suite:
        return report

    results = runner(list(range(len(problems))), lambda k: _run_problem(suite, problems[k], k, cfg, plan))

    for check in suite:
        merged = _Tally()
        for tallies in results:
            merged.merge(tallies[check.id])
        if merged.samples == 0:
            status = "SKIP"
        else:
            status = "FAIL" if merged.worst_excess > 0.0 else "PASS"
        outcome = CheckOutcome(
            check_id=check.id,
            status=status,
            worst_violation=merged.worst_violation,
            tolerance=merged.tolerance if merged.samples else check.tolerance_factor * cfg.eps_eval,
            samples=merged.samples,
            witness=merged.witness,
            notes=merged.notes,
        )
        report.outcomes.append(outcome)
        LoggerSetup().log_check_result(check.id.value, status, outcome.worst_violation, outcome.samples)
    return report


def default_suite() -> List[TheoremCheck]:
    """Les 17 contrôles avec leur tolérance par défaut."""
    return [TheoremCheck(check_id) for check_id in CheckId]


class PropertyVerifier:
    """
    Façade utilisée par le contrôleur: configuration et plan fixés,
    exécution sur une sélection de problèmes.
    """

    def __init__(self, cfg: Optional[DualSolveConfig] = None, plan: Optional[SamplePlan] = None,
                 runner: Optional[Callable[[list, Callable], list]] = None,
                 tolerance_factor: float = CHECK_TOLERANCE_FACTOR):
        self.logger = get_logger()
        self.cfg = cfg or DualSolveConfig()
        self.plan = plan or SamplePlan()
        self.runner = runner
        self.tolerance_factor = tolerance_factor

    def run(self, problems: Sequence, checks: Optional[Sequence[CheckId]] = None) -> VerificationReport:
        ids = list(CheckId) if checks is None else list(checks)
        suite = [TheoremCheck(c, self.tolerance_factor) for c in ids]
        self.logger.info(f"[VERIFY] {len(suite)} contrôle(s) sur {len(problems)} problème(s), graine {self.plan.seed}")
        report = run_all(suite, problems, self.cfg, self.plan, self.runner)
        if report.passed:
            self.logger.info("[VERIFY] Tous les contrôles sont passés")
        else:
            self.logger.warning(f"[VERIFY] {len(report.failures())} contrôle(s) en échec")
        return report
