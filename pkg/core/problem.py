"""
core/problem.py
===============
Modèle de problème multiobjectif composite: F_i = f_i + g_i sur S ⊆ ℝⁿ.

Tous les autres modules ne consomment que ces abstractions (oracles
purs, appelables en lecture depuis plusieurs threads).
"""

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .constants import FEASIBILITY_TOL, GRADIENT_REL_TOL, HESSIAN_TOL, INFINITE_VALUE, ORACLE_SAMPLES, SYMMETRY_TOL
from .errors import HessianRequired, OracleInconsistent
from .logger import get_logger
from .prox import moreau_envelope, project_ball, project_box
from .solution_set import KnownSolutions
from utils.finite_diff import central_gradient, central_jacobian, one_sided_directional
from utils.sampling import sample_feasible, sample_pairs

logger = get_logger()


# === TERMES ===

@dataclass
class SmoothTerm:
    """Partie lisse f_i: valeur, gradient et hessienne optionnelle."""
    eval: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    kind: str = "custom"
    params: Dict = field(default_factory=dict)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def has_hessian(self) -> bool:
        return self.hessian is not None


@dataclass
class ConvexTerm:
    """
    Partie convexe g_i, éventuellement non différentiable.

    `block` liste les coordonnées sur lesquelles g agit (None = inconnu,
    () = aucune); `separable` signale une somme de fonctions d'une variable.
    """
    eval: Callable[[np.ndarray], float]
    prox: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    directional: Optional[Callable[[np.ndarray, np.ndarray], float]] = None
    domain: Optional[Callable[[np.ndarray], bool]] = None
    kind: str = "custom"
    params: Dict = field(default_factory=dict)
    block: Optional[Tuple[int, ...]] = None
    separable: bool = False
    key: str = ""

    def __post_init__(self):
        if not self.key:
            if self.kind == "custom":
                self.key = f"custom:{id(self)}"
            else:
                self.key = f"{self.kind}:{json.dumps(self.params, sort_keys=True)}"

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def in_domain(self, x) -> bool:
        return True if self.domain is None else bool(self.domain(np.asarray(x, dtype=float)))

    def evaluate(self, x) -> float:
        """g(x), ou la sentinelle INFINITE_VALUE hors du domaine."""
        x = np.asarray(x, dtype=float)
        if not self.in_domain(x):
            return INFINITE_VALUE
        return float(self.eval(x))

    def derivative(self, x, d) -> float:
        """Dérivée directionnelle g'(x; d) (différence unilatérale à défaut de formule)."""
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        if self.directional is not None:
            return float(self.directional(x, d))
        return one_sided_directional(self.evaluate, x, d)


# === ENSEMBLE ADMISSIBLE ===

@dataclass
class FeasibleSet:
    """Ensemble S avec oracle de projection ('reals', 'box' ou 'ball')."""
    kind: str
    n: int
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    bounding_box: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @classmethod
    def reals(cls, n: int, bounding_box=None) -> 'FeasibleSet':
        box = None
        if bounding_box is not None:
            box = (np.asarray(bounding_box[0], dtype=float), np.asarray(bounding_box[1], dtype=float))
        return cls(kind='reals', n=n, bounding_box=box)

    @classmethod
    def box(cls, lo, hi) -> 'FeasibleSet':
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("Boîte invalide: lo doit être ≤ hi, de même dimension")
        box = (lo, hi) if np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) else None
        return cls(kind='box', n=lo.size, lo=lo, hi=hi, bounding_box=box)

    @classmethod
    def ball(cls, center, radius: float) -> 'FeasibleSet':
        center = np.asarray(center, dtype=float)
        if not radius > 0:
            raise ValueError("Le rayon de la boule doit être > 0")
        return cls(kind='ball', n=center.size, center=center, radius=float(radius),
                   bounding_box=(center - radius, center + radius))

    @property
    def is_whole_space(self) -> bool:
        return self.kind == 'reals'

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            return False
        if self.kind == 'reals':
            return bool(np.all(np.isfinite(x)))
        if self.kind == 'box':
            return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))
        return bool(np.linalg.norm(x - self.center) <= self.radius + tol)

    def project(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == 'reals':
            return x.copy()
        if self.kind == 'box':
            return project_box(x, self.lo, self.hi)
        return project_ball(x, self.center, self.radius)

    def box_diameter(self) -> float:
        if self.bounding_box is None:
            return 0.0
        return float(np.linalg.norm(self.bounding_box[1] - self.bounding_box[0]))

    def sampling_box(self) -> Tuple[np.ndarray, np.ndarray]:
        """Boîte englobante, ou [-3, 3]ⁿ à défaut."""
        if self.bounding_box is not None:
            return self.bounding_box
        return -3.0 * np.ones(self.n), 3.0 * np.ones(self.n)

    def to_dict(self) -> dict:
        def clean(values):
            return [None if not np.isfinite(v) else float(v) for v in values]
        data = {'kind': self.kind}
        if self.kind == 'box':
            data.update({'lo': clean(self.lo), 'hi': clean(self.hi)})
        elif self.kind == 'ball':
            data.update({'center': self.center.tolist(), 'radius': self.radius})
        elif self.bounding_box is not None:
            data['bounding_box'] = {'lo': self.bounding_box[0].tolist(), 'hi': self.bounding_box[1].tolist()}
        return data


# === MÉTADONNÉES DE CONVEXITÉ ===

@dataclass(frozen=True)
class ObjectiveFacts:
    """Faits déclarés pour un objectif (jamais inférés)."""
    mu: Optional[float] = None
    sigma: Optional[float] = None
    lip: Optional[float] = None
    f_convex: bool = False
    F_convex: bool = False
    F_strictly_convex: bool = False
    level_bounded: Optional[bool] = None

    def __post_init__(self):
        if self.sigma is not None and not self.sigma > 0:
            raise ValueError(f"σ doit être > 0 (reçu {self.sigma})")
        if self.lip is not None and not self.lip > 0:
            raise ValueError(f"L doit être > 0 (reçu {self.lip})")

    def rho(self) -> Optional[float]:
        """Meilleur ρ_i disponible parmi σ + μ et σ − L (None si aucun)."""
        if self.sigma is None:
            return None
        candidates = []
        if self.mu is not None:
            candidates.append(self.sigma + self.mu)
        if self.lip is not None:
            candidates.append(self.sigma - self.lip)
        return max(candidates) if candidates else None


@dataclass(frozen=True)
class ConvexityMetadata:
    """Constantes μ_i, σ_i, L_i et drapeaux de convexité, par objectif."""
    objectives: Tuple[ObjectiveFacts, ...]

    @classmethod
    def empty(cls, m: int) -> 'ConvexityMetadata':
        return cls(tuple(ObjectiveFacts() for _ in range(m)))

    def __len__(self) -> int:
        return len(self.objectives)

    def __getitem__(self, index: int) -> ObjectiveFacts:
        return self.objectives[index]

    @property
    def min_mu(self) -> Optional[float]:
        values = [o.mu for o in self.objectives]
        return None if any(v is None for v in values) else min(values)

    @property
    def max_lip(self) -> Optional[float]:
        values = [o.lip for o in self.objectives]
        return None if any(v is None for v in values) else max(values)

    @property
    def min_sigma(self) -> Optional[float]:
        values = [o.sigma for o in self.objectives]
        return None if any(v is None for v in values) else min(values)

    @property
    def min_rho(self) -> Optional[float]:
        values = [o.rho() for o in self.objectives]
        return None if any(v is None for v in values) else min(values)

    @property
    def all_F_convex(self) -> bool:
        return all(o.F_convex or o.sigma is not None for o in self.objectives)

    @property
    def all_strongly_convex(self) -> bool:
        return all(o.sigma is not None for o in self.objectives)

    @property
    def all_level_bounded(self) -> bool:
        return all(bool(o.level_bounded) for o in self.objectives)


# === PROBLÈME ===

@dataclass
class Objective:
    """Couple (f_i, g_i)."""
    f: SmoothTerm
    g: ConvexTerm


@dataclass
class MultiobjectiveProblem:
    """Instance min_{x ∈ S} F(x) avec F_i = f_i + g_i."""
    n: int
    objectives: List[Objective]
    feasible_set: FeasibleSet
    metadata: Optional[ConvexityMetadata] = None
    name: str = "problem"
    known: KnownSolutions = field(default_factory=KnownSolutions)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("La dimension n doit être ≥ 1")
        if len(self.objectives) < 1:
            raise ValueError("Il faut au moins un objectif (m ≥ 1)")
        if self.feasible_set.n != self.n:
            raise ValueError(f"S est de dimension {self.feasible_set.n}, attendu {self.n}")
        if self.metadata is None:
            self.metadata = ConvexityMetadata.empty(self.m)
        if len(self.metadata) != self.m:
            raise ValueError(f"{len(self.metadata)} métadonnée(s) pour {self.m} objectif(s)")

    @property
    def m(self) -> int:
        return len(self.objectives)

    @property
    def g_list(self) -> List[ConvexTerm]:
        return [o.g for o in self.objectives]

    @property
    def all_f_zero(self) -> bool:
        return all(o.f.is_zero for o in self.objectives)

    @property
    def all_g_zero(self) -> bool:
        return all(o.g.is_zero for o in self.objectives)

    @property
    def has_hessians(self) -> bool:
        return all(o.f.has_hessian for o in self.objectives)

    def F_i(self, i: int, x) -> float:
        """F_i(x) = f_i(x) + g_i(x); la sentinelle n'entre jamais dans la somme."""
        x = np.asarray(x, dtype=float)
        gx = self.objectives[i].g.evaluate(x)
        if gx >= INFINITE_VALUE:
            return INFINITE_VALUE
        return float(self.objectives[i].f.eval(x)) + gx

    def F(self, x) -> np.ndarray:
        return np.array([self.F_i(i, x) for i in range(self.m)])

    def f_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([float(o.f.eval(x)) for o in self.objectives])

    def g_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.array([o.g.evaluate(x) for o in self.objectives])

    def jacobian(self, x) -> np.ndarray:
        """Matrice m × n des gradients ∇f_i(x)."""
        x = np.asarray(x, dtype=float)
        return np.array([np.asarray(o.f.gradient(x), dtype=float).reshape(self.n) for o in self.objectives])

    def hessians(self, x) -> List[np.ndarray]:
        if not self.has_hessians:
            raise HessianRequired(f"Problème '{self.name}': hessienne absente pour au moins un f_i")
        x = np.asarray(x, dtype=float)
        return [np.asarray(o.f.hessian(x), dtype=float).reshape(self.n, self.n) for o in self.objectives]

    def directional_F(self, i: int, x, d) -> float:
        """F_i'(x; d) = ∇f_i(x)ᵀd + g_i'(x; d)."""
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        grad = np.asarray(self.objectives[i].f.gradient(x), dtype=float)
        return float(grad @ d) + self.objectives[i].g.derivative(x, d)


# === VALIDATION ===

@dataclass
class ValidationCheck:
    """Résultat d'un contrôle d'oracle."""
    name: str
    objective: Optional[int]
    worst_violation: float = 0.0
    witness: Optional[Tuple[float, ...]] = None
    samples: int = 0

    @property
    def passed(self) -> bool:
        return self.worst_violation <= 0.0

    def record(self, violation: float, point) -> None:
        self.samples += 1
        if violation > self.worst_violation:
            self.worst_violation = float(violation)
            self.witness = tuple(float(v) for v in np.atleast_1d(point))


@dataclass
class ValidationReport:
    """Liste des contrôles d'oracles; violation > 0 signifie échec au-delà de la tolérance."""
    problem: str
    checks: List[ValidationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def worst(self) -> Optional[ValidationCheck]:
        failing = [c for c in self.checks if not c.passed]
        return max(failing, key=lambda c: c.worst_violation) if failing else None


def _rel_excess(error: float, tol: float, scale: float) -> float:
    """Dépassement de error au-delà de tol·max(1, scale) (≤ 0 si conforme)."""
    return error - tol * max(1.0, scale)


def _check_smooth(report, i, f: SmoothTerm, points, lip, rng):
    grad_check = ValidationCheck('gradient', i)
    hess_check = ValidationCheck('hessian', i) if f.has_hessian else None
    for x in points:
        grad = np.asarray(f.gradient(x), dtype=float)
        fd = central_gradient(f.eval, x)
        grad_check.record(_rel_excess(float(np.linalg.norm(fd - grad)), GRADIENT_REL_TOL, float(np.linalg.norm(grad))), x)
        if hess_check is not None:
            hess = np.asarray(f.hessian(x), dtype=float).reshape(x.size, x.size)
            fd_h = central_jacobian(f.gradient, x)
            hess_check.record(_rel_excess(float(np.max(np.abs(fd_h - hess))), HESSIAN_TOL, float(np.max(np.abs(hess)))), x)
            hess_check.record(float(np.max(np.abs(hess - hess.T))) - SYMMETRY_TOL, x)
    report.checks.append(grad_check)
    if hess_check is not None:
        report.checks.append(hess_check)

    if lip is not None:
        lip_check = ValidationCheck('lipschitz', i)
        for a, b in zip(points[:-1], points[1:]):
            lhs = float(np.linalg.norm(np.asarray(f.gradient(a)) - np.asarray(f.gradient(b))))
            rhs = lip * float(np.linalg.norm(a - b))
            lip_check.record(lhs - rhs - 1e-9 * (1.0 + lhs), a)
        report.checks.append(lip_check)


def _check_prox(report, i, g: ConvexTerm, n, rng, samples):
    if g.prox is None:
        return
    nonexp = ValidationCheck('prox_nonexpansive', i)
    optimality = ValidationCheck('prox_optimality', i)
    second = ValidationCheck('second_prox', i)
    for a, b in sample_pairs(rng, n, samples):
        t = float(rng.uniform(0.1, 2.0))
        pa, pb = np.asarray(g.prox(a, t)), np.asarray(g.prox(b, t))
        nonexp.record(float(np.linalg.norm(pa - pb)) - float(np.linalg.norm(a - b)) * (1.0 + 1e-9) - 1e-12, a)

        value, y = moreau_envelope(g, a, t)
        for _ in range(3):
            z = y + 1e-3 * rng.standard_normal(n)
            if g.evaluate(z) >= INFINITE_VALUE:
                continue
            perturbed = g.evaluate(z) + float(np.dot(a - z, a - z)) / (2.0 * t)
            optimality.record(value - perturbed - 1e-10 * (1.0 + abs(value)), a)

        gx = g.evaluate(a)
        if gx < INFINITE_VALUE:
            p1 = np.asarray(g.prox(a, 1.0))
            lhs = float(np.dot(a - p1, a - p1))
            rhs = gx - g.evaluate(p1)
            second.record(lhs - rhs - 1e-9 * (1.0 + abs(gx)), a)
    report.checks.extend([nonexp, optimality, second])


def _check_projection(report, S: FeasibleSet, rng, samples):
    check = ValidationCheck('projection', None)
    for a, b in sample_pairs(rng, S.n, samples):
        pa, pb = S.project(a), S.project(b)
        check.record(float(np.linalg.norm(S.project(pa) - pa)) - 1e-12, a)
        if not S.contains(pa):
            check.record(1.0, a)
        if S.contains(a):
            check.record(float(np.linalg.norm(pa - a)) - 1e-12, a)
        check.record(float(np.linalg.norm(pa - pb)) - float(np.linalg.norm(a - b)) * (1.0 + 1e-9) - 1e-12, a)
    report.checks.append(check)


def _modulus_check(name, i, fn, modulus, points, rng) -> ValidationCheck:
    """Inégalité de σ-convexité sur des triplets (x, y, α)."""
    check = ValidationCheck(name, i)
    for x, y in zip(points[:-1], points[1:]):
        alpha = float(rng.uniform(0.05, 0.95))
        mid = alpha * x + (1.0 - alpha) * y
        fx, fy, fm = fn(x), fn(y), fn(mid)
        if max(fx, fy, fm) >= INFINITE_VALUE:
            continue
        bound = alpha * fx + (1.0 - alpha) * fy - 0.5 * modulus * alpha * (1.0 - alpha) * float(np.dot(x - y, x - y))
        check.record(fm - bound - 1e-9 * (1.0 + abs(fx) + abs(fy)), mid)
    return check


def validate_problem(problem: MultiobjectiveProblem, samples: int = ORACLE_SAMPLES, seed: int = 0,
                     raise_on_failure: bool = True) -> ValidationReport:
    """
    Falsifie les oracles et les constantes déclarées par échantillonnage.

    Args:
        problem: Instance à contrôler
        samples: Nombre de points admissibles tirés
        seed: Graine (rapport reproductible)
        raise_on_failure: Lève OracleInconsistent sur le pire échec

    Returns:
        ValidationReport
    """
    rng = np.random.default_rng(seed)
    points = sample_feasible(problem, rng, samples)
    report = ValidationReport(problem.name)

    composition = ValidationCheck('F_composition', None)
    for x in points:
        direct = problem.F(x)
        parts = problem.f_values(x) + problem.g_values(x)
        composition.record(float(np.max(np.abs(direct - parts))), x)
    report.checks.append(composition)

    _check_projection(report, problem.feasible_set, rng, min(samples, 100))

    for i, objective in enumerate(problem.objectives):
        facts = problem.metadata[i]
        _check_smooth(report, i, objective.f, points, facts.lip, rng)
        _check_prox(report, i, objective.g, problem.n, rng, min(samples, 100))

        def F_i(x, i=i):
            return problem.F_i(i, x)

        if facts.sigma is not None:
            report.checks.append(_modulus_check('sigma_convexity', i, F_i, facts.sigma, points, rng))
        elif facts.F_convex:
            report.checks.append(_modulus_check('F_convexity', i, F_i, 0.0, points, rng))
        if facts.mu is not None:
            report.checks.append(_modulus_check('mu_convexity', i, objective.f.eval, facts.mu, points, rng))
        elif facts.f_convex:
            report.checks.append(_modulus_check('f_convexity', i, objective.f.eval, 0.0, points, rng))

    failing = report.worst()
    if failing is None:
        logger.debug(f"[PROBLEM] Validation '{problem.name}': {len(report.checks)} contrôle(s) OK")
    else:
        logger.warning(
            f"[PROBLEM] Validation '{problem.name}': échec '{failing.name}' "
            f"(objectif {failing.objective}, violation {failing.worst_violation:.3e})"
        )
        if raise_on_failure:
            raise OracleInconsistent(failing.name, failing.witness, failing.worst_violation)
    return report
