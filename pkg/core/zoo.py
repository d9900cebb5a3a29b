"""
core/zoo.py
===========
Zoo de problèmes: format JSON déclaratif (ProblemSpec), problèmes intégrés
(dont tous les exemples de référence) et familles générées par graine.

Voir docs/PROBLEM_SPEC.md pour le schéma complet.
"""

import json
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from .errors import InconsistentDimensions, ParseError, UnknownId, UnknownKind, UnsupportedProblem
from .logger import get_logger
from .problem import (
    ConvexityMetadata, ConvexTerm, FeasibleSet, MultiobjectiveProblem, Objective, ObjectiveFacts,
    SmoothTerm, validate_problem,
)
from .prox import prox_weighted_l1
from .solution_set import KnownSolutions, PointSet, WeightedQuadraticCurve, solution_set_from_dict

logger = get_logger()


# === REGISTRES COMPILÉS ===

def _logsumexp_term(n: int) -> SmoothTerm:
    def softmax(x):
        z = np.exp(x - np.max(x))
        return z / z.sum()

    def value(x):
        top = float(np.max(x))
        return top + float(np.log(np.sum(np.exp(x - top))))

    def hessian(x):
        p = softmax(x)
        return np.diag(p) - np.outer(p, p)

    return SmoothTerm(value, softmax, hessian, kind="custom_id", params={'id': 'logsumexp'})


def _softplus_term(n: int) -> SmoothTerm:
    def value(x):
        return float(np.sum(np.logaddexp(0.0, x)))

    def gradient(x):
        return 1.0 / (1.0 + np.exp(-x))

    def hessian(x):
        s = 1.0 / (1.0 + np.exp(-x))
        return np.diag(s * (1.0 - s))

    return SmoothTerm(value, gradient, hessian, kind="custom_id", params={'id': 'softplus_sum'})


CUSTOM_SMOOTH: Dict[str, Callable[[int], SmoothTerm]] = {
    'logsumexp': _logsumexp_term,
    'softplus_sum': _softplus_term,
}


def _abs_u_ell(x, ell: float) -> float:
    """u_ℓ de F(x) = |x|: |x| − ℓx²/2 si |x| < 1/ℓ, 1/(2ℓ) sinon."""
    a = abs(float(np.asarray(x).reshape(-1)[0]))
    return a - 0.5 * ell * a * a if a < 1.0 / ell else 0.5 / ell


CLOSED_FORMS: Dict[str, Callable] = {
    'abs_u_ell': _abs_u_ell,
}


# === LECTURE DES CHAMPS ===

def _require(data: dict, key: str, path: str):
    if not isinstance(data, dict) or key not in data:
        raise ParseError("Champ obligatoire manquant", field=f"{path}.{key}" if path else key)
    return data[key]


def _vector(value, n: int, path: str, allow_null: bool = False, fill: float = 0.0) -> np.ndarray:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return np.full(n, float(value))
    if not isinstance(value, list):
        raise ParseError("Vecteur attendu", field=path)
    if len(value) != n:
        raise InconsistentDimensions(f"Longueur {len(value)} au lieu de {n}", field=path)
    out = []
    for item in value:
        if item is None and allow_null:
            out.append(fill)
        elif isinstance(item, (int, float)) and not isinstance(item, bool):
            out.append(float(item))
        else:
            raise ParseError(f"Nombre attendu, reçu {item!r}", field=path)
    return np.array(out)


def _matrix(value, n: int, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise InconsistentDimensions(f"Matrice {n}×{n} attendue", field=path)
    rows = [_vector(row, n, f"{path}[{k}]") for k, row in enumerate(value)]
    return np.array(rows)


def _optional_float(data: dict, key: str, path: str) -> Optional[float]:
    value = data.get(key)
    if value is None:
        return None
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ParseError(f"Nombre attendu, reçu {value!r}", field=f"{path}.{key}")
    return float(value)


# === CONSTRUCTION DES TERMES ===

def quadratic_term(Q, b, c: float) -> SmoothTerm:
    """f(x) = ½xᵀQx + bᵀx + c."""
    Q = np.asarray(Q, dtype=float)
    b = np.asarray(b, dtype=float)
    return SmoothTerm(
        eval=lambda x: float(0.5 * x @ Q @ x + b @ x + c),
        gradient=lambda x: Q @ x + b,
        hessian=lambda x: Q,
        kind="quadratic",
        params={'Q': Q.tolist(), 'b': b.tolist(), 'c': float(c)},
    )


def zero_smooth(n: int) -> SmoothTerm:
    return SmoothTerm(lambda x: 0.0, lambda x: np.zeros(n), lambda x: np.zeros((n, n)), kind="zero")


def negated_square_term(n: int, scale: float = 1.0) -> SmoothTerm:
    """f(x) = −scale·‖x‖² (non convexe)."""
    return SmoothTerm(
        eval=lambda x: -scale * float(x @ x),
        gradient=lambda x: -2.0 * scale * x,
        hessian=lambda x: -2.0 * scale * np.eye(n),
        kind="negated_square",
        params={'scale': float(scale)},
    )


def zero_convex(n: int) -> ConvexTerm:
    return ConvexTerm(
        eval=lambda x: 0.0,
        prox=lambda x, t: np.array(x, dtype=float),
        directional=lambda x, d: 0.0,
        kind="zero",
        block=(),
        separable=True,
    )


def l1_term(n: int, weights, center=None, block=None, kind: str = "l1") -> ConvexTerm:
    """g(x) = Σ_{j∈block} w_j |x_j − c_j| (bloc par défaut: toutes les coordonnées)."""
    block = tuple(range(n)) if block is None else tuple(int(j) for j in block)
    mask = np.zeros(n)
    mask[list(block)] = 1.0
    w = mask * np.asarray(weights, dtype=float)
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)

    def directional(x, d):
        shifted = x - c
        slopes = np.where(shifted != 0.0, np.sign(shifted) * d, np.abs(d))
        return float(np.sum(w * slopes))

    params = {'weights': w.tolist(), 'center': c.tolist(), 'block': list(block)}
    return ConvexTerm(
        eval=lambda x: float(np.sum(w * np.abs(x - c))),
        prox=lambda x, t: prox_weighted_l1(x, t, w, c),
        directional=directional,
        kind=kind,
        params=params,
        block=block,
        separable=True,
    )


def _smooth_from_spec(data: dict, n: int, path: str) -> SmoothTerm:
    kind = _require(data, 'kind', path)
    if kind == 'quadratic':
        Q = _matrix(_require(data, 'Q', path), n, f"{path}.Q")
        if not np.allclose(Q, Q.T, atol=1e-12):
            raise InconsistentDimensions("Q doit être symétrique", field=f"{path}.Q")
        b = _vector(data.get('b', 0.0), n, f"{path}.b")
        c = _optional_float(data, 'c', path) or 0.0
        return quadratic_term(Q, b, c)
    if kind == 'zero':
        return zero_smooth(n)
    if kind == 'negated_square':
        scale = _optional_float(data, 'scale', path)
        return negated_square_term(n, 1.0 if scale is None else scale)
    if kind == 'custom_id':
        ident = _require(data, 'id', path)
        if ident not in CUSTOM_SMOOTH:
            raise UnknownKind(f"Objectif custom inconnu '{ident}'", field=f"{path}.id")
        return CUSTOM_SMOOTH[ident](n)
    raise UnknownKind(f"Partie lisse inconnue '{kind}'", field=f"{path}.kind")


def _convex_from_spec(data: dict, n: int, path: str) -> ConvexTerm:
    kind = _require(data, 'kind', path)
    if kind in ('zero', 'indicator-free'):
        return zero_convex(n)
    if kind in ('abs', 'l1'):
        weights = _vector(data.get('weights', 1.0), n, f"{path}.weights")
        if np.any(weights < 0):
            raise ParseError("Les poids l1 doivent être ≥ 0", field=f"{path}.weights")
        center = _vector(data['center'], n, f"{path}.center") if 'center' in data else None
        block = data.get('block')
        if block is not None:
            if not isinstance(block, list) or any(not isinstance(j, int) or not 0 <= j < n for j in block):
                raise InconsistentDimensions(f"Indices de bloc hors de [0, {n})", field=f"{path}.block")
        return l1_term(n, weights, center, block, kind=kind)
    raise UnknownKind(f"Partie convexe inconnue '{kind}'", field=f"{path}.kind")


def _set_from_spec(data: dict, n: int) -> FeasibleSet:
    kind = _require(data, 'kind', 'set')
    if kind == 'reals':
        box = data.get('bounding_box')
        if box is None:
            return FeasibleSet.reals(n)
        lo = _vector(_require(box, 'lo', 'set.bounding_box'), n, 'set.bounding_box.lo')
        hi = _vector(_require(box, 'hi', 'set.bounding_box'), n, 'set.bounding_box.hi')
        return FeasibleSet.reals(n, (lo, hi))
    if kind == 'box':
        lo = _vector(_require(data, 'lo', 'set'), n, 'set.lo', allow_null=True, fill=-np.inf)
        hi = _vector(_require(data, 'hi', 'set'), n, 'set.hi', allow_null=True, fill=np.inf)
        if np.any(lo > hi):
            raise InconsistentDimensions("lo > hi", field='set')
        return FeasibleSet.box(lo, hi)
    if kind == 'ball':
        center = _vector(_require(data, 'center', 'set'), n, 'set.center')
        radius = _optional_float(data, 'radius', 'set')
        if radius is None or radius <= 0:
            raise ParseError("Rayon > 0 attendu", field='set.radius')
        return FeasibleSet.ball(center, radius)
    raise UnknownKind(f"Ensemble inconnu '{kind}'", field='set.kind')


def _facts_from_spec(data: Optional[dict], path: str) -> ObjectiveFacts:
    data = data or {}
    try:
        return ObjectiveFacts(
            mu=_optional_float(data, 'mu', path),
            sigma=_optional_float(data, 'sigma', path),
            lip=_optional_float(data, 'L', path),
            f_convex=bool(data.get('f_convex', False)),
            F_convex=bool(data.get('F_convex', False)),
            F_strictly_convex=bool(data.get('F_strictly_convex', False)),
            level_bounded=data.get('level_bounded'),
        )
    except ValueError as exc:
        raise ParseError(str(exc), field=path) from exc


def _points(value, n: int, path: str) -> List[np.ndarray]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ParseError("Liste de points attendue", field=path)
    return [_vector(p, n, f"{path}[{k}]") for k, p in enumerate(value)]


def _known_from_spec(data: Optional[dict], n: int, feasible_set: FeasibleSet) -> KnownSolutions:
    data = data or {}
    known = KnownSolutions(
        weak_pareto_points=_points(data.get('weak_pareto_points'), n, 'known.weak_pareto_points'),
        stationary_points=_points(data.get('stationary_points'), n, 'known.stationary_points'),
        non_solution_points=_points(data.get('non_solution_points'), n, 'known.non_solution_points'),
        closed_forms=dict(data.get('closed_forms', {})),
        identically_zero=tuple(data.get('identically_zero', ())),
    )
    for key in ('pareto_set', 'weak_pareto_set'):
        if key in data:
            try:
                setattr(known, key, solution_set_from_dict(data[key], feasible_set))
            except KeyError as exc:
                raise UnknownKind(f"Géométrie inconnue {exc}", field=f"known.{key}.kind") from exc
    for name, ident in known.closed_forms.items():
        if ident not in CLOSED_FORMS:
            raise UnknownKind(f"Forme close inconnue '{ident}'", field=f"known.closed_forms.{name}")
    return known


# === FAMILLES ===

def random_quadratics(seed: int, n: int, m: int, sigma_range=(1.0, 4.0), center_range=(-2.0, 2.0),
                      halfwidth: float = 5.0) -> dict:
    """
    Document explicite de m quadratiques fortement convexes f_i(x) = ½(x − c_i)ᵀQ_i(x − c_i),
    Q_i = R diag(s) Rᵀ avec s uniforme dans sigma_range; μ_i = σ_i = λ_min, L_i = λ_max.
    """
    rng = np.random.default_rng(seed)
    lo_s, hi_s = float(sigma_range[0]), float(sigma_range[1])
    if not 0 < lo_s <= hi_s:
        raise ParseError("sigma_range invalide", field='family.sigma_range')
    objectives, Qs, centers = [], [], []
    for _ in range(m):
        R, _ = np.linalg.qr(rng.standard_normal((n, n)))
        eig = np.sort(rng.uniform(lo_s, hi_s, n))
        Q = R @ np.diag(eig) @ R.T
        Q = 0.5 * (Q + Q.T)
        c = rng.uniform(center_range[0], center_range[1], n)
        Qs.append(Q)
        centers.append(c)
        objectives.append({
            'smooth': {'kind': 'quadratic', 'Q': Q.tolist(), 'b': (-Q @ c).tolist(), 'c': float(0.5 * c @ Q @ c)},
            'convex': {'kind': 'zero'},
            'metadata': {'mu': float(eig[0]), 'sigma': float(eig[0]), 'L': float(eig[-1]),
                         'f_convex': True, 'F_convex': True, 'F_strictly_convex': True, 'level_bounded': True},
        })
    # Minimiseurs pondérés: points de Pareto pour des poids tirés
    pareto_points = [c.tolist() for c in centers]
    for _ in range(4):
        lam = rng.dirichlet(np.ones(m))
        matrix = sum(l * Q for l, Q in zip(lam, Qs))
        rhs = sum(l * Q @ c for l, Q, c in zip(lam, Qs, centers))
        pareto_points.append(np.linalg.solve(matrix, rhs).tolist())
    known = {'weak_pareto_points': pareto_points}
    if m == 2:
        known['pareto_set'] = WeightedQuadraticCurve(Qs[0], centers[0], Qs[1], centers[1]).to_dict()
    return {
        'n': n,
        'set': {'kind': 'reals', 'bounding_box': {'lo': [-halfwidth] * n, 'hi': [halfwidth] * n}},
        'objectives': objectives,
        'known': known,
    }


def _expand_family(data: dict) -> dict:
    family = data['family']
    kind = _require(family, 'kind', 'family')
    if kind != 'random_quadratics':
        raise UnknownKind(f"Famille inconnue '{kind}'", field='family.kind')
    expanded = random_quadratics(
        seed=int(_require(family, 'seed', 'family')),
        n=int(_require(family, 'n', 'family')),
        m=int(_require(family, 'm', 'family')),
        sigma_range=family.get('sigma_range', (1.0, 4.0)),
    )
    expanded['name'] = data.get('name', 'random_quadratics')
    if 'known' in data:
        expanded['known'].update(data['known'])
    return expanded


# === CHARGEMENT / SÉRIALISATION ===

def build_problem(document: dict) -> MultiobjectiveProblem:
    """Construit un problème depuis un document déjà décodé."""
    if not isinstance(document, dict):
        raise ParseError("Le document doit être un objet JSON")
    if 'family' in document:
        document = _expand_family(document)
    n = _require(document, 'n', '')
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("n doit être un entier ≥ 1", field='n')
    specs = _require(document, 'objectives', '')
    if not isinstance(specs, list) or not specs:
        raise ParseError("Au moins un objectif attendu", field='objectives')
    feasible_set = _set_from_spec(_require(document, 'set', ''), n)

    objectives, facts = [], []
    for k, spec in enumerate(specs):
        path = f"objectives[{k}]"
        smooth = _smooth_from_spec(_require(spec, 'smooth', path), n, f"{path}.smooth")
        convex = _convex_from_spec(spec.get('convex', {'kind': 'zero'}), n, f"{path}.convex")
        objectives.append(Objective(smooth, convex))
        facts.append(_facts_from_spec(spec.get('metadata'), f"{path}.metadata"))

    return MultiobjectiveProblem(
        n=n,
        objectives=objectives,
        feasible_set=feasible_set,
        metadata=ConvexityMetadata(tuple(facts)),
        name=str(document.get('name', 'problem')),
        known=_known_from_spec(document.get('known'), n, feasible_set),
    )


def load_spec(text: str, validate: bool = False, seed: int = 0) -> MultiobjectiveProblem:
    """
    Charge un document ProblemSpec (JSON).

    Args:
        text: Contenu du fichier
        validate: Lance validate_problem après construction
        seed: Graine de la validation

    Returns:
        MultiobjectiveProblem

    Raises:
        ParseError, UnknownKind, InconsistentDimensions
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"JSON invalide: {exc.msg}", line=exc.lineno) from exc
    problem = build_problem(document)
    logger.debug(f"[ZOO] Problème '{problem.name}' chargé (n={problem.n}, m={problem.m})")
    if validate:
        validate_problem(problem, seed=seed)
    return problem


def _known_to_dict(known: KnownSolutions) -> dict:
    data = {}
    for key in ('weak_pareto_points', 'stationary_points', 'non_solution_points'):
        points = getattr(known, key)
        if points:
            data[key] = [np.asarray(p).tolist() for p in points]
    if known.pareto_set is not None:
        data['pareto_set'] = known.pareto_set.to_dict()
    if known.weak_pareto_set is not None:
        data['weak_pareto_set'] = known.weak_pareto_set.to_dict()
    if known.closed_forms:
        data['closed_forms'] = dict(known.closed_forms)
    if known.identically_zero:
        data['identically_zero'] = list(known.identically_zero)
    return data


def serialize(problem: MultiobjectiveProblem) -> str:
    """
    Document JSON explicite équivalent (familles développées).

    Raises:
        UnsupportedProblem: si un terme n'a pas de représentation déclarative
    """
    objectives = []
    for i, objective in enumerate(problem.objectives):
        f, g = objective.f, objective.g
        if f.kind == 'quadratic':
            smooth = {'kind': 'quadratic', **f.params}
        elif f.kind == 'zero':
            smooth = {'kind': 'zero'}
        elif f.kind == 'negated_square':
            smooth = {'kind': 'negated_square', **f.params}
        elif f.kind == 'custom_id':
            smooth = {'kind': 'custom_id', 'id': f.params['id']}
        else:
            raise UnsupportedProblem(f"Partie lisse '{f.kind}' non sérialisable")
        if g.kind == 'zero':
            convex = {'kind': 'zero'}
        elif g.kind in ('abs', 'l1'):
            convex = {'kind': 'l1', **g.params}
        else:
            raise UnsupportedProblem(f"Partie convexe '{g.kind}' non sérialisable")
        facts = problem.metadata[i]
        metadata = {key: value for key, value in (
            ('mu', facts.mu), ('sigma', facts.sigma), ('L', facts.lip), ('level_bounded', facts.level_bounded),
        ) if value is not None}
        metadata.update({'f_convex': facts.f_convex, 'F_convex': facts.F_convex,
                         'F_strictly_convex': facts.F_strictly_convex})
        objectives.append({'smooth': smooth, 'convex': convex, 'metadata': metadata})
    document = {
        'name': problem.name,
        'n': problem.n,
        'set': problem.feasible_set.to_dict(),
        'objectives': objectives,
        'known': _known_to_dict(problem.known),
    }
    return json.dumps(document, indent=2, sort_keys=True)


# === PROBLÈMES INTÉGRÉS ===

@dataclass(frozen=True)
class ZooEntry:
    """Problème intégré: identifiant, document et provenance."""
    id: str
    document: dict
    provenance: str


def _quad_pair_doc(name, n, c1, c2, scale, halfwidth, modulus):
    """F_i = scale·‖x − c_i‖² (Q = 2·scale·I)."""
    objectives = []
    for c in (c1, c2):
        c = np.asarray(c, dtype=float)
        Q = 2.0 * scale * np.eye(n)
        objectives.append({
            'smooth': {'kind': 'quadratic', 'Q': Q.tolist(), 'b': (-Q @ c).tolist(), 'c': float(scale * c @ c)},
            'convex': {'kind': 'zero'},
            'metadata': {'mu': modulus, 'sigma': modulus, 'L': modulus, 'f_convex': True, 'F_convex': True,
                         'F_strictly_convex': True, 'level_bounded': True},
        })
    return {
        'name': name,
        'n': n,
        'set': {'kind': 'reals', 'bounding_box': {'lo': [-halfwidth] * n, 'hi': [halfwidth] * n}},
        'objectives': objectives,
    }


def _builtin_entries() -> List[ZooEntry]:
    entries = []

    entries.append(ZooEntry('paper-abs', {
        'name': 'paper-abs', 'n': 1,
        'set': {'kind': 'box', 'lo': [-3.0], 'hi': [3.0]},
        'objectives': [{
            'smooth': {'kind': 'zero'}, 'convex': {'kind': 'abs'},
            'metadata': {'mu': 0.0, 'f_convex': True, 'F_convex': True, 'level_bounded': True},
        }],
        'known': {
            'weak_pareto_points': [[0.0]], 'stationary_points': [[0.0]],
            'non_solution_points': [[0.5], [2.0], [-1.5]],
            'pareto_set': {'kind': 'points', 'points': [[0.0]]},
            'closed_forms': {'u_ell': 'abs_u_ell'},
        },
    }, "Exemple de référence: F(x) = |x|, minimal seulement en x = 0; u_ℓ en forme close"))

    entries.append(ZooEntry('paper-negsq', {
        'name': 'paper-negsq', 'n': 1,
        'set': {'kind': 'box', 'lo': [-1.0], 'hi': [1.0]},
        'objectives': [{
            'smooth': {'kind': 'negated_square'}, 'convex': {'kind': 'zero'},
            'metadata': {'mu': -2.0, 'L': 2.0, 'level_bounded': False},
        }],
        'known': {
            'weak_pareto_points': [[-1.0], [1.0]],
            'stationary_points': [[0.0]],
            'non_solution_points': [[0.5], [-0.3]],
        },
    }, "Exemple de référence: f(x) = −x², x = 0 stationnaire mais pas faiblement Pareto-optimal; "
       "S = [−1, 1] au lieu de ℝ pour que u₀ reste fini (w_ℓ inchangé en 0)"))

    entries.append(ZooEntry('paper-levelbound', {
        'name': 'paper-levelbound', 'n': 1,
        'set': {'kind': 'reals', 'bounding_box': {'lo': [-3.0], 'hi': [3.0]}},
        'objectives': [
            {'smooth': {'kind': 'quadratic', 'Q': [[2.0]], 'b': [0.0], 'c': 0.0}, 'convex': {'kind': 'zero'},
             'metadata': {'mu': 2.0, 'sigma': 2.0, 'L': 2.0, 'f_convex': True, 'F_convex': True,
                          'F_strictly_convex': True, 'level_bounded': True}},
            {'smooth': {'kind': 'zero'}, 'convex': {'kind': 'zero'},
             'metadata': {'mu': 0.0, 'f_convex': True, 'F_convex': True, 'level_bounded': False}},
        ],
        'known': {
            'weak_pareto_set': {'kind': 'everywhere'},
            'pareto_set': {'kind': 'points', 'points': [[0.0]]},
            'identically_zero': ['u0', 'u_ell', 'w_ell'],
        },
    }, "Exemple de référence: F = (x², 0) est bornée en niveau mais u₀ ≡ 0"))

    doc = _quad_pair_doc('quad-pair-1d', 1, [1.0], [-1.0], 1.0, 4.0, 2.0)
    doc['known'] = {
        'weak_pareto_set': {'kind': 'polyline', 'vertices': [[-1.0], [1.0]]},
        'pareto_set': {'kind': 'polyline', 'vertices': [[-1.0], [1.0]]},
        'weak_pareto_points': [[0.3], [-1.0], [1.0]],
        'non_solution_points': [[2.0], [-2.5], [3.0]],
    }
    entries.append(ZooEntry('quad-pair-1d', doc, "Construit: F_i = (x ∓ 1)², X* = [−1, 1]"))

    doc = _quad_pair_doc('quad-pair-2d', 2, [1.0, 0.0], [-1.0, 0.0], 1.0, 3.0, 2.0)
    doc['known'] = {
        'pareto_set': {'kind': 'polyline', 'vertices': [[-1.0, 0.0], [1.0, 0.0]]},
        'weak_pareto_points': [[0.0, 0.0], [0.5, 0.0]],
        'non_solution_points': [[0.0, 1.5], [2.0, -1.0]],
    }
    entries.append(ZooEntry('quad-pair-2d', doc, "Construit: F_i = ‖x − c_i‖², X* = segment [c₂, c₁]"))

    entries.append(ZooEntry('composite-pair-1d', {
        'name': 'composite-pair-1d', 'n': 1,
        'set': {'kind': 'reals', 'bounding_box': {'lo': [-3.0], 'hi': [3.0]}},
        'objectives': [
            {'smooth': {'kind': 'quadratic', 'Q': [[1.0]], 'b': [-c], 'c': 0.5},
             'convex': {'kind': 'l1', 'weights': 0.5},
             'metadata': {'mu': 1.0, 'sigma': 1.0, 'L': 1.0, 'f_convex': True, 'F_convex': True,
                          'F_strictly_convex': True, 'level_bounded': True}}
            for c in (1.0, -1.0)
        ],
        'known': {
            'pareto_set': {'kind': 'polyline', 'vertices': [[-0.5], [0.5]]},
            'weak_pareto_points': [[0.0], [0.25], [-0.5]],
            'non_solution_points': [[1.5], [-2.0]],
        },
    }, "Construit: f_i = ½(x ∓ 1)², g = ½|x| partagée, X* = [−½, ½]"))

    entries.append(ZooEntry('abs-pair-1d', {
        'name': 'abs-pair-1d', 'n': 1,
        'set': {'kind': 'box', 'lo': [-3.0], 'hi': [3.0]},
        'objectives': [
            {'smooth': {'kind': 'zero'}, 'convex': {'kind': 'l1', 'center': [c]},
             'metadata': {'mu': 0.0, 'f_convex': True, 'F_convex': True, 'level_bounded': True}}
            for c in (1.0, -1.0)
        ],
        'known': {
            'weak_pareto_set': {'kind': 'polyline', 'vertices': [[-1.0], [1.0]]},
            'weak_pareto_points': [[0.0], [0.6]],
            'non_solution_points': [[2.0], [-2.5]],
        },
    }, "Construit: g_i = |x ∓ 1| distinctes (prox itératif), X* = [−1, 1]"))

    entries.append(ZooEntry('l1-blocks-2d', {
        'name': 'l1-blocks-2d', 'n': 2,
        'set': {'kind': 'reals', 'bounding_box': {'lo': [-3.0, -3.0], 'hi': [3.0, 3.0]}},
        'objectives': [
            {'smooth': {'kind': 'quadratic', 'Q': [[1.0, 0.0], [0.0, 1.0]], 'b': [-2.0, -1.0], 'c': 2.5},
             'convex': {'kind': 'l1', 'block': [0]},
             'metadata': {'mu': 1.0, 'sigma': 1.0, 'L': 1.0, 'f_convex': True, 'F_convex': True,
                          'F_strictly_convex': True, 'level_bounded': True}},
            {'smooth': {'kind': 'quadratic', 'Q': [[1.0, 0.0], [0.0, 1.0]], 'b': [-1.0, -2.0], 'c': 2.5},
             'convex': {'kind': 'l1', 'block': [1]},
             'metadata': {'mu': 1.0, 'sigma': 1.0, 'L': 1.0, 'f_convex': True, 'F_convex': True,
                          'F_strictly_convex': True, 'level_bounded': True}},
        ],
        'known': {
            'pareto_set': {'kind': 'points', 'points': [[1.0, 1.0]]},
            'weak_pareto_points': [[1.0, 1.0]],
            'non_solution_points': [[-1.0, 2.0], [2.5, -1.0]],
        },
    }, "Construit: blocs disjoints g₁ = |x₁|, g₂ = |x₂|, point idéal (1, 1)"))

    doc = _quad_pair_doc('box-pair-2d', 2, [2.0, 0.0], [0.0, 2.0], 1.0, 1.0, 2.0)
    doc['set'] = {'kind': 'box', 'lo': [-1.0, -1.0], 'hi': [1.0, 1.0]}
    doc['known'] = {
        'pareto_set': {'kind': 'polyline', 'vertices': [[0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]},
        'weak_pareto_points': [[1.0, 1.0], [0.5, 1.0]],
        'non_solution_points': [[-1.0, -1.0], [0.0, 0.0]],
    }
    entries.append(ZooEntry('box-pair-2d', doc, "Construit: F_i = ‖x − c_i‖² sur [−1, 1]², X* polyligne"))

    entries.append(ZooEntry('random-quad-2d', {
        'name': 'random-quad-2d',
        'family': {'kind': 'random_quadratics', 'seed': 7, 'n': 2, 'm': 2, 'sigma_range': [1.0, 4.0]},
    }, "Famille: quadratiques fortement convexes aléatoires (graine 7), X* courbe des minimiseurs pondérés"))

    entries.append(ZooEntry('random-quad-3obj', {
        'name': 'random-quad-3obj',
        'family': {'kind': 'random_quadratics', 'seed': 11, 'n': 2, 'm': 3, 'sigma_range': [1.0, 3.0]},
    }, "Famille: trois quadratiques fortement convexes aléatoires (graine 11)"))

    return entries


class ProblemZoo:
    """
    Registre des problèmes intégrés.
    Chaque appel à `get` reconstruit un problème neuf depuis son document.
    """

    def __init__(self, entries: Optional[List[ZooEntry]] = None):
        self.logger = get_logger()
        self._entries: Dict[str, ZooEntry] = {}
        for entry in (entries if entries is not None else _builtin_entries()):
            self.register(entry)

    def register(self, entry: ZooEntry) -> None:
        self._entries[entry.id] = entry

    def ids(self) -> List[str]:
        return list(self._entries)

    def entries(self) -> List[ZooEntry]:
        return list(self._entries.values())

    def entry(self, problem_id: str) -> ZooEntry:
        if problem_id not in self._entries:
            raise UnknownId(f"Problème intégré inconnu: '{problem_id}' (disponibles: {', '.join(self._entries)})")
        return self._entries[problem_id]

    def get(self, problem_id: str) -> MultiobjectiveProblem:
        entry = self.entry(problem_id)
        problem = build_problem(json.loads(json.dumps(entry.document)))
        problem.name = entry.id
        self.logger.debug(f"[ZOO] Problème intégré '{problem_id}' construit")
        return problem


_DEFAULT_ZOO: Optional[ProblemZoo] = None


def default_zoo() -> ProblemZoo:
    global _DEFAULT_ZOO
    if _DEFAULT_ZOO is None:
        _DEFAULT_ZOO = ProblemZoo()
    return _DEFAULT_ZOO


def builtin(problem_id: str) -> MultiobjectiveProblem:
    """Problème intégré par identifiant (UnknownId sinon)."""
    return default_zoo().get(problem_id)
