"""
tests/test_zoo.py
=================
Zoo de problèmes et format déclaratif ProblemSpec
"""

import json

import numpy as np
import pytest

from core.errors import InconsistentDimensions, ParseError, UnknownId, UnknownKind
from core.merit import eval_u0
from core.zoo import ProblemZoo, ZooEntry, build_problem, load_spec, random_quadratics, serialize


def _document(**overrides) -> dict:
    document = {
        'name': 'doc',
        'n': 2,
        'set': {'kind': 'box', 'lo': [-1.0, -1.0], 'hi': [1.0, 1.0]},
        'objectives': [
            {'smooth': {'kind': 'quadratic', 'Q': [[2.0, 0.0], [0.0, 2.0]], 'b': [0.0, 0.0]},
             'convex': {'kind': 'l1', 'weights': [1.0, 0.5]},
             'metadata': {'mu': 2.0, 'sigma': 2.0, 'L': 2.0, 'f_convex': True, 'F_convex': True}},
            {'smooth': {'kind': 'zero'}, 'convex': {'kind': 'abs'}},
        ],
    }
    document.update(overrides)
    return document


def test_load_spec_builds_oracles():
    problem = load_spec(json.dumps(_document()))
    assert (problem.n, problem.m, problem.name) == (2, 2, 'doc')
    x = np.array([0.5, -1.0])
    assert problem.F(x) == pytest.approx([1.25 + 1.0, 1.5])
    assert problem.metadata[0].sigma == 2.0
    assert problem.metadata[1].sigma is None


def test_invalid_json_reports_line():
    with pytest.raises(ParseError) as excinfo:
        load_spec('{\n  "n": 1,\n  "objectives": [\n}')
    assert excinfo.value.line == 4


def test_missing_field_reports_path():
    document = _document()
    del document['objectives'][1]['smooth']
    with pytest.raises(ParseError) as excinfo:
        build_problem(document)
    assert excinfo.value.field == 'objectives[1].smooth'


@pytest.mark.parametrize("patch, field", [
    (lambda d: d['objectives'][0]['smooth'].update(kind='cubic'), 'objectives[0].smooth.kind'),
    (lambda d: d['objectives'][1]['convex'].update(kind='huber'), 'objectives[1].convex.kind'),
    (lambda d: d['set'].update(kind='simplex'), 'set.kind'),
    (lambda d: d['objectives'][1].update(smooth={'kind': 'custom_id', 'id': 'rosenbrock'}), 'objectives[1].smooth.id'),
])
def test_unknown_kinds(patch, field):
    document = _document()
    patch(document)
    with pytest.raises(UnknownKind) as excinfo:
        build_problem(document)
    assert excinfo.value.field == field


@pytest.mark.parametrize("patch", [
    lambda d: d['objectives'][0]['smooth'].update(Q=[[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]]),
    lambda d: d['objectives'][0]['smooth'].update(b=[1.0]),
    lambda d: d['objectives'][0]['smooth'].update(Q=[[2.0, 1.0], [0.0, 2.0]]),
    lambda d: d['set'].update(lo=[1.0, 1.0], hi=[0.0, 0.0]),
    lambda d: d['objectives'][1]['convex'].update(block=[2]),
])
def test_inconsistent_dimensions(patch):
    document = _document()
    patch(document)
    with pytest.raises(InconsistentDimensions):
        build_problem(document)


def test_serialize_then_load_preserves_problem(zoo):
    for problem_id in ('composite-pair-1d', 'l1-blocks-2d', 'paper-negsq', 'random-quad-2d'):
        original = zoo.get(problem_id)
        restored = load_spec(serialize(original))
        assert restored.name == problem_id
        for x in np.random.default_rng(0).uniform(-1.0, 1.0, (5, original.n)):
            assert np.allclose(restored.F(x), original.F(x))
            assert np.allclose(restored.jacobian(x), original.jacobian(x))
        assert restored.metadata == original.metadata


def test_random_quadratics_family_is_reproducible():
    assert random_quadratics(3, 2, 2) == random_quadratics(3, 2, 2)
    problem = build_problem({'name': 'fam', 'family': {'kind': 'random_quadratics', 'seed': 3, 'n': 2, 'm': 3}})
    assert problem.m == 3
    for facts in problem.metadata:
        assert 0 < facts.sigma <= facts.lip
    assert problem.known.pareto_set is None
    with pytest.raises(UnknownKind):
        build_problem({'family': {'kind': 'rosenbrock', 'seed': 0, 'n': 2, 'm': 2}})


def test_zoo_registry(zoo):
    ids = zoo.ids()
    for expected in ('paper-abs', 'paper-negsq', 'paper-levelbound', 'quad-pair-1d', 'random-quad-2d'):
        assert expected in ids
    assert all(entry.provenance for entry in zoo.entries())
    assert zoo.get('paper-abs') is not zoo.get('paper-abs')
    with pytest.raises(UnknownId):
        zoo.get('paper-cubic')


def test_known_solution_geometry(zoo):
    problem = zoo.get('quad-pair-1d')
    assert problem.known.pareto_set.distance(np.array([3.0])) == pytest.approx(2.0)
    assert problem.known.pareto_set.distance(np.array([0.2])) == pytest.approx(0.0)

    boxed = zoo.get('box-pair-2d')
    assert boxed.known.pareto_set.distance(np.array([0.0, 0.0])) == pytest.approx(1.0)


def test_negated_square_is_bounded_so_u0_stays_finite(zoo):
    entry = zoo.entry('paper-negsq')
    assert "u₀ reste fini" in entry.provenance
    problem = zoo.get('paper-negsq')
    assert problem.feasible_set.kind == 'box'
    evaluation = eval_u0(problem, [0.0])
    assert evaluation.diagnostics.route == "grid"
    assert evaluation.value == pytest.approx(1.0)


def test_custom_zoo_entries():
    custom = ProblemZoo([ZooEntry('only', _document(), "Construit pour le test")])
    assert custom.ids() == ['only']
    assert custom.get('only').name == 'only'
