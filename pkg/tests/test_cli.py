"""
tests/test_cli.py
=================
Interface en ligne de commande: sous-commandes, CSV produits, codes de sortie
"""

import csv
import io

import pytest

from cli.config import CliConfig, UsageError
from core.merit import MeritKind
from main import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _table(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [dict(zip(rows[0], row)) for row in rows[1:]]


# === EVAL ===

def test_eval_reference_example(capsys):
    code, out, _ = _run(capsys, 'eval', '--builtin', 'paper-abs', '--kind', 'u_ell', '--ell', '1',
                        '--points', '0,0.5,2')
    assert code == 0
    header, rows = _table(out)
    assert header[:5] == ['index', 'x', 'kind', 'ell', 'value']
    assert [float(r['value']) for r in rows] == pytest.approx([0.0, 0.375, 0.5], abs=1e-9)
    assert [r['index'] for r in rows] == ['0', '1', '2']
    assert all(r['route'] == 'dual' and r['error'] == '' for r in rows)


def test_eval_stationary_point_of_negated_square(capsys):
    code, out, _ = _run(capsys, 'eval', '--builtin', 'paper-negsq', '--kind', 'w_ell', '--ell', '0.5,1,2',
                        '--points', '0')
    assert code == 0
    _, rows = _table(out)
    assert len(rows) == 3
    assert all(abs(float(r['value'])) <= 1e-8 for r in rows)


def test_eval_u_ell_on_nonconvex_problem_is_evaluation_failure(capsys):
    code, out, _ = _run(capsys, 'eval', '--builtin', 'paper-negsq', '--points', '0.5')
    assert code == 2
    _, rows = _table(out)
    assert rows[0]['value'] == ''
    assert rows[0]['error'].startswith('ConvexityRequired')


def test_eval_writes_output_file(capsys, tmp_path):
    target = tmp_path / 'eval.csv'
    code, out, _ = _run(capsys, 'eval', '--builtin', 'quad-pair-1d', '--sample', '3', '--seed', '1',
                        '-o', str(target))
    assert code == 0
    assert out == ''
    _, rows = _table(target.read_text(encoding='utf-8'))
    assert len(rows) == 3


# === CODES D'ERREUR ===

def test_unknown_builtin_is_usage_error(capsys):
    code, _, err = _run(capsys, 'eval', '--builtin', 'paper-cubic', '--points', '0')
    assert code == 64
    assert 'paper-cubic' in err


def test_points_csv_dimension_mismatch_is_data_error(capsys, tmp_path):
    path = tmp_path / 'points.csv'
    path.write_text('x1,x2\n0,1\n', encoding='utf-8')
    code, _, _ = _run(capsys, 'eval', '--builtin', 'paper-abs', '--points-csv', str(path))
    assert code == 65


def test_missing_points_file_is_file_error(capsys, tmp_path):
    code, _, _ = _run(capsys, 'trace', '--builtin', 'paper-abs', '--points-csv', str(tmp_path / 'absent.csv'))
    assert code == 66


def test_argument_errors_exit_with_usage_code(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['eval', '--builtin', 'paper-abs', '--kind', 'v_ell', '--points', '0'])
    assert excinfo.value.code == 64


def test_corrupted_spec_with_validation_is_data_error(capsys, corrupted_spec_path):
    code, _, err = _run(capsys, 'eval', '--spec', str(corrupted_spec_path), '--validate', '--points', '3')
    assert code == 65
    assert 'lipschitz' in err


def test_spec_documents_are_validated_by_default(capsys, corrupted_spec_path):
    code, out, err = _run(capsys, 'eval', '--spec', str(corrupted_spec_path), '--points', '3')
    assert code == 65
    assert out == ""
    assert 'lipschitz' in err


def test_no_validate_skips_spec_validation(capsys, corrupted_spec_path):
    code, out, _ = _run(capsys, 'eval', '--spec', str(corrupted_spec_path), '--no-validate', '--points', '3')
    assert code != 65
    assert out.startswith('index,')


def test_validation_defaults():
    spec = CliConfig(subcommand='eval', spec_path='p.json', points='0')
    assert spec.validation
    assert not CliConfig(subcommand='eval', spec_path='p.json', points='0', no_validate=True).validation
    assert not CliConfig(subcommand='eval', builtin='paper-abs', points='0').validation
    assert CliConfig(subcommand='eval', builtin='paper-abs', points='0', validate=True).validation
    assert not CliConfig(subcommand='verify', spec_path='p.json').validation
    with pytest.raises(UsageError):
        CliConfig(subcommand='eval', builtin='paper-abs', points='0', validate=True, no_validate=True)


@pytest.mark.parametrize("kwargs", [
    {'subcommand': 'sweep', 'builtin': 'paper-abs', 'points': '0.5'},
    {'subcommand': 'sweep', 'builtin': 'paper-abs', 'points': '0.5', 'ells': (1.0,), 'kind': MeritKind.U0},
    {'subcommand': 'eval', 'points': '0.5'},
    {'subcommand': 'eval', 'builtin': 'paper-abs', 'points': '0.5', 'sample': 3},
    {'subcommand': 'eval', 'builtin': 'paper-abs', 'points': '0.5', 'ells': (2.0,), 'r': 1.0},
    {'subcommand': 'trace', 'builtin': 'paper-abs', 'points': '0.5'},
    {'subcommand': 'verify', 'builtin': 'paper-abs', 'problems': ('quad-pair-1d',)},
])
def test_inconsistent_options_are_rejected(kwargs):
    with pytest.raises(UsageError):
        CliConfig(**kwargs)


def test_eval_defaults_to_unit_ell():
    cfg = CliConfig(subcommand='eval', builtin='paper-abs', points='0.5', r=2.0)
    assert cfg.ells == (1.0,)
    assert cfg.merit_ells == (1.0, 2.0)
    assert CliConfig(subcommand='eval', builtin='paper-abs', points='0', kind=MeritKind.U0).merit_ells == (0.0,)


# === SWEEP / TRACE ===

def test_sweep_is_nonincreasing_in_ell(capsys):
    code, out, _ = _run(capsys, 'sweep', '--builtin', 'paper-abs', '--points', '0.5', '--ell', '4,1,2')
    assert code == 0
    _, rows = _table(out)
    assert [float(r['ell']) for r in rows] == [1.0, 2.0, 4.0]
    values = [float(r['value']) for r in rows]
    assert values == pytest.approx([0.375, 0.25, 0.125], abs=1e-9)
    assert rows[0]['ratio'] == '' and rows[0]['ratio_bound'] == ''
    for r in rows[1:]:
        assert float(r['ratio']) <= float(r['ratio_bound']) + 1e-9


def test_sweep_at_weak_pareto_point_is_zero(capsys):
    code, out, _ = _run(capsys, 'sweep', '--builtin', 'quad-pair-1d', '--points', '0.3', '--ell', '0.5,1,2',
                        '--kind', 'w_ell')
    assert code == 0
    _, rows = _table(out)
    assert all(abs(float(r['value'])) <= 1e-6 for r in rows)


def test_trace_of_converging_sequence(capsys, tmp_path):
    path = tmp_path / 'iterates.csv'
    path.write_text('x1\n2\n1\n0.5\n0.1\n0\n', encoding='utf-8')
    code, out, _ = _run(capsys, 'trace', '--builtin', 'paper-abs', '--points-csv', str(path))
    assert code == 0
    header, rows = _table(out)
    assert header == ['iterate', 'kind', 'ell', 'value', 'error']
    values = [float(r['value']) for r in rows]
    assert values == sorted(values, reverse=True)
    assert values[-1] <= 1e-6


def test_trace_of_constant_sequence_at_non_solution(capsys, tmp_path):
    path = tmp_path / 'iterates.csv'
    path.write_text('x1\n2\n2\n2\n', encoding='utf-8')
    code, out, _ = _run(capsys, 'trace', '--builtin', 'quad-pair-1d', '--kind', 'w_ell', '--points-csv', str(path))
    assert code == 0
    _, rows = _table(out)
    values = {r['value'] for r in rows}
    assert len(values) == 1 and float(values.pop()) > 0.1


# === VERIFY ===

def test_verify_is_deterministic(capsys, tmp_path):
    first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
    argv = ['verify', '--problems', 'quad-pair-1d,paper-abs', '--samples', '3', '--seed', '4']
    assert main(argv + ['-o', str(first)]) == 0
    assert main(argv + ['-o', str(second), '--jobs', '2']) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()


def test_verify_writes_report_directory(capsys, tmp_path):
    code, out, _ = _run(capsys, 'verify', '--builtin', 'random-quad-2d', '--checks', 'ERROR_BOUND_W',
                        '--samples', '4', '--report-dir', str(tmp_path / 'reports'))
    assert code == 0
    assert '[PASS] ERROR_BOUND_W' in out
    written = sorted(p.suffix for p in (tmp_path / 'reports').iterdir())
    assert written == ['.csv', '.txt']


def test_verify_corrupted_fixture_fails(capsys, corrupted_spec_path):
    code, out, _ = _run(capsys, 'verify', '--spec', str(corrupted_spec_path), '--checks', 'BETWEEN_LIPSCHITZ',
                        '--samples', '12', '--seed', '0')
    assert code == 1
    assert '[FAIL] BETWEEN_LIPSCHITZ' in out
    assert 'corrupted-lipschitz' in out


def test_verify_unknown_check_is_usage_error(capsys):
    code, _, _ = _run(capsys, 'verify', '--checks', 'BETWEEN_EVERYTHING')
    assert code == 64


# === ZOO-LIST ===

def test_zoo_list(capsys):
    code, out, _ = _run(capsys, 'zoo-list')
    assert code == 0
    header, rows = _table(out)
    assert header == ['id', 'n', 'm', 'provenance']
    by_id = {r['id']: r for r in rows}
    assert by_id['paper-abs']['n'] == '1'
    assert by_id['random-quad-3obj']['m'] == '3'
