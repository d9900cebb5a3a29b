"""
cli/commands.py
===============
Sous-commandes: eval, verify, sweep, trace, zoo-list

Chaque commande écrit son CSV (stdout ou --output) et renvoie un code de
sortie. `run_command` convertit les exceptions en codes de sortie.
"""

import sys
from typing import List, Optional, TextIO

from core.constants import EXIT_DATA, EXIT_EVALUATION_FAILED, EXIT_FILE, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED
from core.errors import MeritError, OracleInconsistent, ParseError, UnknownId
from core.logger import get_logger
from core.main_controller import EvalRow, MeritController
from core.merit import MeritKind
from core.report_manager import (
    EVAL_COLUMNS, SWEEP_COLUMNS, TRACE_COLUMNS, ZOO_COLUMNS, format_float, format_vector,
)
from core.verifier import SamplePlan

from .config import CliConfig, CliError, FileAccessError, UsageError
from .points import load_points, read_points_csv

logger = get_logger()


# === OUTILS COMMUNS ===

def _seed(cfg: CliConfig, controller: MeritController) -> int:
    return cfg.seed if cfg.seed is not None else controller.settings_manager.get_seed()


def _problem(cfg: CliConfig, controller: MeritController, seed: int):
    return controller.load_problem(cfg.builtin, cfg.spec_path, validate=cfg.validation, seed=seed)


def _emit(controller: MeritController, rows: List[list], cfg: CliConfig, stdout: TextIO) -> None:
    """Écrit le CSV sur --output ou sur stdout (FileAccessError si échec)."""
    success, message = controller.report_manager.write_csv(rows, cfg.output, stream=stdout)
    if not success:
        raise FileAccessError(message)
    logger.debug(f"[CLI] {message}")


def _ell_cell(kind: MeritKind, ell: float) -> str:
    return "" if kind is MeritKind.U0 else format_float(ell)


def _eval_cells(row: EvalRow) -> list:
    ev = row.evaluation
    return [
        str(row.index),
        format_vector(row.x),
        row.kind.value,
        _ell_cell(row.kind, row.ell),
        format_float(row.value),
        format_float(ev.fw_gap) if ev else "",
        format_vector(ev.dual_weights.w) if ev else "",
        format_vector(ev.maximizer) if ev else "",
        ev.diagnostics.route if ev else "",
        row.error,
    ]


# === SOUS-COMMANDES ===

def cmd_eval(cfg: CliConfig, controller: MeritController, stdout: TextIO) -> int:
    """Une ligne par (point, ℓ); code 2 si une évaluation a échoué."""
    seed = _seed(cfg, controller)
    problem = _problem(cfg, controller, seed)
    points = load_points(cfg, problem, seed)
    dual = controller.dual_config(cfg.gap_tol, cfg.inner_tol)
    rows = controller.evaluate_points(problem, points, cfg.kind, cfg.merit_ells, dual)
    _emit(controller, [EVAL_COLUMNS] + [_eval_cells(r) for r in rows], cfg, stdout)
    return EXIT_EVALUATION_FAILED if any(r.error for r in rows) else EXIT_OK


def sweep_table(rows: List[EvalRow]) -> List[list]:
    """
    Lignes du balayage avec colonnes de contrôle.

    Pour deux ℓ consécutifs ℓ₁ < ℓ₂ d'un même point: ratio = valeur(ℓ₁)/valeur(ℓ₂),
    ratio_bound = ℓ₂/ℓ₁ (ratio ≤ ratio_bound attendu). Vides sur la première
    ligne d'un point ou si valeur(ℓ₂) est nulle.
    """
    table = [list(SWEEP_COLUMNS)]
    previous: Optional[EvalRow] = None
    for row in rows:
        ratio = bound = ""
        if previous is not None and previous.index == row.index:
            bound = format_float(row.ell / previous.ell)
            if previous.value is not None and row.value is not None and row.value > 0.0:
                ratio = format_float(previous.value / row.value)
        table.append([
            str(row.index), format_vector(row.x), row.kind.value, format_float(row.ell),
            format_float(row.value), ratio, bound, row.error,
        ])
        previous = row
    return table


def _warn_non_monotone(rows: List[EvalRow]) -> None:
    for prev, row in zip(rows, rows[1:]):
        if prev.index != row.index or prev.value is None or row.value is None:
            continue
        slack = 10.0 * max(prev.evaluation.eps_eval, row.evaluation.eps_eval)
        if row.value > prev.value + slack:
            logger.warning(f"[CLI] Balayage non monotone au point {row.index}: "
                           f"{format_float(prev.value)} (ℓ={format_float(prev.ell)}) < "
                           f"{format_float(row.value)} (ℓ={format_float(row.ell)})")


def cmd_sweep(cfg: CliConfig, controller: MeritController, stdout: TextIO) -> int:
    """Valeurs en ℓ croissant pour chaque point (colonne attendue décroissante)."""
    seed = _seed(cfg, controller)
    problem = _problem(cfg, controller, seed)
    points = load_points(cfg, problem, seed)
    dual = controller.dual_config(cfg.gap_tol, cfg.inner_tol)
    rows = controller.sweep(problem, points, cfg.kind, cfg.merit_ells, dual)
    _warn_non_monotone(rows)
    _emit(controller, sweep_table(rows), cfg, stdout)
    return EXIT_EVALUATION_FAILED if any(r.error for r in rows) else EXIT_OK


def cmd_trace(cfg: CliConfig, controller: MeritController, stdout: TextIO) -> int:
    """Mérite le long d'une suite d'itérés lue dans --points-csv."""
    seed = _seed(cfg, controller)
    problem = _problem(cfg, controller, seed)
    iterates = read_points_csv(cfg.points_csv, problem.n)
    ell = cfg.merit_ells[0]
    rows = controller.trace(problem, iterates, cfg.kind, ell, controller.dual_config(cfg.gap_tol, cfg.inner_tol))
    table = [list(TRACE_COLUMNS)] + [
        [str(r.index), r.kind.value, _ell_cell(r.kind, r.ell), format_float(r.value), r.error] for r in rows
    ]
    _emit(controller, table, cfg, stdout)
    return EXIT_EVALUATION_FAILED if any(r.error for r in rows) else EXIT_OK


def cmd_verify(cfg: CliConfig, controller: MeritController, stdout: TextIO) -> int:
    """
    Exécute la suite de contrôles.

    Problèmes: --builtin/--spec, sinon --problems, sinon tout le zoo.
    Le rapport texte part sur stdout; --report-dir écrit texte + CSV,
    --output écrit le CSV seul. Code 1 si un contrôle échoue.
    """
    sm = controller.settings_manager
    seed = _seed(cfg, controller)
    if cfg.builtin or cfg.spec_path:
        problems = [_problem(cfg, controller, seed)]
    else:
        ids = cfg.problems or tuple(controller.zoo.ids())
        problems = [controller.zoo.get(problem_id) for problem_id in ids]

    try:
        plan = SamplePlan(
            problems=tuple(p.name for p in problems),
            points=cfg.samples if cfg.samples is not None else sm.get_verify_samples(),
            ells=cfg.ells or sm.get_verify_ells(),
            seed=seed,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None

    report = controller.verify(problems, cfg.checks or None, plan, controller.dual_config(cfg.gap_tol, cfg.inner_tol))
    stdout.write(report.render_text())

    if cfg.report_dir:
        success, message = controller.report_manager.write_verification_report(report, cfg.report_dir)
        if not success:
            raise FileAccessError(message)
        logger.info(f"[CLI] {message}")
    if cfg.output:
        success, message = controller.report_manager.write_csv(report.csv_rows(), cfg.output)
        if not success:
            raise FileAccessError(message)

    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_zoo_list(cfg: CliConfig, controller: MeritController, stdout: TextIO) -> int:
    """Liste des problèmes intégrés: id, n, m, provenance."""
    table = [list(ZOO_COLUMNS)]
    for entry in controller.zoo_entries():
        problem = controller.zoo.get(entry.id)
        table.append([entry.id, str(problem.n), str(problem.m), entry.provenance])
    _emit(controller, table, cfg, stdout)
    return EXIT_OK


COMMANDS = {
    'eval': cmd_eval,
    'verify': cmd_verify,
    'sweep': cmd_sweep,
    'trace': cmd_trace,
    'zoo-list': cmd_zoo_list,
}


# === DISPATCH ===

def exit_code_for(error: BaseException) -> int:
    """Code de sortie associé à une exception de frontière."""
    if isinstance(error, CliError):
        return error.exit_code
    if isinstance(error, UnknownId):
        return EXIT_USAGE
    if isinstance(error, (ParseError, OracleInconsistent)):
        return EXIT_DATA
    if isinstance(error, OSError):
        return EXIT_FILE
    return EXIT_EVALUATION_FAILED


def run_command(cfg: CliConfig, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None,
                controller: Optional[MeritController] = None) -> int:
    """
    Exécute la sous-commande de `cfg`.

    Args:
        cfg: Configuration validée
        stdout: Flux des CSV et rapports (défaut: sys.stdout)
        stderr: Flux des diagnostics (défaut: sys.stderr)
        controller: Contrôleur (défaut: construit depuis cfg.settings et cfg.jobs)

    Returns:
        Code de sortie
    """
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        controller = controller or MeritController(settings_file=cfg.settings, jobs=cfg.jobs)
        logger.info(f"[CLI] Sous-commande {cfg.subcommand}")
        return COMMANDS[cfg.subcommand](cfg, controller, stdout)
    except (CliError, MeritError, OSError) as e:
        code = exit_code_for(e)
        logger.debug(f"[CLI] {cfg.subcommand} interrompue (code {code})", exc_info=True)
        stderr.write(f"erreur: {e}\n")
        return code
