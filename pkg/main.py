"""
main.py
=======
Point d'entrée principal du Merit Toolkit (ligne de commande)
"""

import argparse
import os
import sys
from typing import List, Optional

from core.constants import APP_NAME, APP_VERSION, ENV_SETTINGS_FILE, EXIT_USAGE
from core.logger import LoggerSetup
from cli.commands import run_command
from cli.config import CliError, build_cli_config


class MeritArgumentParser(argparse.ArgumentParser):
    """ArgumentParser dont les erreurs d'usage sortent avec le code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: erreur: {message}\n")


def _add_problem_source(parser: argparse.ArgumentParser) -> None:
    source = parser.add_argument_group('problème')
    source.add_argument('--builtin', metavar='ID', help='Problème intégré (voir zoo-list)')
    source.add_argument('--spec', metavar='PATH', help='Document ProblemSpec JSON (voir docs/PROBLEM_SPEC.md)')
    source.add_argument('--validate', action='store_true',
                        help='Valide les oracles du problème avant usage (gradients, prox, constantes)')
    source.add_argument('--no-validate', action='store_true',
                        help="N'applique pas la validation par défaut des documents --spec")


def _add_merit_options(parser: argparse.ArgumentParser, ell_help: str) -> None:
    parser.add_argument('--kind', default='u_ell', choices=['u0', 'u_ell', 'w_ell'],
                        help='Fonction de mérite (défaut: u_ell)')
    parser.add_argument('--ell', metavar='L1,L2,...', help=ell_help)


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    solver = parser.add_argument_group('solveurs')
    solver.add_argument('--gap-tol', type=float, metavar='TOL', help='Tolérance du gap Frank–Wolfe')
    solver.add_argument('--inner-tol', type=float, metavar='TOL', help='Tolérance du solveur interne')


def _add_point_source(parser: argparse.ArgumentParser) -> None:
    points = parser.add_mutually_exclusive_group()
    points.add_argument('--points', metavar='LIST', help="Points en ligne: '0,0.5,2' (n=1) ou '1,0;0,1'")
    points.add_argument('--points-csv', metavar='PATH', help='CSV de points, en-tête x1,...,xn')
    points.add_argument('--sample', type=int, metavar='N', help='N points admissibles tirés avec --seed')


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse les arguments de ligne de commande.

    Args:
        argv: Arguments (défaut: sys.argv[1:])

    Returns:
        Namespace avec les arguments
    """
    parser = MeritArgumentParser(
        prog='merit',
        description=f'{APP_NAME} - fonctions de mérite multiobjectif (u₀, u_ℓ, w_ℓ) et vérification de leurs propriétés',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemples d'utilisation:
  python main.py zoo-list
  python main.py eval --builtin paper-abs --kind u_ell --ell 1 --points 0,0.5,2
  python main.py sweep --builtin paper-abs --points 0.5 --ell 1,2,4
  python main.py trace --builtin quad-pair-1d --kind w_ell --points-csv iterates.csv
  python main.py verify --report-dir rapports/ --seed 0
  python main.py verify --checks ERROR_BOUND_W --problems random-quad-2d

Les documents --spec sont validés avant eval, sweep et trace (--no-validate pour s'en dispenser).
Codes de sortie: 0 succès, 1 échec de vérification, 2 échec d'évaluation,
64 usage, 65 données, 66 fichier. Verbosité: --debug ou MERIT_LOG=DEBUG|INFO|WARNING|ERROR.
        """
    )
    parser.add_argument('--debug', action='store_true', help='Active les logs détaillés (stderr)')
    parser.add_argument('--settings', metavar='PATH', default=None,
                        help=f'Fichier INI de paramètres (défaut: variable {ENV_SETTINGS_FILE}, sinon valeurs par défaut)')
    parser.add_argument('--version', action='version', version=f'{APP_NAME} v{APP_VERSION}')

    common = MeritArgumentParser(add_help=False)
    common.add_argument('--output', '-o', metavar='PATH', help='Fichier CSV de sortie (défaut: stdout)')
    common.add_argument('--seed', type=int, metavar='N', help='Graine unique de tout l\'aléa')
    common.add_argument('--jobs', type=int, metavar='N', help='Nombre de threads d\'évaluation')

    subparsers = parser.add_subparsers(dest='command', metavar='COMMANDE', parser_class=MeritArgumentParser)
    subparsers.required = True

    p_eval = subparsers.add_parser('eval', parents=[common], help='Évalue un mérite en des points')
    _add_problem_source(p_eval)
    _add_merit_options(p_eval, 'Valeurs de ℓ (défaut: 1)')
    p_eval.add_argument('--r', type=float, help='Valeur r ≥ ℓ ajoutée en fin de grille')
    _add_point_source(p_eval)
    _add_solver_options(p_eval)

    p_sweep = subparsers.add_parser('sweep', parents=[common], help='Balaye ℓ pour chaque point')
    _add_problem_source(p_sweep)
    _add_merit_options(p_sweep, 'Grille de ℓ (obligatoire)')
    _add_point_source(p_sweep)
    _add_solver_options(p_sweep)

    p_trace = subparsers.add_parser('trace', parents=[common], help='Mérite le long d\'une suite d\'itérés')
    _add_problem_source(p_trace)
    _add_merit_options(p_trace, 'Valeur de ℓ (défaut: 1)')
    p_trace.add_argument('--points-csv', metavar='PATH', help='CSV des itérés, en-tête x1,...,xn')
    _add_solver_options(p_trace)

    p_verify = subparsers.add_parser('verify', parents=[common], help='Exécute la suite de contrôles')
    _add_problem_source(p_verify)
    p_verify.add_argument('--problems', metavar='ID,...', help='Problèmes du zoo (défaut: tout le zoo)')
    p_verify.add_argument('--checks', metavar='ID,...', help='Contrôles à exécuter (défaut: tous)')
    p_verify.add_argument('--samples', type=int, metavar='N', help='Points échantillonnés par problème')
    p_verify.add_argument('--ell', metavar='L1,L2,...', help='Grille de ℓ (défaut: paramètre verify/ells)')
    p_verify.add_argument('--report-dir', metavar='DIR', help='Dossier des rapports texte et CSV')
    _add_solver_options(p_verify)

    subparsers.add_parser('zoo-list', parents=[common], help='Liste les problèmes intégrés')

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Fonction principale: parse, configure le logging, exécute la sous-commande.

    Returns:
        Code de sortie
    """
    args = parse_arguments(argv)
    if args.settings is None:
        args.settings = os.environ.get(ENV_SETTINGS_FILE) or None

    logger_setup = LoggerSetup()
    logger_setup.setup_console_logging(debug=args.debug)
    logger = logger_setup.get_logger()

    logger.info("=" * 70)
    logger.info(f"{APP_NAME.upper()} - {args.command}")
    logger.info("=" * 70)
    logger.info(f"Version: {APP_VERSION}")
    logger.info(f"Mode debug: {'ACTIVÉ' if args.debug else 'DÉSACTIVÉ'}")
    logger.info(f"Fichier de paramètres: {args.settings or '(défauts)'}")
    logger.info("=" * 70)

    try:
        cfg = build_cli_config(args)
    except CliError as e:
        sys.stderr.write(f"merit: erreur: {e}\n")
        return e.exit_code

    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
