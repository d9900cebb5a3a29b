"""
cli/config.py
=============
Configuration d'une invocation CLI et erreurs de frontière (codes de sortie)
"""

from dataclasses import dataclass
from typing import Optional, Tuple

from core.constants import EXIT_DATA, EXIT_FILE, EXIT_USAGE
from core.merit import MeritKind
from core.verifier import CheckId

SUBCOMMANDS = ('eval', 'verify', 'sweep', 'trace', 'zoo-list')


class CliError(Exception):
    """Erreur de frontière portant son code de sortie."""
    exit_code = EXIT_USAGE


class UsageError(CliError):
    """Options incohérentes ou invalides (64)."""
    exit_code = EXIT_USAGE


class DataError(CliError):
    """Données d'entrée invalides: CSV, dimensions, document (65)."""
    exit_code = EXIT_DATA


class FileAccessError(CliError):
    """Fichier illisible ou non inscriptible (66)."""
    exit_code = EXIT_FILE


def parse_float_list(text: Optional[str], option: str) -> Tuple[float, ...]:
    """'0.5,1,2' -> (0.5, 1.0, 2.0); UsageError si un élément n'est pas un nombre."""
    if text is None:
        return ()
    try:
        return tuple(float(v) for v in text.replace(';', ',').split(',') if v.strip())
    except ValueError:
        raise UsageError(f"{option}: liste de nombres attendue, reçu '{text}'") from None


@dataclass(frozen=True)
class CliConfig:
    """Invocation validée d'une sous-commande."""
    subcommand: str
    builtin: Optional[str] = None
    spec_path: Optional[str] = None
    kind: MeritKind = MeritKind.U_ELL
    ells: Tuple[float, ...] = ()
    r: Optional[float] = None
    points: Optional[str] = None
    points_csv: Optional[str] = None
    sample: Optional[int] = None
    output: Optional[str] = None
    seed: Optional[int] = None
    jobs: Optional[int] = None
    gap_tol: Optional[float] = None
    inner_tol: Optional[float] = None
    checks: Tuple[CheckId, ...] = ()
    problems: Tuple[str, ...] = ()
    samples: Optional[int] = None
    report_dir: Optional[str] = None
    settings: Optional[str] = None
    validate: bool = False
    no_validate: bool = False

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"Sous-commande inconnue: {self.subcommand}")
        if self.validate and self.no_validate:
            raise UsageError("--validate et --no-validate sont exclusifs")
        if self.builtin and self.spec_path:
            raise UsageError("--builtin et --spec sont exclusifs")
        if self.subcommand in ('eval', 'sweep', 'trace'):
            if not (self.builtin or self.spec_path):
                raise UsageError(f"{self.subcommand}: une source de problème est requise (--builtin ou --spec)")
            sources = [s for s in (self.points, self.points_csv, self.sample) if s is not None]
            if len(sources) != 1:
                raise UsageError(f"{self.subcommand}: exactement une source de points (--points, --points-csv, --sample)")
            if self.subcommand == 'trace' and self.points_csv is None:
                raise UsageError("trace: la suite d'itérés se lit depuis --points-csv")
        if self.subcommand == 'verify' and (self.builtin or self.spec_path) and self.problems:
            raise UsageError("verify: --problems est exclusif avec --builtin/--spec")
        if self.subcommand == 'sweep' and self.kind is MeritKind.U0:
            raise UsageError("sweep: u0 ne dépend pas de ℓ")
        if self.subcommand == 'sweep' and not self.ells:
            raise UsageError("sweep: la grille de ℓ (--ell) ne peut pas être vide")
        if self.subcommand in ('eval', 'trace') and not self.ells:
            object.__setattr__(self, 'ells', (1.0,))
        if any(not ell > 0 for ell in self.ells):
            raise UsageError("ℓ doit être > 0")
        if self.r is not None and (not self.ells or self.r < max(self.ells)):
            raise UsageError("--r doit être ≥ ℓ")
        if self.sample is not None and self.sample < 1:
            raise UsageError("--sample doit être ≥ 1")
        if self.jobs is not None and self.jobs < 1:
            raise UsageError("--jobs doit être ≥ 1")
        for name in ('gap_tol', 'inner_tol'):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise UsageError(f"--{name.replace('_', '-')} doit être > 0")

    @property
    def validation(self) -> bool:
        """Validation des oracles: demandée par --validate, implicite pour un document --spec hors verify."""
        if self.validate:
            return True
        return bool(self.spec_path) and not self.no_validate and self.subcommand != 'verify'

    @property
    def merit_ells(self) -> Tuple[float, ...]:
        """Valeurs de ℓ évaluées (r ajouté en fin de grille; 0 pour u₀)."""
        if self.kind is MeritKind.U0:
            return (0.0,)
        return self.ells + ((self.r,) if self.r is not None else ())


def build_cli_config(args) -> CliConfig:
    """
    Construit la configuration depuis l'espace de noms argparse.

    Raises:
        UsageError: option invalide
    """
    def opt(name, default=None):
        return getattr(args, name, default)

    try:
        kind = MeritKind.parse(opt('kind') or 'u_ell')
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        checks = tuple(CheckId.parse(c) for c in (opt('checks') or '').split(',') if c.strip())
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    problems = tuple(p.strip() for p in (opt('problems') or '').split(',') if p.strip())
    ells = parse_float_list(opt('ell'), '--ell')

    return CliConfig(
        subcommand=args.command,
        builtin=opt('builtin'),
        spec_path=opt('spec'),
        kind=kind,
        ells=ells,
        r=opt('r'),
        points=opt('points'),
        points_csv=opt('points_csv'),
        sample=opt('sample'),
        output=opt('output'),
        seed=opt('seed'),
        jobs=opt('jobs'),
        gap_tol=opt('gap_tol'),
        inner_tol=opt('inner_tol'),
        checks=checks,
        problems=problems,
        samples=opt('samples'),
        report_dir=opt('report_dir'),
        settings=opt('settings'),
        validate=bool(opt('validate', False)),
        no_validate=bool(opt('no_validate', False)),
    )
