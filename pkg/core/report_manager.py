"""
core/report_manager.py
======================
Écriture des sorties: CSV des sous-commandes et rapports de vérification (texte + CSV)
"""

import csv
import io
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .constants import FLOAT_FORMAT
from .logger import LoggerSetup, get_logger

# === SCHÉMAS CSV (voir docs/CSV_SCHEMAS.md) ===

EVAL_COLUMNS = ["index", "x", "kind", "ell", "value", "fw_gap", "dual_weights", "maximizer", "route", "error"]
SWEEP_COLUMNS = ["index", "x", "kind", "ell", "value", "ratio", "ratio_bound", "error"]
TRACE_COLUMNS = ["iterate", "kind", "ell", "value", "error"]
ZOO_COLUMNS = ["id", "n", "m", "provenance"]


def format_float(value) -> str:
    """Flottant au format déterministe des rapports ('' pour None)."""
    if value is None:
        return ""
    return format(float(value), FLOAT_FORMAT)


def format_vector(values) -> str:
    """Vecteur rendu 'a;b;c' (séparateur interne au champ CSV)."""
    if values is None:
        return ""
    return ";".join(format_float(v) for v in np.atleast_1d(np.asarray(values, dtype=float)))


def rows_to_csv(rows: Iterable[Sequence]) -> str:
    """Sérialise des lignes en texte CSV (fins de ligne '\\n')."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


class ReportManager:
    """
    Gestionnaire d'écriture des résultats.
    Formats: CSV (sorties de commandes, rapport) et texte (rapport lisible).
    """

    def __init__(self):
        self.logger = get_logger()

    def write_csv(self, rows: List[Sequence], filepath: Optional[str], stream=None) -> tuple[bool, str]:
        """
        Écrit des lignes CSV dans un fichier, ou sur `stream` si filepath est None.

        Args:
            rows: Lignes (en-tête comprise)
            filepath: Chemin de sortie (None = flux)
            stream: Flux texte utilisé quand filepath est None

        Returns:
            (success: bool, message: str)
        """
        text = rows_to_csv(rows)
        data_rows = max(len(rows) - 1, 0)
        if filepath is None:
            if stream is not None:
                stream.write(text)
            return True, f"{data_rows} ligne(s) écrite(s)"
        try:
            path = Path(filepath)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding='utf-8')
            LoggerSetup().log_export("CSV", data_rows, str(path))
            return True, f"{data_rows} ligne(s) écrite(s) dans {path}"
        except OSError as e:
            self.logger.error(f"[REPORT] Écriture CSV {filepath}", exc_info=True)
            return False, f"Erreur lors de l'écriture CSV: {e}"

    def write_verification_report(self, report, directory: str,
                                  basename: str = "verification") -> tuple[bool, str]:
        """
        Écrit le rapport de vérification en texte et en CSV.

        Args:
            report: VerificationReport
            directory: Dossier de sortie (créé si besoin)
            basename: Nom de base des fichiers (.txt et .csv)

        Returns:
            (success: bool, message: str)
        """
        try:
            folder = Path(directory)
            folder.mkdir(parents=True, exist_ok=True)
            text_path = folder / f"{basename}.txt"
            csv_path = folder / f"{basename}.csv"
            text_path.write_text(report.render_text(), encoding='utf-8')
            rows = report.csv_rows()
            csv_path.write_text(rows_to_csv(rows), encoding='utf-8')
            LoggerSetup().log_export("rapport", len(rows) - 1, str(csv_path))
            return True, f"Rapport écrit: {text_path}, {csv_path}"
        except OSError as e:
            self.logger.error(f"[REPORT] Écriture du rapport dans {directory}", exc_info=True)
            return False, f"Erreur lors de l'écriture du rapport: {e}"

    @staticmethod
    def generate_filename(base_name: str, extension: str, seed: int) -> str:
        """Nom de fichier déterministe: base_graine.extension."""
        return f"{base_name}_seed{seed}.{extension}"
