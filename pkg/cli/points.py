"""
cli/points.py
=============
Sources de points: liste en ligne, fichier CSV (en-tête x1,...,xn), tirage
"""

import csv
from typing import List

import numpy as np

from core.logger import get_logger
from utils.sampling import sample_feasible

from .config import DataError, FileAccessError

logger = get_logger()


def parse_inline(text: str, n: int) -> List[np.ndarray]:
    """
    Points en ligne.

    n = 1: '0,0.5,2' donne trois points; n > 1: points séparés par ';',
    coordonnées par ',' ('1,0;0,1').
    """
    try:
        if n == 1:
            values = [v for v in text.replace(';', ',').split(',') if v.strip()]
            points = [np.array([float(v)]) for v in values]
        else:
            points = [np.array([float(v) for v in chunk.split(',')]) for chunk in text.split(';') if chunk.strip()]
    except ValueError:
        raise DataError(f"--points: nombres attendus, reçu '{text}'") from None
    for k, point in enumerate(points):
        if point.size != n:
            raise DataError(f"--points: le point {k} a {point.size} coordonnée(s), attendu {n}")
    if not points:
        raise DataError("--points: aucun point")
    return points


def read_points_csv(path: str, n: int) -> List[np.ndarray]:
    """
    Lit un CSV d'en-tête x1,...,xn (une ligne par point, dans l'ordre).

    Raises:
        FileAccessError: fichier illisible
        DataError: en-tête ou dimensions incohérentes, valeur non numérique
    """
    try:
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
    except OSError as e:
        logger.error(f"[CLI] Lecture de {path}", exc_info=True)
        raise FileAccessError(f"Impossible de lire {path}: {e}") from e

    if not rows:
        raise DataError(f"{path}: fichier vide")
    header = [h.strip() for h in rows[0]]
    expected = [f"x{j + 1}" for j in range(n)]
    if header != expected:
        raise DataError(f"{path}: en-tête {','.join(header)} incompatible avec n = {n} (attendu {','.join(expected)})")

    points = []
    for line, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != n:
            raise DataError(f"{path}:{line}: {len(row)} valeur(s), attendu {n}")
        try:
            points.append(np.array([float(cell) for cell in row]))
        except ValueError:
            raise DataError(f"{path}:{line}: valeur non numérique") from None
    logger.debug(f"[CLI] {len(points)} point(s) lu(s) depuis {path}")
    return points


def load_points(cfg, problem, seed: int = 0) -> List[np.ndarray]:
    """Points de la configuration (une seule source, garantie par CliConfig)."""
    if cfg.points is not None:
        return parse_inline(cfg.points, problem.n)
    if cfg.points_csv is not None:
        return read_points_csv(cfg.points_csv, problem.n)
    return sample_feasible(problem, np.random.default_rng(seed), cfg.sample)
