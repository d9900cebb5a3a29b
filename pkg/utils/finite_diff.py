"""
utils/finite_diff.py
====================
Différences finies (centrées, unilatérales, extrapolation de Richardson)
"""

from typing import Callable

import numpy as np

DEFAULT_STEP = 1e-6


def central_gradient(fn: Callable[[np.ndarray], float], x: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """
    Gradient par différences centrées.

    Args:
        fn: Fonction scalaire
        x: Point d'évaluation
        h: Pas relatif (multiplié par max(1, |x_j|))

    Returns:
        Approximation de ∇fn(x)
    """
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for j in range(x.size):
        step = h * max(1.0, abs(x[j]))
        e = np.zeros_like(x)
        e[j] = step
        grad[j] = (fn(x + e) - fn(x - e)) / (2.0 * step)
    return grad


def central_jacobian(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """Jacobienne d'une application vectorielle (lignes = sorties)."""
    x = np.asarray(x, dtype=float)
    columns = []
    for j in range(x.size):
        step = h * max(1.0, abs(x[j]))
        e = np.zeros_like(x)
        e[j] = step
        columns.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2.0 * step))
    return np.column_stack(columns)


def one_sided_directional(fn: Callable[[np.ndarray], float], x: np.ndarray, d: np.ndarray,
                          h: float = 1e-7) -> float:
    """Dérivée directionnelle unilatérale (fn(x + h d) − fn(x)) / h."""
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    return float((fn(x + h * d) - fn(x)) / h)


def richardson_directional(fn: Callable[[np.ndarray], float], x: np.ndarray, d: np.ndarray,
                           h: float = 1e-3, levels: int = 4) -> float:
    """
    Dérivée directionnelle unilatérale extrapolée (t → 0⁺) par Richardson.

    Le quotient q(t) = (fn(x + t d) − fn(x)) / t a un développement en
    puissances entières de t; on élimine les termes successifs en divisant
    le pas par 2 à chaque niveau.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    base = fn(x)
    table = []
    step = h
    for _ in range(levels):
        table.append((fn(x + step * d) - base) / step)
        step /= 2.0
    for order in range(1, levels):
        factor = 2.0 ** order
        table = [(factor * table[k + 1] - table[k]) / (factor - 1.0) for k in range(len(table) - 1)]
    return float(table[0])
