"""
core/simplex.py
===============
Points du simplexe standard Δᵐ (variable duale λ ou γ)
"""

from dataclasses import dataclass, field
from typing import Iterable, List

import numpy as np

from .constants import SIMPLEX_SUM_TOL


@dataclass(frozen=True, eq=False)
class SimplexWeights:
    """
    Poids λ ∈ Δᵐ: composantes ≥ 0, somme égale à 1 à 1e-12 près.

    Le tableau interne est en lecture seule; utiliser `as_array()` pour
    obtenir une copie modifiable.
    """

    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.w, dtype=float).ravel()
        if arr.size < 1:
            raise ValueError("Un point du simplexe doit avoir au moins une composante")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"Poids non finis: {arr}")
        if np.any(arr < 0.0):
            raise ValueError(f"Poids négatifs: {arr}")
        total = float(arr.sum())
        if abs(total - 1.0) > SIMPLEX_SUM_TOL:
            raise ValueError(f"La somme des poids vaut {total!r} (attendu 1)")
        arr.flags.writeable = False
        object.__setattr__(self, 'w', arr)

    # === CONSTRUCTEURS ===

    @classmethod
    def barycenter(cls, m: int) -> 'SimplexWeights':
        """Point (1/m, …, 1/m)."""
        return cls(np.full(m, 1.0 / m))

    @classmethod
    def vertex(cls, m: int, index: int) -> 'SimplexWeights':
        """Sommet e_index du simplexe."""
        arr = np.zeros(m)
        arr[index] = 1.0
        return cls(arr)

    @classmethod
    def normalized(cls, values: Iterable[float]) -> 'SimplexWeights':
        """
        Construit un point du simplexe à partir d'un vecteur presque admissible
        (troncature des négatifs résiduels puis renormalisation).
        """
        arr = np.maximum(np.asarray(list(values), dtype=float), 0.0)
        total = arr.sum()
        if total <= 0.0:
            raise ValueError("Impossible de normaliser un vecteur nul")
        return cls(arr / total)

    # === ACCESSEURS ===

    @property
    def m(self) -> int:
        return int(self.w.size)

    def as_array(self) -> np.ndarray:
        return np.array(self.w)

    def support(self) -> List[int]:
        """Indices des composantes strictement positives."""
        return [int(i) for i in np.flatnonzero(self.w > 0.0)]

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(float(v) for v in self.w)

    def __getitem__(self, index: int) -> float:
        return float(self.w[index])

    def __repr__(self) -> str:
        values = ", ".join(f"{v:.6g}" for v in self.w)
        return f"SimplexWeights({values})"
