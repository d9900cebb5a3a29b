"""
utils/__init__.py
=================
Package utils - Différences finies et échantillonnage
"""

from .finite_diff import central_gradient, central_jacobian, one_sided_directional, richardson_directional
from .sampling import ring_points, sample_feasible, sample_in_box, sample_pairs, sample_polyline

__all__ = [
    'central_gradient',
    'central_jacobian',
    'one_sided_directional',
    'richardson_directional',
    'ring_points',
    'sample_feasible',
    'sample_in_box',
    'sample_pairs',
    'sample_polyline',
]
