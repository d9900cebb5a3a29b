"""
core/constants.py
=================
Constantes globales de l'outil (identité, tolérances numériques, codes de sortie)
"""

# Informations de l'application
APP_NAME = "Merit Toolkit"
APP_VERSION = "1.0.0"
APP_ORGANIZATION = "MeritToolkit"
LOGGER_NAME = "MeritToolkit"

# Variables d'environnement
ENV_LOG_LEVEL = "MERIT_LOG"
ENV_SETTINGS_FILE = "MERIT_SETTINGS"

# Tolérances géométriques
FEASIBILITY_TOL = 1e-9          # Appartenance à S (absolue, par coordonnée)
SIMPLEX_SUM_TOL = 1e-12         # |Σλ_i − 1| toléré pour un point du simplexe

# Sentinelle pour g_i(x) = +∞ (jamais additionnée)
INFINITE_VALUE = 1e300

# Solveur dual (Frank–Wolfe)
DEFAULT_GAP_TOL = 1e-7
DEFAULT_DUAL_MAX_ITER = 500
LINE_SEARCH_MAX_ITER = 60
EVAL_ERROR_FACTOR = 10.0        # ε_eval = 10 × (gap_tol + inner tol)

# Solveur interne (gradient proximal)
DEFAULT_INNER_TOL = 1e-8
DEFAULT_INNER_MAX_ITER = 10000
DEFAULT_BACKTRACK_BETA = 0.5
DEFAULT_BACKTRACK_C = 0.5
MIN_INNER_TOL = 1e-12
MAX_STEP_SIZE = 1e8
UNBOUNDED_FACTOR = 1e6          # Seuil de divergence: 1e6 × (1 + diamètre de la boîte)

# Oracle de grille (n ≤ 3)
MAX_GRID_DIMENSION = 3
DEFAULT_GRID_POINTS = {1: 4001, 2: 301, 3: 61}

# Vérification des propriétés
DEFAULT_VERIFY_SAMPLES = 6
CHECK_TOLERANCE_FACTOR = 10.0   # ε d'un contrôle = 10 × ε_eval
REMARK_TOLERANCE_FACTOR = 2.0
ORACLE_SAMPLES = 200
GRADIENT_REL_TOL = 1e-5
HESSIAN_TOL = 1e-4
SYMMETRY_TOL = 1e-10
NON_SOLUTION_MARGIN = 0.5       # Distance minimale à X* pour un point "non-solution"

# Codes de sortie CLI
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_EVALUATION_FAILED = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_FILE = 66

# Format des flottants dans les CSV et rapports (déterministe)
FLOAT_FORMAT = ".12g"
