DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_MODES = 16
DEFAULT_MAX_MAP_MODES = 6

__version__ = "0.1.0"
__author__ = "fermikit contributors"
__author_email__ = "fermikit@users.noreply.github.com"
__copyright__ = "Copyright (c) 2026 fermikit contributors."
__homepage__ = "https://github.com/fermikit/fermikit"
__docs__ = "Jordan-Wigner phase bookkeeping for fermionic mode subsets."

__all__ = [
    "DEFAULT_MAX_MAP_MODES",
    "DEFAULT_MAX_MODES",
    "DEFAULT_TOLERANCE",
    "__author__",
    "__author_email__",
    "__copyright__",
    "__docs__",
    "__homepage__",
    "__version__",
]
