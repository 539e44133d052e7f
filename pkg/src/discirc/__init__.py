"""Discrete distributions on the circular lattice ``{2 pi r / m}``."""

__version__ = "0.1.0"

from .distributions import FamilySpec, family_info  # noqa: E402
from .errors import DomainError, NoSolutionError, NumericError  # noqa: E402

__all__ = [
    "DomainError", "FamilySpec", "NoSolutionError", "NumericError", "__version__",
    "family_info",
]
