"""Mixtures of lattice pmfs, possibly on lattices of different sizes."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .._numerics import TWO_PI
from ..errors import DomainError


@dataclass(frozen=True)
class IrregularPmf:
    """Probabilities on sorted distinct angles in ``[0, 2 pi)``.

    ``fractions`` holds each angle as an exact fraction of a full turn.
    """

    fractions: tuple
    probs: np.ndarray

    @property
    def angles(self):
        return np.array([TWO_PI * float(f) for f in self.fractions])

    def __len__(self):
        return len(self.fractions)


def _component_probs(comp):
    if hasattr(comp, "pmf"):
        return np.asarray(comp.pmf(), dtype=float)
    return np.asarray(comp, dtype=float)


def mixture_pmf(components):
    """Mix ``(component, weight)`` pairs on the union of their lattices.

    Parameters
    ----------
    components : list of (FamilySpec or array, float)
        Each component is a :class:`FamilySpec` or a probability vector on
        ``Z_m`` for its own ``m``.

    Returns
    -------
    IrregularPmf
        Points from different lattices that coincide (for instance angle 0)
        are merged exactly using rational arithmetic.
    """
    if not components:
        raise DomainError("mixture needs at least one component")
    weights = np.array([float(w) for _, w in components])
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise DomainError("mixture weights must be non-negative and sum to 1")
    mass = {}
    for (comp, _), w in zip(components, weights):
        p = _component_probs(comp)
        m = p.shape[0]
        for r in range(m):
            key = Fraction(r, m)
            mass[key] = mass.get(key, 0.0) + w * p[r]
    keys = sorted(mass)
    return IrregularPmf(tuple(keys), np.array([mass[k] for k in keys]))
