"""Centered wrapped integer distributions on ``Z_m``."""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .._numerics import check_center, check_m
from ..errors import DomainError

TAIL_TOL = 1e-14


def _check_open_unit(x, name):
    x = float(x)
    if not (0.0 < x < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {x!r}")
    return x


@dataclass(frozen=True)
class Poisson:
    lam: float

    def wrapped(self, m):
        lam = float(self.lam)
        if not np.isfinite(lam) or lam < 0:
            raise DomainError(f"Poisson rate must be >= 0, got {lam!r}")
        if lam == 0.0:
            out = np.zeros(m)
            out[0] = 1.0
            return out
        n_max = int(stats.poisson.isf(TAIL_TOL, lam)) + 2
        k = np.arange(n_max + 1)
        return np.bincount(k % m, weights=stats.poisson.pmf(k, lam), minlength=m)


@dataclass(frozen=True)
class Geometric:
    """Geometric law ``(1-p) p^k`` on ``k = 0, 1, ...``."""

    p: float

    def wrapped(self, m):
        p = _check_open_unit(self.p, "geometric p")
        r = np.arange(m)
        return (1.0 - p) * p**r / -np.expm1(m * np.log(p))


@dataclass(frozen=True)
class SkewLaplace:
    """Discrete skew-Laplace law ``c p^k`` for ``k >= 0`` and ``c q^|k|`` for ``k < 0``."""

    p: float
    q: float

    def wrapped(self, m):
        p = _check_open_unit(self.p, "skew-Laplace p")
        q = _check_open_unit(self.q, "skew-Laplace q")
        c = (1.0 - p) * (1.0 - q) / (1.0 - p * q)
        r = np.arange(m)
        return c * (p**r / (1.0 - p**m) + q ** (m - r) / (1.0 - q**m))


def pmf_centered_wrapped(base, m, t=0):
    """Wrap an integer law onto ``Z_m`` and shift it so ``0`` moves to ``t``.

    Parameters
    ----------
    base : Poisson, Geometric or SkewLaplace
    m : int
    t : int
    """
    m = check_m(m)
    t = check_center(t, m)
    p0 = base.wrapped(m)
    return p0[(np.arange(m) - t) % m]
