"""Small numerical helpers shared by the family, moment and inference code."""

import numpy as np
from scipy.special import ive

from .errors import DomainError, NumericError

TWO_PI = 2.0 * np.pi

# Largest concentration used when evaluating Cauchy-type kernels at the mode.
RHO_CAP = 0.999999

SERIES_TOL = 1e-15
SERIES_MAX_TERMS = 1_000_000


def check_m(m):
    """Validate a lattice size and return it as ``int``."""
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise DomainError(f"lattice size m must be an integer >= 2, got {m!r}")
    return int(m)


def lattice_angles(m):
    """Angles ``2*pi*r/m`` for ``r = 0..m-1``."""
    m = check_m(m)
    return TWO_PI * np.arange(m) / m


def check_center(t, m):
    """Validate a lattice centering parameter and reduce it modulo ``m``."""
    if isinstance(t, bool) or int(t) != t:
        raise DomainError(f"centering parameter t must be an integer in Z_m, got {t!r}")
    return int(t) % m


def bessel_ratio(order, kappa):
    """``I_order(kappa) / I_0(kappa)`` evaluated with exponentially scaled Bessels."""
    order = np.abs(np.asarray(order, dtype=float))
    if kappa == 0.0:
        return np.where(order == 0, 1.0, 0.0)
    return ive(order, kappa) / ive(0, kappa)


def sum_decreasing_series(term, start=1, tol=SERIES_TOL, max_terms=SERIES_MAX_TERMS, block=256):
    """Sum ``term(k)`` for ``k = start, start+1, ...`` until a term drops below ``tol``.

    ``term`` must accept an integer array and return the matching terms.  The
    terms are assumed to be eventually decreasing in magnitude; the sum stops
    at the first term whose magnitude is below ``tol`` once the magnitudes are
    decreasing.
    """
    total = 0.0
    k0 = start
    prev = np.inf
    while k0 - start < max_terms:
        ks = np.arange(k0, k0 + block)
        vals = np.asarray(term(ks))
        mags = np.abs(vals)
        prevs = np.concatenate(([prev], mags[:-1]))
        stop = np.flatnonzero((mags < tol) & (mags <= prevs))
        if stop.size:
            return total + vals[: stop[0]].sum()
        prev = mags[-1]
        total = total + vals.sum()
        k0 += block
        block = min(block * 2, 65536)
    raise NumericError(f"series did not reach tolerance {tol} within {max_terms} terms")
