"""Random generation on the lattice and through continuous parents."""

import numpy as np

from ._numerics import TWO_PI, check_m
from .errors import DomainError


def as_generator(seed):
    """Return a ``numpy.random.Generator`` for a seed, seed sequence or generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_pmf(probs, n, seed=None):
    """Draw ``n`` iid lattice values from ``probs`` by inverse cdf.

    Examples
    --------
    >>> sample_pmf([0, 0, 1.0], 4, seed=1)
    array([2, 2, 2, 2])
    """
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or np.any(probs < 0) or not np.isfinite(probs).all():
        raise DomainError("probs must be a finite non-negative vector")
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    cdf = np.cumsum(probs)
    u = as_generator(seed).random(n) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), probs.shape[0] - 1)


def sample_counts(probs, n, size=None, seed=None):
    """Multinomial frequency vectors (shape ``size + (m,)``) from ``probs``."""
    probs = np.asarray(probs, dtype=float)
    return as_generator(seed).multinomial(n, probs / probs.sum(), size=size)


def _wrapcauchy_draw(rng, rho, mu, n):
    u = rng.random(n)
    c = (1.0 + rho) / (1.0 - rho)
    return mu + 2.0 * np.arctan(np.tan(np.pi * (u - 0.5)) / c)


def _bin(theta, m):
    return np.floor(np.mod(theta, TWO_PI) * m / TWO_PI).astype(int) % m


def sample_via_parent(parent, params, m, method="marginalize", n=1, seed=None):
    """Lattice draws obtained through a continuous parent.

    Parameters
    ----------
    parent : {'vm', 'wc'}
    params : dict
        ``{'kappa': .., 'mu': ..}`` for von Mises or ``{'rho': .., 'mu': ..}``.
    method : {'marginalize', 'conditionalize', 'discretize-then-wrap'}
        ``marginalize`` draws an angle and bins it; ``conditionalize`` samples
        the plug-in pmf (``mu`` must be a lattice angle); ``discretize-then-wrap``
        (wrapped Cauchy only) bins a Cauchy variate on the line and then
        reduces the bin index mod ``m``.
    """
    from .distributions import pmf_cdvm, pmf_cdwc

    m = check_m(m)
    rng = as_generator(seed)
    parent = parent.lower()
    mu = float(params.get("mu", 0.0))
    if parent not in ("vm", "wc"):
        raise DomainError(f"unknown parent {parent!r}")
    if method == "conditionalize":
        t = mu * m / TWO_PI
        if abs(t - round(t)) > 1e-9:
            raise DomainError("conditionalized sampling needs mu on the lattice")
        t = int(round(t)) % m
        probs = pmf_cdvm(m, params["kappa"], t) if parent == "vm" else pmf_cdwc(m, params["rho"], t)
        return sample_pmf(probs, n, rng)
    if method == "marginalize":
        if parent == "vm":
            theta = rng.vonmises(mu, float(params["kappa"]), size=n)
        else:
            theta = _wrapcauchy_draw(rng, float(params["rho"]), mu, n)
        return _bin(theta, m)
    if method == "discretize-then-wrap":
        if parent != "wc":
            raise DomainError("discretize-then-wrap needs the wrapped Cauchy parent")
        rho = float(params["rho"])
        if rho == 0.0:
            return rng.integers(0, m, size=n)
        scale = -np.log(rho)
        x = mu + scale * np.tan(np.pi * (rng.random(n) - 0.5))
        return np.floor(x * m / TWO_PI).astype(np.int64) % m
    raise DomainError(f"unknown method {method!r}")
