"""Bivariate lattice laws on ``Z_m x Z_m`` from the uniform-marginal wrapped Cauchy.

The parent density is

    g(theta1, theta2) = (1 - rho^2) / (4 pi^2 (1 + rho^2 - 2|rho| cos(q theta1 - theta2 - mu)))

with ``q = sgn(rho)``.  Both marginals are uniform and each conditional is
wrapped Cauchy.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from ._numerics import TWO_PI, check_m
from .continuous import wrapcauchy_unwrapped_cdf
from .errors import DomainError, NumericError


@dataclass(frozen=True)
class BivPmf:
    """Joint pmf ``probs[r1, r2]`` on the discrete torus."""

    m: int
    probs: np.ndarray
    rho: float
    mu: float

    def marginal(self, axis):
        """Marginal of ``r1`` (``axis=0``) or ``r2`` (``axis=1``)."""
        return self.probs.sum(axis=1 - axis)

    def conditional(self, r2):
        """Pmf of ``r1`` given ``r2``."""
        col = self.probs[:, int(r2) % self.m]
        return col / col.sum()


def _check_params(m, rho, mu):
    m = check_m(m)
    rho = float(rho)
    if not -1.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (-1, 1), got {rho!r}")
    return m, rho, float(np.mod(mu + np.pi, TWO_PI) - np.pi)


def _cell_index(m, q):
    r = np.arange(m)
    return (q * r[:, None] - r[None, :]) % m


def biv_cdwc_normalizer(m, rho, mu):
    """Closed-form ``D**`` for the kernel ``1 / (1 + rho^2 - 2 rho cos(.))``."""
    m, rho, mu = _check_params(m, rho, mu)
    a = abs(rho)
    am = a**m
    return m * m * (1.0 - am * am) / ((1.0 - a * a) * (1.0 + am * am - 2.0 * am * np.cos(m * mu)))


def biv_cdwc(m, rho, mu=0.0):
    """Conditionalized bivariate wrapped Cauchy on the torus.

    ``probs[r1, r2]`` is proportional to
    ``1 / (1 + rho^2 - 2|rho| cos(2 pi (q r1 - r2)/m - mu))``.
    """
    m, rho, mu = _check_params(m, rho, mu)
    a = abs(rho)
    q = -1 if rho < 0 else 1
    k = np.arange(m)
    kernel = 1.0 / (1.0 + a * a - 2.0 * a * np.cos(TWO_PI * k / m - mu))
    probs = kernel[_cell_index(m, q)] / biv_cdwc_normalizer(m, rho, mu)
    return BivPmf(m, probs, rho, mu)


def _mdwc_band(m, a, mu):
    """``h[d] = P(r1 - r2 = d (mod m), r2 = 0)`` for the ``q = 1`` parent."""
    width = TWO_PI / m
    d = np.arange(m)

    def integrand(u):
        # theta2 given theta1 is wrapped Cauchy centred at theta1 - mu
        centre = width * (d + u) - mu
        upper = wrapcauchy_unwrapped_cdf(width - centre, a)
        lower = wrapcauchy_unwrapped_cdf(-centre, a)
        return (upper - lower) / m

    res, err, info = quad_vec(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12, full_output=True)
    if not info.success or err > 1e-9:
        raise NumericError(f"biv_mdwc: quadrature failed (m={m}, error estimate {err:.3g})")
    return res


def biv_mdwc(m, rho, mu=0.0):
    """Marginalized bivariate wrapped Cauchy on the torus by 1-D quadrature.

    The inner integral over ``theta2`` is a wrapped Cauchy cdf difference, so
    each cell needs one numeric integral over ``theta1``.  Cells depend on
    ``(q r1 - r2) mod m`` only (``q r1 + q - 1`` for the reflected case).
    """
    m, rho, mu = _check_params(m, rho, mu)
    if rho == 0.0:
        return BivPmf(m, np.full((m, m), 1.0 / (m * m)), rho, mu)
    h = _mdwc_band(m, min(abs(rho), 0.999999), mu)
    r = np.arange(m)
    if rho > 0:
        idx = (r[:, None] - r[None, :]) % m
    else:
        # theta1 -> -theta1 maps bin r1 onto bin -r1 - 1
        idx = (-r[:, None] - 1 - r[None, :]) % m
    return BivPmf(m, h[idx], rho, mu)
