"""Marginalized discrete circular families.

Bin ``r`` collects the parent mass on ``[2 pi r / m, 2 pi (r+1) / m)``.
Continuous locations ``mu`` are accepted; a lattice location ``t`` maps to
``mu = 2 pi t / m``.
"""

import numpy as np
from scipy.integrate import quad_vec
from scipy.special import i0e

from .._numerics import RHO_CAP, TWO_PI, check_m
from ..continuous import katojones_pdf, wrapcauchy_unwrapped_cdf
from ..errors import DomainError, NumericError
from .conditionalized import _check_kappa, _check_rho, check_katojones

QUAD_EPSABS = 1e-13


def _bin_quad(integrand, m, what):
    """Integrate ``integrand(u)`` (vector over bins) for ``u`` in ``[0, 1]``."""
    res, err, info = quad_vec(
        integrand, 0.0, 1.0, epsabs=QUAD_EPSABS, epsrel=1e-12, full_output=True
    )
    if not info.success:
        raise NumericError(
            f"{what}: bin quadrature did not converge (m={m}, error estimate {err:.3g}, "
            f"{info.intervals.shape[0]} subintervals)"
        )
    return res


def marginalize(pdf, m):
    """Bin probabilities of an arbitrary vectorized circular density."""
    m = check_m(m)
    left = TWO_PI * np.arange(m) / m
    width = TWO_PI / m
    probs = _bin_quad(lambda u: pdf(left + u * width) * width, m, "marginalize")
    if np.any(probs < -1e-14):
        raise DomainError("density integrates to a negative bin mass")
    return np.clip(probs, 0.0, None)


def pmf_mdvm(m, kappa, mu=0.0):
    """Marginalized discrete von Mises pmf by adaptive per-bin quadrature.

    The integrand is scaled by ``exp(-kappa)`` so large ``kappa`` does not
    overflow; the scale cancels against ``I0e``.
    """
    m = check_m(m)
    kappa = _check_kappa(kappa)
    if kappa == 0.0:
        return np.full(m, 1.0 / m)
    left = TWO_PI * np.arange(m) / m - mu
    width = TWO_PI / m

    def integrand(u):
        return np.exp(kappa * (np.cos(left + u * width) - 1.0))

    return _bin_quad(integrand, m, "MDVM") / (m * i0e(kappa))


def pmf_mdwc(m, rho, mu=0.0):
    """Marginalized discrete wrapped Cauchy pmf.

    Each bin is a difference of the unwrapped wrapped-Cauchy cdf, so every
    entry is positive and the entries telescope to one.

    Examples
    --------
    >>> p = pmf_mdwc(10, 0.5)
    >>> float(np.round(p @ np.cos(2 * np.pi * np.arange(10) / 10), 4))
    0.4676
    """
    m = check_m(m)
    rho = min(_check_rho(rho), RHO_CAP)
    edges = TWO_PI * np.arange(m + 1) / m - mu
    return np.diff(wrapcauchy_unwrapped_cdf(edges, rho))


def md_cardioid_as_cd(m, rho, t=0.0):
    """Conditionalized-cardioid parameters ``(rho', mu')`` equal to MD cardioid."""
    return m * rho * np.sin(np.pi / m) / np.pi, np.pi * (2.0 * t - 1.0) / m


def pmf_md_cardioid(m, rho, t=0):
    """Marginalized discrete cardioid pmf.

    Equal to ``1/m + (2 rho sin(pi/m) / pi) cos(2 pi (r - t + 1/2) / m)``; ``t``
    may be fractional.
    """
    m = check_m(m)
    rho = float(rho)
    if not abs(rho) < 0.5:
        raise DomainError(f"cardioid needs |rho| < 1/2, got {rho!r}")
    r = np.arange(m)
    amp = 2.0 * rho * np.sin(np.pi / m) / np.pi
    return 1.0 / m + amp * np.cos(TWO_PI * (r - t + 0.5) / m)


def pmf_mdkj(m, rho, mu, gamma, lam):
    """Marginalized discrete Kato-Jones pmf.

    Uses the closed form that splits the density into a uniform part, a
    wrapped Cauchy part centred at ``mu + lam`` and a logarithmic skew term.
    For ``rho < 1e-3`` the closed form loses precision through ``1/rho`` and
    per-bin quadrature is used instead.
    """
    m = check_m(m)
    rho, gamma, lam = check_katojones(rho, gamma, lam)
    if rho < 1e-3:
        if rho == 0.0:
            # cardioid parent with concentration gamma
            r = np.arange(m)
            amp = 2.0 * gamma * np.sin(np.pi / m) / np.pi
            return 1.0 / m + amp * np.cos(TWO_PI * (r + 0.5) / m - mu)
        return marginalize(lambda th: katojones_pdf(th, rho, mu, gamma, lam), m)
    rho = min(rho, RHO_CAP)
    shift = mu + lam
    wc = pmf_mdwc(m, rho, shift)
    edges = TWO_PI * np.arange(m + 1) / m
    logd = np.log(1.0 + rho * rho - 2.0 * rho * np.cos(edges - shift))
    g = gamma / rho
    return (
        (1.0 - g * np.cos(lam)) / m
        + g * np.cos(lam) * wc
        + g * np.sin(lam) / TWO_PI * (logd[:-1] - logd[1:])
    )
