"""Continuous circular densities used as parents of the discrete families."""

import numpy as np
from scipy.special import i0e

from ._numerics import TWO_PI


def vonmises_pdf(theta, kappa, mu=0.0):
    theta = np.asarray(theta, dtype=float)
    return np.exp(kappa * (np.cos(theta - mu) - 1.0)) / (TWO_PI * i0e(kappa))


def wrapcauchy_pdf(theta, rho, mu=0.0):
    theta = np.asarray(theta, dtype=float)
    return (1.0 - rho**2) / (TWO_PI * (1.0 + rho**2 - 2.0 * rho * np.cos(theta - mu)))


def cardioid_pdf(theta, rho, mu=0.0):
    theta = np.asarray(theta, dtype=float)
    return (1.0 + 2.0 * rho * np.cos(theta - mu)) / TWO_PI


def katojones_pdf(theta, rho, mu, gamma, lam):
    """Four-parameter Kato-Jones density (reduces to wrapped Cauchy at ``lam=0, gamma=rho``)."""
    theta = np.asarray(theta, dtype=float)
    num = np.cos(theta - mu) - rho * np.cos(lam)
    den = 1.0 + rho**2 - 2.0 * rho * np.cos(theta - mu - lam)
    return (1.0 + 2.0 * gamma * num / den) / TWO_PI


def wrapped_exponential_pdf(theta, lam):
    """Exponential(rate ``lam``) wrapped onto ``[0, 2*pi)``."""
    theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    return lam * np.exp(-lam * theta) / -np.expm1(-TWO_PI * lam)


def wrapcauchy_unwrapped_cdf(phi, rho):
    """Continuous, increasing wrapped Cauchy cdf of the offset ``phi = theta - mu``.

    The value is the probability mass accumulated from ``-pi`` and grows by
    exactly one per turn, so differences over any interval give the interval
    probability without branch bookkeeping.
    """
    phi = np.asarray(phi, dtype=float)
    turns = np.floor((phi + np.pi) / TWO_PI)
    half = 0.5 * (phi - TWO_PI * turns)  # in [-pi/2, pi/2)
    c = (1.0 + rho) / (1.0 - rho)
    return turns + 0.5 + np.arctan2(c * np.sin(half), np.cos(half)) / np.pi
