"""Characteristic functions and trigonometric moments of lattice families.

For a pmf on ``Z_m`` the characteristic function ``psi_p = E exp(i p 2 pi r/m)``
is ``m``-periodic in ``p``, so orders are reduced mod ``m`` first.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import ive

from ._numerics import SERIES_TOL, TWO_PI, check_m, lattice_angles
from .distributions.conditionalized import _stable_harmonics
from .distributions.family import FamilySpec
from .errors import DomainError


@dataclass(frozen=True)
class TrigMoments:
    """Order ``p`` trigonometric moments: ``psi = beta + i alpha``."""

    order: int
    alpha: float
    beta: float

    @property
    def psi(self):
        return complex(self.beta, self.alpha)


def chf_bruteforce(probs, p):
    """``sum_r probs[r] exp(i p 2 pi r / m)`` by direct summation."""
    probs = np.asarray(probs, dtype=float)
    m = probs.shape[0]
    j = (int(p) * np.arange(m)) % m
    return complex(np.sum(probs * np.exp(1j * TWO_PI * j / m)))


def trig_moments(probs, p):
    psi = chf_bruteforce(probs, p)
    return TrigMoments(int(p), psi.imag, psi.real)


# ---------------------------------------------------------------- helpers

def _bessel_fold(kappa, m, p, divide=False, mu=0.0):
    """``sum_{q = p mod m} I_|q|(kappa)/I_0(kappa)``.

    With ``divide`` each term becomes ``I_|q| exp(i q mu) / (q I_0)`` and
    ``q = 0`` is skipped.  Terms are added outward from ``q = p`` until both
    tails fall below ``SERIES_TOL``.
    """
    i0 = ive(0, kappa)
    total = 0.0
    k = 0
    while True:
        added = 0.0
        for q in ({p + k * m, p - k * m} if k else {p}):
            if divide and q == 0:
                continue
            term = ive(abs(q), kappa) / i0
            total += term * np.exp(1j * q * mu) / q if divide else term
            added = max(added, term)
        # Bessel orders grow with |k|, so terms shrink once past the peak
        if k > 0 and added < SERIES_TOL and abs(k * m) > abs(p):
            return total
        k += 1
        if k > 100_000:
            raise DomainError("Bessel fold did not converge")


def lattice_bessel(p, kappa, m, scaled=True):
    """``L_p(kappa) = sum_r cos(2 pi p r/m) exp(kappa cos(2 pi r/m))``.

    With ``scaled`` the value is multiplied by ``exp(-kappa)``.
    """
    th = lattice_angles(m)
    w = np.exp(kappa * (np.cos(th) - (1.0 if scaled else 0.0)))
    return float(np.sum(np.cos(p * th) * w))


def _check_order(p, m):
    if int(p) != p:
        raise DomainError(f"order p must be an integer, got {p!r}")
    return int(p) % m


# ---------------------------------------------------------------- conditionalized

def chf_cd_analytic(spec: FamilySpec, p):
    """Analytic characteristic function of a conditionalized family.

    Supported tags: ``cdwc``, ``cdvm``, ``cdcardioid``, ``cdwn``, ``cdstable``.
    Includes the centring phase ``exp(i p 2 pi t / m)``.
    """
    m = check_m(spec.m)
    p = _check_order(p, m)
    tag = spec.tag
    tau = float(spec.concentration)
    if spec.mu is not None:
        raise NotImplementedError("analytic chf needs a lattice centre t")
    if p == 0:
        return 1.0 + 0.0j
    if tag == "cdwc":
        val = (tau**p + tau ** (m - p)) / (1.0 + tau**m)
    elif tag == "cdvm":
        if tau == 0.0:
            val = 0.0
        else:
            val = _bessel_fold(tau, m, p) / _bessel_fold(tau, m, 0)
    elif tag == "cdcardioid":
        val = tau * ((p == 1) + (p == m - 1))
    elif tag in ("cdwn", "cdstable"):
        a = 2.0 if tag == "cdwn" else float(spec.shape.get("a", 1.0))
        b = 0.0 if tag == "cdwn" else float(spec.shape.get("b", 0.0))
        A, B = _stable_harmonics(m, tau, a, b)
        val = (A[p] - 1j * B[p] + A[-p] + 1j * B[-p]) / (1.0 + 2.0 * A[0])
    else:
        raise NotImplementedError(f"no analytic characteristic function for {tag}")
    return complex(val) * np.exp(1j * TWO_PI * p * spec.t / m)


# ---------------------------------------------------------------- marginalized

def _md_prefactor(m, p):
    return np.exp(-1j * np.pi * p / m) * m * np.sin(np.pi * p / m) / np.pi


def mdwc_chf_integral(m, rho, p):
    """Characteristic function of MDWC at ``mu = 0`` from its integral form."""
    m = check_m(m)
    p = _check_order(p, m)
    if p == 0:
        return 1.0 + 0.0j
    val, _ = quad(
        lambda x: x ** (p - 1) * (1.0 - x ** (m - 2 * p)) / (1.0 - x**m),
        0.0, rho, epsabs=1e-13, epsrel=1e-12, limit=200,
    )
    return complex(_md_prefactor(m, p) * val)


def _wc_S(m, rho, p, mu=0.0):
    """``S_{p,m} = sum_{q = p mod m} rho^|q| exp(i q mu) / q`` for ``0 < p < m``."""
    if rho == 0.0:
        return 0.0
    lr = np.log(rho)
    k_max = int(np.ceil(np.log(SERIES_TOL) / lr / m)) + 2
    q_pos = p + m * np.arange(k_max + 1)
    q_neg = p - m * np.arange(1, k_max + 1)
    q = np.concatenate([q_pos, q_neg])
    return np.sum(np.exp(np.abs(q) * lr + 1j * q * mu) / q)


def chf_md_analytic(spec: FamilySpec, p):
    """Analytic characteristic function of a marginalized family.

    Uses ``psi_p = exp(-i pi p/m) (m sin(pi p/m)/pi) S_{p,m}`` where
    ``S_{p,m}`` folds the parent's ``phi_q exp(i q mu) / q`` over
    ``q = p (mod m)``; for lattice ``mu`` this is the centred value times
    ``exp(i p mu)``.
    Supported tags: ``mdwc``, ``mdvm``, ``mdcardioid``.
    """
    m = check_m(spec.m)
    p = _check_order(p, m)
    tag = spec.tag
    tau = float(spec.concentration)
    if p == 0:
        return 1.0 + 0.0j
    mu = spec.location
    if tag == "mdwc":
        S = _wc_S(m, tau, p, mu)
    elif tag == "mdvm":
        S = 0.0 if tau == 0.0 else _bessel_fold(tau, m, p, divide=True, mu=mu)
    elif tag == "mdcardioid":
        S = tau * ((p == 1) * np.exp(1j * mu) - (p == m - 1) * np.exp(-1j * mu))
    else:
        raise NotImplementedError(f"no analytic characteristic function for {tag}")
    return complex(_md_prefactor(m, p) * S)


# ---------------------------------------------------------------- B(kappa) and rho_w

def B(kappa, m):
    """``E cos(2 pi r/m)`` under CDVM: ``L_1(kappa)/L_0(kappa)``."""
    m = check_m(m)
    kappa = float(kappa)
    if kappa < 0:
        raise DomainError("kappa must be >= 0")
    c = np.cos(lattice_angles(m))
    w = np.exp(kappa * (c - 1.0))
    return float(np.sum(c * w) / np.sum(w))


def B_inverse(target, m, kappa_max=1e5):
    """Solve ``B(kappa) = target`` for ``kappa >= 0``.

    Raises
    ------
    DomainError
        If ``target`` is negative or not below ``B(kappa_max)``.
    """
    m = check_m(m)
    target = float(target)
    if target < 0.0 or target >= 1.0:
        raise DomainError(f"B target must lie in [0, 1), got {target!r}")
    if target == 0.0:
        return 0.0
    hi = 1.0
    while B(hi, m) < target:
        hi *= 2.0
        if hi > kappa_max:
            raise DomainError(f"B target {target!r} is beyond B({kappa_max:g})")
    return brentq(lambda k: B(k, m) - target, 0.0, hi, xtol=1e-14, rtol=1e-14, maxiter=500)


def rho_w(rho, m):
    """Mean resultant length of CDWC: ``rho (1 + rho^(m-2)) / (1 + rho^m)``."""
    m = check_m(m)
    rho = np.asarray(rho, dtype=float)
    return rho * (1.0 + rho ** (m - 2)) / (1.0 + rho**m)


def rho_w_inverse(target, m):
    """Invert :func:`rho_w` on ``[0, 1)``; the target is clipped to ``[0, 1 - 1e-12)``."""
    m = check_m(m)
    target = min(max(float(target), 0.0), 1.0 - 1e-12)
    if target == 0.0:
        return 0.0
    # rho_w(rho) >= rho for m >= 2, so the root lies in [lo, target]
    lo = 0.0 if m == 2 else target / 2.0
    return brentq(lambda r: float(rho_w(r, m)) - target, lo, target, xtol=1e-15, rtol=1e-15)
