"""Conditionalized (plug-in) discrete circular families.

Each pmf is a continuous circular density evaluated at the lattice angles
``2*pi*r/m`` and renormalized.  Location families take an integer centering
``t`` and are built from the folded offset ``min(k, m-k)`` with
``k = (r - t) mod m`` so that ``p(t+k) == p(t-k)`` holds bit for bit.
"""

import numpy as np
from scipy.special import logsumexp

from .._numerics import (
    RHO_CAP,
    SERIES_MAX_TERMS,
    SERIES_TOL,
    TWO_PI,
    check_center,
    check_m,
    lattice_angles,
)
from ..errors import DomainError, NumericError


def _folded_angles(m, t):
    """Angular distance of each lattice point from ``t``, symmetric in ``k -> -k``."""
    k = (np.arange(m) - t) % m
    return TWO_PI * np.minimum(k, m - k) / m


def _check_rho(rho, upper=1.0, name="rho"):
    rho = float(rho)
    if not np.isfinite(rho) or rho < 0.0 or rho >= upper:
        raise DomainError(f"{name} must lie in [0, {upper}), got {rho!r}")
    return rho


def _check_kappa(kappa):
    kappa = float(kappa)
    if not np.isfinite(kappa) or kappa < 0.0:
        raise DomainError(f"kappa must be a finite value >= 0, got {kappa!r}")
    return kappa


def conditionalize(pdf, m):
    """Plug-in discretization of an arbitrary circular density.

    Parameters
    ----------
    pdf : callable
        Vectorized density on the circle.
    m : int
        Lattice size.
    """
    vals = np.asarray(pdf(lattice_angles(m)), dtype=float)
    if np.any(vals < 0) or not np.all(np.isfinite(vals)):
        raise DomainError("density must be finite and non-negative on the lattice")
    total = vals.sum()
    if total <= 0:
        raise DomainError("density vanishes on every lattice point")
    return vals / total


def cdvm_log_normalizer(m, kappa):
    """``log L_0(kappa)`` where ``L_0 = sum_r exp(kappa cos(2 pi r / m))``."""
    return logsumexp(kappa * np.cos(lattice_angles(m)))


def pmf_cdvm(m, kappa, t=0):
    """Conditionalized discrete von Mises pmf.

    Examples
    --------
    >>> pmf_cdvm(4, 1.0).round(5)
    array([0.53445, 0.19661, 0.07233, 0.19661])
    """
    m = check_m(m)
    kappa = _check_kappa(kappa)
    t = check_center(t, m)
    w = np.exp(kappa * (np.cos(_folded_angles(m, t)) - 1.0))
    return w / w.sum()


def cdwc_normalizer(m, rho):
    """Constant ``C`` with ``p(r) = C / (1 + rho^2 - 2 rho cos(2 pi (r-t)/m))``."""
    rho_m = rho**m
    return (1.0 - rho) * (1.0 + rho) * (1.0 - rho_m) / (m * (1.0 + rho_m))


def pmf_cdwc(m, rho, t=0):
    """Conditionalized discrete wrapped Cauchy pmf with closed-form normalizer.

    ``rho`` is capped at ``0.999999`` internally so the kernel stays finite.
    """
    m = check_m(m)
    rho = min(_check_rho(rho), RHO_CAP)
    t = check_center(t, m)
    kern = 1.0 / (1.0 + rho * rho - 2.0 * rho * np.cos(_folded_angles(m, t)))
    return cdwc_normalizer(m, rho) * kern


def pmf_cdwc_mu(m, rho, mu=0.0):
    """Conditionalized wrapped Cauchy with a continuous location ``mu``."""
    m = check_m(m)
    rho = min(_check_rho(rho), RHO_CAP)
    rho_m = rho**m
    const = (
        (1.0 - 2.0 * rho_m * np.cos(m * mu) + rho_m * rho_m)
        * (1.0 - rho) * (1.0 + rho)
        / (m * (1.0 - rho_m * rho_m))
    )
    kern = 1.0 / (1.0 + rho * rho - 2.0 * rho * np.cos(lattice_angles(m) - mu))
    return const * kern


def pmf_cd_cardioid(m, rho, t=0, mu=None):
    """Conditionalized discrete cardioid ``(1 + 2 rho cos(theta - mu)) / m``.

    Pass ``mu`` to use a continuous location instead of the lattice ``t``.
    For ``m == 2`` the cosine sum does not vanish in general, so the vector is
    renormalized explicitly.
    """
    m = check_m(m)
    rho = float(rho)
    if not abs(rho) < 0.5:
        raise DomainError(f"cardioid needs |rho| < 1/2, got {rho!r}")
    if mu is None:
        cosv = np.cos(_folded_angles(m, check_center(t, m)))
    else:
        cosv = np.cos(lattice_angles(m) - mu)
    w = 1.0 + 2.0 * rho * cosv
    return w / w.sum()


def _check_stable(a, b):
    a = float(a)
    if not (0.0 < a <= 2.0):
        raise DomainError(f"stable exponent a must lie in (0, 2], got {a!r}")
    return a, float(b)


def _stable_harmonics(m, rho, a, b):
    """Fold the stable series ``rho^(q^a) exp(i b q^a)`` onto harmonics mod ``m``.

    Returns ``(A, B)`` of length ``m`` with ``A[s] = sum rho^(q^a) cos(b q^a)``
    over ``q >= 1, q = s (mod m)`` and ``B`` the matching sine sums.
    """
    if rho == 0.0:
        return np.zeros(m), np.zeros(m)
    # smallest q with rho^(q^a) < tol
    q_max = int(np.ceil((np.log(SERIES_TOL) / np.log(rho)) ** (1.0 / a)))
    if q_max > SERIES_MAX_TERMS:
        raise NumericError(
            f"stable series needs {q_max} terms (cap {SERIES_MAX_TERMS}); rho too close to 1"
        )
    q = np.arange(1, q_max + 1)
    qa = q.astype(float) ** a
    w = np.exp(qa * np.log(rho))
    idx = q % m
    A = np.bincount(idx, weights=w * np.cos(b * qa), minlength=m)
    B = np.bincount(idx, weights=w * np.sin(b * qa), minlength=m)
    return A, B


def _trig_tables(m):
    """Exactly symmetric ``cos`` and antisymmetric ``sin`` of ``2 pi j / m``."""
    j = np.arange(m)
    fold = np.minimum(j, m - j)
    c = np.cos(TWO_PI * fold / m)
    s = np.where(j <= m - j, 1.0, -1.0) * np.sin(TWO_PI * fold / m)
    return c, s


def pmf_cd_stable(m, rho, t=0, a=1.0, b=0.0):
    """Conditionalized discrete wrapped stable pmf via its Fourier series.

    The density ``(1 + 2 sum_q rho^(q^a) cos(q theta + b q^a)) / 2 pi`` is
    summed until the weights drop below ``1e-15``; terms are grouped by
    ``q mod m`` so the work is linear in the number of terms.

    Raises
    ------
    DomainError
        If the series takes clearly negative values on the lattice, which can
        happen for skewed parameter choices that do not define a density.
    """
    m = check_m(m)
    rho = _check_rho(rho)
    a, b = _check_stable(a, b)
    t = check_center(t, m)
    A, B = _stable_harmonics(m, rho, a, b)
    ctab, stab = _trig_tables(m)
    k = (np.arange(m) - t) % m
    if b == 0.0:
        # evaluate folded offsets only so p(t+k) == p(t-k) bit for bit
        half = np.arange(m // 2 + 1)
        num = (1.0 + 2.0 * (A @ ctab[np.outer(np.arange(m), half) % m]))[np.minimum(k, m - k)]
    else:
        phase = np.outer(np.arange(m), k) % m  # s*k mod m
        num = 1.0 + 2.0 * (A @ ctab[phase] - B @ stab[phase])
    if num.min() < -1e-12 * num.max():
        raise DomainError("stable parameters do not give a non-negative lattice function")
    num = np.clip(num, 0.0, None)
    if b == 0.0:
        # sum over the lattice keeps only harmonics that are multiples of m
        return num / (m * (1.0 + 2.0 * A[0]))
    return num / num.sum()


def _cdwn_theta(m, rho, t):
    """Wrapped-normal lattice kernel summed over images, in log space."""
    sigma2 = -2.0 * np.log(rho)
    x = _folded_angles(m, t)
    n_img = int(np.ceil(np.sqrt(2.0 * sigma2 * 40.0) / TWO_PI)) + 2
    k = np.arange(-n_img, n_img + 1)
    logk = -((x[:, None] + TWO_PI * k[None, :]) ** 2) / (2.0 * sigma2)
    logw = logsumexp(logk, axis=1)
    return np.exp(logw - logsumexp(logw))


def pmf_cdwn(m, rho, t=0, method="auto"):
    """Conditionalized discrete wrapped normal pmf.

    Parameters
    ----------
    rho : float
        Mean resultant length of the wrapped normal parent, ``exp(-sigma^2/2)``.
    method : {'auto', 'series', 'theta'}
        ``'series'`` sums the Fourier series; ``'theta'`` sums Gaussian images,
        which converges fast when ``rho`` is near one. ``'auto'`` picks by
        ``rho``.
    """
    m = check_m(m)
    rho = _check_rho(rho)
    t = check_center(t, m)
    if method == "auto":
        method = "theta" if rho > np.exp(-np.pi) else "series"
    if rho == 0.0:
        return np.full(m, 1.0 / m)
    if method == "series":
        return pmf_cd_stable(m, rho, t, a=2.0, b=0.0)
    if method == "theta":
        return _cdwn_theta(m, rho, t)
    raise ValueError(f"unknown method {method!r}")


def check_katojones(rho, gamma, lam):
    """Validate the Kato-Jones parameter constraints.

    Raises
    ------
    DomainError
        Naming the first violated inequality.
    """
    rho, gamma, lam = float(rho), float(gamma), float(lam)
    if not (0.0 <= rho < 1.0):
        raise DomainError(f"Kato-Jones needs 0 <= rho < 1, got rho={rho}")
    if not (0.0 <= gamma <= (1.0 + rho) / 2.0 + 1e-15):
        raise DomainError(
            f"Kato-Jones needs 0 <= gamma <= (1+rho)/2, got gamma={gamma}, rho={rho}"
        )
    lhs = rho * gamma * np.cos(lam)
    rhs = (rho * rho + 2.0 * gamma - 1.0) / 2.0
    if lhs < rhs - 1e-12:
        raise DomainError(
            "Kato-Jones needs rho*gamma*cos(lambda) >= (rho^2 + 2*gamma - 1)/2, "
            f"got {lhs:.6g} < {rhs:.6g}"
        )
    return rho, gamma, lam


def cdkj_normalizer(m, rho, mu, gamma, lam):
    """Closed-form sum of the Kato-Jones kernel over the lattice."""
    rho_m = rho**m
    phase = m * (mu + lam)
    frac = (np.cos(phase - lam) - rho_m * np.cos(lam)) / (
        1.0 + rho_m * rho_m - 2.0 * rho_m * np.cos(phase)
    )
    return m * (1.0 + 2.0 * gamma * rho ** (m - 1) * frac)


def katojones_kernel(theta, rho, mu, gamma, lam):
    num = np.cos(theta - mu) - rho * np.cos(lam)
    den = 1.0 + rho * rho - 2.0 * rho * np.cos(theta - mu - lam)
    return 1.0 + 2.0 * gamma * num / den


def pmf_cdkj(m, rho, mu, gamma, lam):
    """Conditionalized discrete Kato-Jones pmf."""
    m = check_m(m)
    rho, gamma, lam = check_katojones(rho, gamma, lam)
    rho = min(rho, RHO_CAP)
    kern = katojones_kernel(lattice_angles(m), rho, mu, gamma, lam)
    return kern / cdkj_normalizer(m, rho, mu, gamma, lam)
