"""Divergences between lattice pmfs, moment matching and binning corrections."""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ._numerics import TWO_PI, check_m, lattice_angles
from .distributions.family import family_info
from .errors import DomainError
from .moments import B, B_inverse, rho_w, rho_w_inverse


@dataclass(frozen=True)
class DivergenceTriple:
    kl: float
    l1: float
    l2: float


def divergences(p1, p2):
    """KL(p1 || p2), L1 and scaled L2 between two pmfs on the same lattice.

    L2 is ``sqrt(m / (2 pi) * sum (p1 - p2)^2)`` so it approaches the
    continuous L2 distance of the parent densities as ``m`` grows.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape or p1.ndim != 1:
        raise DomainError("pmfs must be on the same lattice")
    m = p1.shape[0]
    pos = p1 > 0
    if np.any(p2[pos] <= 0):
        raise DomainError("KL undefined: p2 vanishes where p1 has mass")
    kl = float(np.sum(p1[pos] * np.log(p1[pos] / p2[pos])))
    diff = p1 - p2
    l1 = float(np.abs(diff).sum())
    l2 = float(np.sqrt(m / TWO_PI * np.sum(diff * diff)))
    return DivergenceTriple(max(kl, 0.0), l1, l2)


# ---------------------------------------------------------------- moment matching

def first_moment(family, tau, m):
    """Mean resultant length ``E cos(2 pi r/m)`` of a family centred at 0."""
    info = family_info(family)
    if info.name == "cdvm":
        return B(tau, m)
    if info.name == "cdwc":
        return float(rho_w(tau, m))
    p = info.pmf0(m, tau)
    return float(p @ np.cos(lattice_angles(m)))


def moment_to_concentration(family, target, m):
    """Concentration whose first moment equals ``target``."""
    info = family_info(family)
    if target == 0.0:
        return 0.0
    if info.name == "cdvm":
        return B_inverse(target, m)
    if info.name == "cdwc":
        return rho_w_inverse(target, m)
    lo, hi = info.tau_bounds
    hi = 1.0 - 1e-12 if hi < 1.0 else hi
    f_hi = first_moment(info.name, hi, m)
    if not 0.0 <= target < f_hi:
        raise DomainError(f"first moment {target!r} not attainable by {info.name} (max {f_hi:.6g})")
    return brentq(lambda x: first_moment(info.name, x, m) - target, lo, hi,
                  xtol=1e-14, rtol=1e-14, maxiter=500)


def map_concentration(from_family, to_family, value, m):
    """Map a concentration across families by matching first trigonometric moments."""
    m = check_m(m)
    return moment_to_concentration(to_family, first_moment(from_family, value, m), m)


# ---------------------------------------------------------------- scans

@dataclass
class ScanResult:
    grid: np.ndarray
    kl: np.ndarray
    l1: np.ndarray
    l2: np.ndarray

    def best(self, metric):
        """``(max, argmax rho_w, at_cap)`` for ``'kl'``, ``'l1'`` or ``'l2'``."""
        vals = getattr(self, metric)
        i = int(np.argmax(vals))
        return float(vals[i]), float(self.grid[i]), i == len(vals) - 1

    def table(self):
        return {k: self.best(k) for k in ("kl", "l1", "l2")}

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rho_w", "kl", "l1", "l2"])
            for row in zip(self.grid, self.kl, self.l1, self.l2):
                w.writerow([f"{v:.10g}" for v in row])


def default_grid(step=0.001, cap=0.995):
    return np.round(np.arange(step, cap + step / 2, step), 10)


def max_divergence_scan(base, other, m, grid=None):
    """Divergences ``(base || other)`` at moment-matched pairs over a ``rho_w`` grid.

    Each grid value is the common first moment; both concentrations are
    solved from it.  Maxima sitting at the last grid point are flagged by
    :meth:`ScanResult.best`.
    """
    m = check_m(m)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0 or grid.min() < 0 or grid.max() > 0.995 + 1e-12:
        raise DomainError("scan grid must lie within [0, 0.995]")
    bi, oi = family_info(base), family_info(other)
    kl, l1, l2 = (np.empty(grid.size) for _ in range(3))
    for i, g in enumerate(grid):
        p1 = bi.pmf0(m, moment_to_concentration(bi.name, g, m))
        p2 = oi.pmf0(m, moment_to_concentration(oi.name, g, m))
        d = divergences(p1, p2)
        kl[i], l1[i], l2[i] = d.kl, d.l1, d.l2
    return ScanResult(grid, kl, l1, l2)


# ---------------------------------------------------------------- Sheppard

def sheppard_multiplier(h):
    """``a(h) = h / (2 sin(h/2))`` with ``a(0) = 1``."""
    h = np.asarray(h, dtype=float)
    half = h / 2.0
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(half == 0, 1.0, half / np.sin(half))
    return out if out.ndim else float(out)


def sheppard_report(rho, m_list):
    """Rows of ``E cos(theta)``, ``E cos(2 theta)`` for MDWC and CDWC at ``mu = 0``.

    CDWC uses its closed-form moments; MDWC moments are exact sums over its
    pmf.  ``a1`` and ``a2`` are the Sheppard multipliers at ``h`` and ``2h``
    with ``h = 2 pi / m``.
    """
    from .distributions import pmf_mdwc

    rows = []
    for m in m_list:
        m = check_m(m)
        th = lattice_angles(m)
        md = pmf_mdwc(m, rho)
        cd = [(rho**p + rho ** ((m - p) % m if (m - p) % m else m)) / (1.0 + rho**m)
              for p in (1, 2)]
        h = TWO_PI / m
        rows.append({
            "m": m,
            "mdwc_cos1": float(md @ np.cos(th)), "mdwc_cos2": float(md @ np.cos(2 * th)),
            "cdwc_cos1": float(cd[0]), "cdwc_cos2": float(cd[1]),
            "a1": sheppard_multiplier(h), "a2": sheppard_multiplier(2 * h),
        })
    return rows
