"""Tagged family descriptions and a registry used by inference and the CLI."""

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .._numerics import TWO_PI, check_m
from ..errors import DomainError
from . import conditionalized as cd
from . import marginalized as md
from . import wrapped
from .maxent import maxent_pmf


@dataclass(frozen=True)
class FamilyInfo:
    """Static description of a family.

    ``pmf0(m, tau, **shape)`` gives the pmf centred at ``t = 0``; location
    families are shifted by rolling it.
    """

    name: str
    kind: str  # 'conditionalized', 'marginalized', 'wrapped' or 'maxent'
    tau_bounds: tuple
    pmf0: Callable
    location: bool = True


def _stable0(m, tau, a=1.0, b=0.0):
    return cd.pmf_cd_stable(m, tau, 0, a=a, b=b)


FAMILIES = {
    "cdvm": FamilyInfo("cdvm", "conditionalized", (0.0, 500.0), lambda m, k: cd.pmf_cdvm(m, k)),
    "cdwc": FamilyInfo("cdwc", "conditionalized", (0.0, 0.999), lambda m, r: cd.pmf_cdwc(m, r)),
    "cdcardioid": FamilyInfo(
        "cdcardioid", "conditionalized", (0.0, 0.4999), lambda m, r: cd.pmf_cd_cardioid(m, r)
    ),
    "cdwn": FamilyInfo("cdwn", "conditionalized", (0.0, 0.999), lambda m, r: cd.pmf_cdwn(m, r)),
    "cdstable": FamilyInfo("cdstable", "conditionalized", (0.0, 0.999), _stable0),
    "cdkj": FamilyInfo(
        "cdkj", "conditionalized", (0.0, 0.999),
        lambda m, r, gamma, lam: cd.pmf_cdkj(m, r, 0.0, gamma, lam),
    ),
    "mdvm": FamilyInfo("mdvm", "marginalized", (0.0, 500.0), lambda m, k: md.pmf_mdvm(m, k)),
    "mdwc": FamilyInfo("mdwc", "marginalized", (0.0, 0.999), lambda m, r: md.pmf_mdwc(m, r)),
    "mdcardioid": FamilyInfo(
        "mdcardioid", "marginalized", (0.0, 0.4999), lambda m, r: md.pmf_md_cardioid(m, r)
    ),
    "mdkj": FamilyInfo(
        "mdkj", "marginalized", (0.0, 0.999),
        lambda m, r, gamma, lam: md.pmf_mdkj(m, r, 0.0, gamma, lam),
    ),
    "wrappedpoisson": FamilyInfo(
        "wrappedpoisson", "wrapped", (0.0, 1e3), lambda m, lam: wrapped.Poisson(lam).wrapped(m)
    ),
    "wrappedgeometric": FamilyInfo(
        "wrappedgeometric", "wrapped", (1e-9, 1 - 1e-9),
        lambda m, p: wrapped.Geometric(p).wrapped(m),
    ),
    "wrappedskewlaplace": FamilyInfo(
        "wrappedskewlaplace", "wrapped", (1e-9, 1 - 1e-9),
        lambda m, p, q: wrapped.SkewLaplace(p, q).wrapped(m),
    ),
}


def family_info(name):
    key = str(name).lower().replace("_", "").replace("-", "")
    if key not in FAMILIES and key != "maxent":
        raise DomainError(f"unknown family {name!r}; known: {sorted(FAMILIES) + ['maxent']}")
    return key if key == "maxent" else FAMILIES[key]


def location_pmf(info, m, tau, t, **shape):
    """pmf of a registered family at concentration ``tau`` and lattice centre ``t``."""
    p0 = info.pmf0(m, tau, **shape)
    return np.roll(p0, int(t) % m)


@dataclass(frozen=True)
class FamilySpec:
    """One distribution: family tag, lattice size and parameters.

    Parameters
    ----------
    family : str
        Case-insensitive tag such as ``'CDVM'`` or ``'WrappedPoisson'``.
    m : int
    concentration : float
        ``kappa``, ``rho``, Poisson ``lambda`` or geometric / skew-Laplace ``p``.
    t : int
        Lattice centre.
    mu : float, optional
        Continuous location; overrides ``t`` for marginalized and Kato-Jones
        families.
    shape : mapping
        Extra parameters: ``a``, ``b`` (stable), ``gamma``, ``lam`` (Kato-Jones),
        ``q`` (skew-Laplace), ``functions`` and ``coef`` (max-entropy).
    """

    family: str
    m: int
    concentration: float = 0.0
    t: int = 0
    mu: Optional[float] = None
    shape: Mapping = field(default_factory=dict)

    @property
    def tag(self):
        info = family_info(self.family)
        return info if isinstance(info, str) else info.name

    @property
    def kind(self):
        info = family_info(self.family)
        return "maxent" if isinstance(info, str) else info.kind

    @property
    def location(self):
        return self.mu if self.mu is not None else TWO_PI * self.t / self.m

    def pmf(self):
        m = check_m(self.m)
        tag = self.tag
        tau = self.concentration
        sh = dict(self.shape)
        if tag == "maxent":
            r = np.arange(m)
            T = np.column_stack([np.broadcast_to(f(r), (m,)) for f in sh["functions"]])
            return maxent_pmf(T, sh["coef"])
        if tag == "cdkj":
            return cd.pmf_cdkj(m, tau, self.location, sh["gamma"], sh["lam"])
        if tag == "mdkj":
            return md.pmf_mdkj(m, tau, self.location, sh["gamma"], sh["lam"])
        if self.mu is not None:
            if tag == "mdvm":
                return md.pmf_mdvm(m, tau, self.mu)
            if tag == "mdwc":
                return md.pmf_mdwc(m, tau, self.mu)
            if tag == "mdcardioid":
                return md.pmf_md_cardioid(m, tau, self.mu * m / TWO_PI)
            if tag == "cdwc":
                return cd.pmf_cdwc_mu(m, tau, self.mu)
            if tag == "cdcardioid":
                return cd.pmf_cd_cardioid(m, tau, mu=self.mu)
            raise DomainError(f"family {tag} takes a lattice centre t, not a continuous mu")
        if tag == "wrappedpoisson":
            return wrapped.pmf_centered_wrapped(wrapped.Poisson(tau), m, self.t)
        if tag == "wrappedgeometric":
            return wrapped.pmf_centered_wrapped(wrapped.Geometric(tau), m, self.t)
        if tag == "wrappedskewlaplace":
            return wrapped.pmf_centered_wrapped(wrapped.SkewLaplace(tau, sh["q"]), m, self.t)
        if tag == "cdvm":
            return cd.pmf_cdvm(m, tau, self.t)
        if tag == "cdwc":
            return cd.pmf_cdwc(m, tau, self.t)
        if tag == "cdcardioid":
            return cd.pmf_cd_cardioid(m, tau, self.t)
        if tag == "cdwn":
            return cd.pmf_cdwn(m, tau, self.t)
        if tag == "cdstable":
            return cd.pmf_cd_stable(m, tau, self.t, a=sh.get("a", 1.0), b=sh.get("b", 0.0))
        if tag == "mdvm":
            return md.pmf_mdvm(m, tau, self.location)
        if tag == "mdwc":
            return md.pmf_mdwc(m, tau, self.location)
        if tag == "mdcardioid":
            return md.pmf_md_cardioid(m, tau, self.t)
        raise DomainError(f"no pmf for family {tag}")
