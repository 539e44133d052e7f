"""Sample summaries, maximum likelihood, bootstrap and uniformity tests."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats
from scipy.optimize import brentq, minimize_scalar

from ._numerics import TWO_PI, check_m, lattice_angles
from .distributions.conditionalized import cdvm_log_normalizer, cdwc_normalizer
from .distributions.family import FAMILIES, FamilySpec, family_info
from .errors import DomainError
from .moments import B, B_inverse
from .sampling import as_generator

KAPPA_MAX = 500.0
RHO_MAX = 0.999


# ---------------------------------------------------------------- summaries

@dataclass(frozen=True)
class SampleSummary:
    """Frequencies and trigonometric statistics of a lattice sample.

    ``a[p-1]``, ``b[p-1]`` are the order ``p`` cosine and sine means, and
    ``rbar``, ``theta_bar`` the matching resultant length and direction.
    """

    m: int
    n: int
    counts: np.ndarray
    a: np.ndarray
    b: np.ndarray
    rbar: np.ndarray
    theta_bar: np.ndarray
    degenerate: bool

    @property
    def R(self):
        return float(self.rbar[0])

    @property
    def theta(self):
        return float(self.theta_bar[0])


def counts_from_data(data, m):
    m = check_m(m)
    data = np.asarray(data)
    if data.size == 0:
        raise DomainError("empty data")
    if not np.issubdtype(data.dtype, np.integer):
        if np.any(data != np.round(data)):
            raise DomainError("observations must be integers in Z_m")
        data = data.astype(np.int64)
    if data.min() < 0 or data.max() >= m:
        raise DomainError(f"observations must lie in 0..{m - 1}")
    return np.bincount(data, minlength=m)


def summarize_counts(counts, P=2):
    """Summary from a frequency vector ``counts`` of length ``m``."""
    counts = np.asarray(counts)
    m = check_m(counts.shape[0])
    n = int(counts.sum())
    if n == 0:
        raise DomainError("empty data")
    r = np.arange(m)
    p = np.arange(1, P + 1)[:, None]
    j = (p * r) % m
    a = (np.cos(TWO_PI * j / m) @ counts) / n
    b = (np.sin(TWO_PI * j / m) @ counts) / n
    rbar = np.hypot(a, b)
    degenerate = bool(rbar[0] < 1e-12)
    theta = np.where(rbar < 1e-12, 0.0, np.mod(np.arctan2(b, a), TWO_PI))
    return SampleSummary(m, n, counts, a, b, rbar, theta, degenerate)


def summarize(data, m, P=2):
    """Summary of a sequence of lattice values.

    Examples
    --------
    >>> s = summarize([3, 3, 3], 12)
    >>> round(s.R, 12), round(s.theta, 12)
    (1.0, 1.570796326795)
    """
    return summarize_counts(counts_from_data(data, m), P)


def _as_summary(obj, m=None):
    if isinstance(obj, SampleSummary):
        return obj
    if m is None:
        raise DomainError("lattice size m is required for raw data")
    return summarize(obj, m)


# ---------------------------------------------------------------- MLE

@dataclass
class MleResult:
    family: str
    m: int
    tau_hat: float
    t_hat: int
    loglik: float
    se_tau: float = float("nan")
    rbar_t: float = float("nan")
    saturated: bool = False
    nonconcave: bool = False
    shape: dict = field(default_factory=dict)

    @property
    def theta_hat(self):
        return TWO_PI * self.t_hat / self.m

    def spec(self):
        return FamilySpec(self.family, self.m, self.tau_hat, self.t_hat, shape=self.shape)


def _nearest_lattice(theta, m):
    """Lattice index nearest ``theta``; exact ties go to the smaller residue."""
    x = theta * m / TWO_PI
    lo, hi = np.floor(x), np.ceil(x)
    if abs(x - lo - 0.5) < 1e-12:
        return int(min(lo % m, hi % m))
    return int(np.round(x)) % m


def loglik_all_t(counts, p0):
    """Log-likelihood for every centre ``t``: ``sum_r n_r log p0[(r - t) mod m]``."""
    counts = np.asarray(counts, dtype=float)
    m = counts.shape[0]
    idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
    with np.errstate(divide="ignore"):
        logp = np.log(p0)
    terms = np.where(counts[None, :] > 0, counts[None, :] * logp[idx], 0.0)
    return terms.sum(axis=1)


def cdvm_loglik(summary, kappa, t):
    """``n kappa Rbar cos(theta_bar - 2 pi t/m) - n log L_0(kappa)``."""
    s = summary
    proj = s.a[0] * np.cos(TWO_PI * t / s.m) + s.b[0] * np.sin(TWO_PI * t / s.m)
    return s.n * (kappa * proj - cdvm_log_normalizer(s.m, kappa))


def mle_cdvm(summary, m=None, kappa_max=KAPPA_MAX):
    """Closed-form CDVM maximum likelihood.

    ``t_hat`` is the lattice point nearest the sample mean direction and
    ``kappa_hat`` solves ``B(kappa) = Rbar cos(theta_bar - 2 pi t_hat / m)``.
    """
    s = _as_summary(summary, m)
    if s.degenerate:
        t_hat = 0
    else:
        t_hat = _nearest_lattice(s.theta, s.m)
    target = s.a[0] * np.cos(TWO_PI * t_hat / s.m) + s.b[0] * np.sin(TWO_PI * t_hat / s.m)
    saturated = False
    if target <= 0.0:
        kappa = 0.0
    elif target >= B(kappa_max, s.m):
        kappa, saturated = kappa_max, True
    else:
        kappa = B_inverse(target, s.m)
    return MleResult("cdvm", s.m, float(kappa), t_hat, float(cdvm_loglik(s, kappa, t_hat)),
                     saturated=saturated)


def _cos_matrix(m):
    idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
    return np.cos(TWO_PI * idx / m)  # [t, r]


def _cdwc_score(rho, counts, cmat, n):
    """Derivative in ``rho`` of the CDWC log-likelihood for every ``t``."""
    m = counts.shape[0]
    rm = rho**m
    dlogc = -2.0 * rho / (1.0 - rho * rho) - 2.0 * m * rho ** (m - 1) / (1.0 - rm * rm)
    d = 1.0 + rho * rho - 2.0 * rho * cmat
    return n * dlogc - ((2.0 * rho - 2.0 * cmat) / d) @ counts


def _cdwc_loglik(rho, counts, cmat, n):
    m = counts.shape[0]
    d = 1.0 + rho * rho - 2.0 * rho * cmat
    return n * np.log(cdwc_normalizer(m, rho)) - np.log(d) @ counts


def mle_cdwc(summary, m=None, rho_max=RHO_MAX, n_grid=200):
    """CDWC maximum likelihood by root finding on the score for each ``t``.

    For every centre the score is scanned on ``n_grid`` points of
    ``(0, rho_max)``; each downward sign change is refined by Brent's method.
    Boundary values ``0`` and ``rho_max`` are always candidates.  If a centre
    has more than one interior local maximum the result is flagged
    ``nonconcave``.
    """
    s = _as_summary(summary, m)
    counts = np.asarray(s.counts, dtype=float)
    m, n = s.m, s.n
    cmat = _cos_matrix(m)
    grid = np.linspace(0.0, rho_max, n_grid + 1)
    h = np.array([_cdwc_score(r, counts, cmat, n) for r in grid])  # [grid, t]
    ll0 = -n * np.log(m)
    best = (ll0, 0.0, 0, False)
    for t in range(m):
        ht = h[:, t]
        down = np.flatnonzero((ht[:-1] > 0) & (ht[1:] <= 0))
        cands = []
        for i in down:
            root = brentq(lambda r: _cdwc_score(r, counts, cmat[t:t + 1], n)[0],
                          grid[i], grid[i + 1], xtol=1e-12)
            cands.append((_cdwc_loglik(root, counts, cmat[t], n), root))
        if ht[-1] > 0:
            cands.append((_cdwc_loglik(rho_max, counts, cmat[t], n), rho_max))
        if not cands:
            continue
        ll, rho = max(cands)
        if ll > best[0] + 1e-12:
            best = (ll, rho, t, len(down) > 1)
    ll, rho, t, nonconcave = best
    return MleResult("cdwc", m, float(rho), int(t), float(ll),
                     saturated=rho >= rho_max, nonconcave=nonconcave)


def _tau_grid(info):
    lo, hi = info.tau_bounds
    if hi > 1.0:
        return np.concatenate([[lo], np.geomspace(max(lo, 1e-2), hi, 60)])
    return np.linspace(lo, hi, 61)


def mle_generic(summary, family, m=None, shape=None, xtol=1e-8):
    """Maximum likelihood for any registered location family.

    The log-likelihood is evaluated for all centres at once on a concentration
    grid; each centre is then refined by bounded Brent search in the grid cell
    around its best grid value.  The global maximum over centres is returned,
    with ties going to the smallest ``t``.
    """
    s = _as_summary(summary, m)
    info = family_info(family)
    if isinstance(info, str) or not info.location:
        raise DomainError(f"family {family!r} is not a location family")
    shape = dict(shape or {})
    counts = np.asarray(s.counts, dtype=float)
    grid = _tau_grid(info)
    table = np.array([loglik_all_t(counts, info.pmf0(s.m, g, **shape)) for g in grid])
    best = (-np.inf, 0.0, 0)
    for t in range(s.m):
        i = int(np.argmax(table[:, t]))
        lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        ll_t, tau_t = table[i, t], grid[i]
        if hi > lo:
            res = minimize_scalar(
                lambda g: -loglik_all_t(counts, info.pmf0(s.m, g, **shape))[t],
                bounds=(lo, hi), method="bounded", options={"xatol": xtol},
            )
            if -res.fun > ll_t:
                ll_t, tau_t = -res.fun, float(res.x)
        if ll_t > best[0] + 1e-12:
            best = (ll_t, tau_t, t)
    ll, tau, t = best
    return MleResult(info.name, s.m, float(tau), int(t), float(ll),
                     saturated=tau >= info.tau_bounds[1] - 1e-6, shape=shape)


def mle(summary, family, m=None, **kw):
    """Dispatch to the specialised CDVM / CDWC routines or :func:`mle_generic`."""
    tag = family_info(family)
    tag = tag if isinstance(tag, str) else tag.name
    if tag == "cdvm":
        return mle_cdvm(summary, m, **kw)
    if tag == "cdwc":
        return mle_cdwc(summary, m, **kw)
    return mle_generic(summary, tag, m, **kw)


# ---------------------------------------------------------------- bootstrap

def bootstrap(mle_fn, spec_hat, n, B=500, seed=None, return_draws=False):
    """Parametric bootstrap of an estimator.

    Parameters
    ----------
    mle_fn : callable
        Maps a :class:`SampleSummary` to an :class:`MleResult`.
    spec_hat : FamilySpec
        Fitted distribution to resample from.

    Returns
    -------
    (se_tau, rbar_t) or (se_tau, rbar_t, tau_draws, t_draws)
    """
    if B < 2:
        raise DomainError("need at least two bootstrap replicates")
    rng = as_generator(seed)
    probs = spec_hat.pmf()
    m = probs.shape[0]
    counts = rng.multinomial(n, probs / probs.sum(), size=B)
    taus = np.empty(B)
    ts = np.empty(B, dtype=int)
    for i in range(B):
        res = mle_fn(summarize_counts(counts[i], P=1))
        taus[i], ts[i] = res.tau_hat, res.t_hat
    se = float(np.std(taus, ddof=1))
    rbar = float(np.abs(np.mean(np.exp(1j * TWO_PI * ts / m))))
    if return_draws:
        return se, rbar, taus, ts
    return se, rbar


# ---------------------------------------------------------------- tests

@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    name: str
    value: float
    p_value: float
    replications: int
    critical_values: dict = field(default_factory=dict)
    p_value_asymptotic: Optional[float] = None
    extra: dict = field(default_factory=dict)


def _mc_pvalue(value, null):
    null = np.asarray(null)
    return float((1 + np.count_nonzero(null >= value - 1e-12)) / (1 + null.size))


def _crit(null):
    return {"5%": float(np.quantile(null, 0.95)), "1%": float(np.quantile(null, 0.99))}


def lr_statistic(summary, family="cdwc"):
    """``T = 2 (LL(tau_hat, t_hat) - LL(0, 0))``, clipped at zero."""
    res = mle(summary, family)
    ll0 = -summary.n * np.log(summary.m)
    return max(0.0, 2.0 * (res.loglik - ll0)), res


def null_distribution_T(n, m, family="cdwc", replicates=999, seed=None):
    """Monte-Carlo null draws of ``T`` from uniform samples of size ``n``."""
    rng = as_generator(seed)
    counts = rng.multinomial(n, np.full(m, 1.0 / m), size=replicates)
    return np.array([lr_statistic(summarize_counts(c, 1), family)[0] for c in counts])


def test_uniformity_T(data, m=None, family="cdwc", replicates=999, seed=None, null=None):
    """Likelihood-ratio test of uniformity within a location family.

    ``null`` may hold precomputed null draws (from :func:`null_distribution_T`
    with the same ``n`` and ``m``) so many datasets can share one null set.
    """
    s = _as_summary(data, m)
    if s.n < 10:
        raise DomainError("test needs n >= 10")
    T, res = lr_statistic(s, family)
    if null is None:
        null = null_distribution_T(s.n, s.m, family, replicates, seed)
    null = np.asarray(null)
    return TestReport(
        "T", T, _mc_pvalue(T, null), int(null.size), _crit(null),
        extra={"tau_hat": res.tau_hat, "t_hat": res.t_hat, "family": res.family,
               "null_sd": float(np.std(null, ddof=1))},
    )


def ug2_statistic(counts):
    counts = np.asarray(counts, dtype=float)
    m = counts.shape[-1]
    n = counts.sum(axis=-1, keepdims=True)
    S = np.cumsum(counts - n / m, axis=-1)
    dev = S - S.mean(axis=-1, keepdims=True)
    return (dev**2).sum(axis=-1) / (n[..., 0] * m)


def _rbar_p(counts, p):
    counts = np.asarray(counts, dtype=float)
    m = counts.shape[-1]
    j = (p * np.arange(m)) % m
    n = counts.sum(axis=-1)
    c = counts @ np.cos(TWO_PI * j / m) / n
    s = counts @ np.sin(TWO_PI * j / m) / n
    return np.hypot(c, s)


def t1_statistic(counts):
    n = np.asarray(counts).sum(axis=-1)
    return 2.0 * n * _rbar_p(counts, 1) ** 2


def t2_statistic(counts):
    n = np.asarray(counts).sum(axis=-1)
    return 2.0 * n * (_rbar_p(counts, 1) ** 2 + _rbar_p(counts, 2) ** 2)


def _uniform_null_counts(n, m, replicates, seed):
    return as_generator(seed).multinomial(n, np.full(m, 1.0 / m), size=replicates)


def _simple_test(name, stat_fn, df, data, m, replicates, seed):
    s = _as_summary(data, m)
    if s.n < 10:
        raise DomainError("test needs n >= 10")
    value = float(stat_fn(s.counts))
    null = stat_fn(_uniform_null_counts(s.n, s.m, replicates, seed))
    p_asym = None if df is None else float(stats.chi2.sf(value, df))
    return TestReport(name, value, _mc_pvalue(value, null), replicates, _crit(null), p_asym,
                      extra={"null_mean": float(null.mean()), "null_sd": float(null.std(ddof=1))})


def test_UG2(data, m=None, replicates=9999, seed=None):
    """Circular Karl-Pearson statistic with a Monte-Carlo p-value."""
    return _simple_test("UG2", ug2_statistic, None, data, m, replicates, seed)


def test_T1(data, m=None, replicates=9999, seed=None):
    """Rayleigh statistic ``2 n Rbar^2`` (asymptotically chi-squared, 2 df)."""
    return _simple_test("T1sq", t1_statistic, 2, data, m, replicates, seed)


def test_T2(data, m=None, replicates=9999, seed=None):
    """``2 n (Rbar_1^2 + Rbar_2^2)`` (asymptotically chi-squared, 4 df)."""
    return _simple_test("T2sq", t2_statistic, 4, data, m, replicates, seed)


def serial_statistics(diff_counts, n):
    """``sqrt(2n) C``, ``sqrt(2n) S`` and ``2 n R^2`` from lag-difference counts.

    ``C`` and ``S`` are sums over the ``n - 1`` differences divided by ``n``.
    """
    diff_counts = np.asarray(diff_counts, dtype=float)
    m = diff_counts.shape[-1]
    th = lattice_angles(m)
    C = diff_counts @ np.cos(th) / n
    S = diff_counts @ np.sin(th) / n
    root = np.sqrt(2.0 * n)
    return root * C, root * S, 2.0 * n * (C * C + S * S)


def serial_null(n, m, replicates=100_000, seed=None):
    """Null draws of the serial statistics.

    Under iid uniformity the lag differences are themselves iid uniform, so
    the difference counts are multinomial with ``n - 1`` trials.
    """
    counts = _uniform_null_counts(n - 1, m, replicates, seed)
    return serial_statistics(counts, n)


def serial_cutoffs(n, m, replicates=100_000, seed=None, level=0.01):
    """Two-sided cutoffs for ``sqrt(2n) C`` and ``sqrt(2n) S``; upper for ``2n R^2``."""
    c, s, r2 = serial_null(n, m, replicates, seed)
    q = [level / 2, 1 - level / 2]
    return {
        "C": tuple(np.quantile(c, q)),
        "S": tuple(np.quantile(s, q)),
        "R2": float(np.quantile(r2, 1 - level)),
    }


def test_serial(data, m, replicates=100_000, seed=None):
    """Serial-independence test on lag-1 differences of an ordered sequence."""
    m = check_m(m)
    data = np.asarray(data)
    counts_from_data(data, m)  # range check
    n = data.size
    if n < 3:
        raise DomainError("serial test needs n >= 3")
    diffs = np.mod(np.diff(data.astype(np.int64)), m)
    c, s, r2 = serial_statistics(np.bincount(diffs, minlength=m), n)
    nc, ns, nr2 = serial_null(n, m, replicates, seed)
    crit = {
        "C_1%": tuple(np.quantile(nc, [0.005, 0.995])),
        "C_5%": tuple(np.quantile(nc, [0.025, 0.975])),
        "S_1%": tuple(np.quantile(ns, [0.005, 0.995])),
        "S_5%": tuple(np.quantile(ns, [0.025, 0.975])),
        "R2_1%": float(np.quantile(nr2, 0.99)),
        "R2_5%": float(np.quantile(nr2, 0.95)),
    }
    return TestReport(
        "serial", float(r2), _mc_pvalue(r2, nr2), replicates, crit,
        p_value_asymptotic=float(stats.chi2.sf(r2, 2)),
        extra={
            "sqrt2n_C": float(c), "sqrt2n_S": float(s), "two_n_R2": float(r2),
            "C_bar": float(c / np.sqrt(2 * n)), "S_bar": float(s / np.sqrt(2 * n)),
            "p_value_C": float(np.mean(np.abs(nc) >= abs(c))),
            "p_value_S": float(np.mean(np.abs(ns) >= abs(s))),
        },
    )


def moment_estimate_cdwc(summary, m=None):
    """Moment estimator: invert ``rho_w`` at the sample ``Rbar``."""
    from .moments import rho_w_inverse

    s = _as_summary(summary, m)
    return rho_w_inverse(s.R, s.m)
