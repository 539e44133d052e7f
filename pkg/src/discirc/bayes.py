"""Flat-prior MCMC for a single changepoint and for finite mixtures on ``Z_m``."""

import warnings
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from ._numerics import TWO_PI, check_m
from .distributions.family import family_info
from .errors import DomainError
from .inference import counts_from_data


# ---------------------------------------------------------------- configuration

@dataclass(frozen=True)
class MCMCConfig:
    """Sampler settings; ``from_file`` reads ``key=value`` lines."""

    iterations: int = 20_000
    burnin: int = 5_000
    thin: int = 5
    chains: int = 1
    kappa_max: float = 50.0
    scale_tau: Optional[float] = None  # default 0.05 for rho, 0.5 for kappa
    k_window: int = 25
    k_update: str = "gibbs"  # or 'metropolis'
    adapt: bool = True
    seed: Optional[int] = None

    def validate(self):
        if self.iterations < 1 or self.thin < 1 or self.chains < 1:
            raise DomainError("iterations, thin and chains must be positive")
        if not 0 <= self.burnin < self.iterations:
            raise DomainError("burn-in must be non-negative and smaller than iterations")
        if self.k_update not in ("gibbs", "metropolis"):
            raise DomainError("k_update must be 'gibbs' or 'metropolis'")
        return self

    @classmethod
    def from_file(cls, path):
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DomainError(f"{path}:{lineno}: expected key=value")
                key, val = (s.strip() for s in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in types:
                    raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
                kw[key] = _parse_value(val, str(types[key]))
        return cls(**kw).validate()


def _parse_value(val, typ):
    if "bool" in typ:
        return val.lower() in ("1", "true", "yes", "on")
    if "str" in typ:
        return val
    if val.lower() in ("none", ""):
        return None
    if "int" in typ:
        return int(val)
    return float(val)


# ---------------------------------------------------------------- draws

@dataclass
class PosteriorDraws:
    """Thinned post burn-in draws with summaries.

    ``circular`` maps centre parameter names to their lattice size so their
    circular mean resultant length can be reported; ``discrete`` lists
    parameters whose mode is reported.
    """

    draws: dict
    acceptance: dict
    circular: dict = field(default_factory=dict)
    discrete: tuple = ()
    n_obs: int = 0

    def __len__(self):
        return len(next(iter(self.draws.values())))

    def summary(self, name):
        x = np.asarray(self.draws[name])
        out = {
            "mean": float(x.mean()),
            "sd": float(x.std(ddof=1)) if x.size > 1 else 0.0,
            "q025": float(np.quantile(x, 0.025)),
            "q975": float(np.quantile(x, 0.975)),
        }
        if name not in self.discrete and name not in self.circular:
            out["hpd_lo"], out["hpd_hi"] = self.hpd_interval(name)
        if name in self.discrete or name in self.circular:
            vals, cnt = np.unique(x.astype(int), return_counts=True)
            out["mode"] = int(vals[np.argmax(cnt)])
        if name in self.circular:
            m = self.circular[name]
            z = np.mean(np.exp(1j * TWO_PI * x / m))
            out["rbar"] = float(abs(z))
            out["circ_mean"] = float(np.mod(np.angle(z), TWO_PI))
        if name in self.discrete:
            out["multimodal"] = bool(_multimodal(x))
        return out

    def summaries(self):
        return {k: self.summary(k) for k in self.draws}

    def interval(self, name, level=0.95):
        a = (1 - level) / 2
        return tuple(float(v) for v in np.quantile(self.draws[name], [a, 1 - a]))

    def hpd_interval(self, name, level=0.95):
        """Shortest interval holding ``level`` of the draws.

        Preferred for concentrations whose posterior piles up at the 0 boundary,
        where the equal-tailed interval cannot reach 0.
        """
        x = np.sort(np.asarray(self.draws[name], dtype=float))
        k = max(1, int(np.ceil(level * x.size)))
        widths = x[k - 1:] - x[: x.size - k + 1]
        i = int(np.argmin(widths))
        return float(x[i]), float(x[i + k - 1])


def _multimodal(x, bins=50, ratio=0.8):
    """True when a separated second histogram peak reaches ``ratio`` of the first."""
    lo, hi = x.min(), x.max()
    if hi - lo < 2:
        return False
    h, _ = np.histogram(x, bins=min(bins, int(hi - lo) + 1))
    pad = np.concatenate([[-1], h, [-1]])
    peaks = np.flatnonzero((pad[1:-1] > pad[:-2]) & (pad[1:-1] >= pad[2:]))
    if peaks.size < 2:
        return False
    order = peaks[np.argsort(h[peaks])[::-1]]
    top, second = order[0], order[1]
    # require a dip between the two peaks
    a, b = sorted((top, second))
    dip = h[a:b + 1].min()
    return h[second] >= ratio * h[top] and dip < ratio * h[second]


def _pool(results):
    if len(results) == 1:
        return results[0]
    first = results[0]
    draws = {k: np.concatenate([r.draws[k] for r in results]) for k in first.draws}
    acc = {k: float(np.mean([r.acceptance[k] for r in results])) for k in first.acceptance}
    return PosteriorDraws(draws, acc, first.circular, first.discrete, first.n_obs)


def _check_acceptance(acc):
    for name, rate in acc.items():
        if name.startswith("tau") and not 0.1 <= rate <= 0.6:
            warnings.warn(f"acceptance rate {rate:.2f} for {name} outside [0.1, 0.6]",
                          RuntimeWarning, stacklevel=3)


# ---------------------------------------------------------------- shared pieces

class _Family:
    """Concentration range and cached log-pmf for one location family."""

    def __init__(self, tag, m, kappa_max):
        info = family_info(tag)
        if isinstance(info, str) or not info.location:
            raise DomainError(f"family {tag!r} is not a location family")
        self.info = info
        self.m = m
        lo, hi = info.tau_bounds
        self.upper = kappa_max if hi > 1.0 else hi
        self.default_scale = 0.5 if hi > 1.0 else 0.05
        self.idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m  # [t, r]

    def logp0(self, tau):
        with np.errstate(divide="ignore"):
            return np.log(self.info.pmf0(self.m, tau))

    def loglik_t(self, logp0, counts, t):
        return float(counts @ logp0[(np.arange(self.m) - t) % self.m])

    def loglik_all(self, logp0, counts):
        return logp0[self.idx] @ counts


def _reflect(x, upper):
    """Reflect a random-walk proposal back into ``[0, upper)``."""
    while x < 0 or x >= upper:
        x = -x if x < 0 else 2 * upper - x
        if x == upper:
            x = np.nextafter(upper, 0)
    return x


class _TauUpdater:
    """Reflected Gaussian random walk with burn-in scale adaptation."""

    def __init__(self, scale, upper, adapt):
        self.log_scale = np.log(scale)
        self.upper = upper
        self.adapt = adapt
        self.window = 0
        self.window_acc = 0

    def propose(self, rng, tau):
        return _reflect(tau + np.exp(self.log_scale) * rng.standard_normal(), self.upper)

    def record(self, accepted, burning):
        if not (self.adapt and burning):
            return
        self.window += 1
        self.window_acc += accepted
        if self.window == 100:
            rate = self.window_acc / 100
            self.log_scale += 0.5 * (rate - 0.3)
            self.log_scale = min(self.log_scale, np.log(self.upper))
            self.window = self.window_acc = 0


# ---------------------------------------------------------------- changepoint

@dataclass(frozen=True)
class ChangepointModel:
    """One changepoint at ``K``: observations ``1..K`` then ``K+1..n``.

    With ``first_uniform`` the first segment is fixed uniform; otherwise it
    has its own ``(tau1, t1)``.  ``fixed`` pins parameters by name
    (``'K'``, ``'tau2'``, ``'t2'``).
    """

    m: int
    family: str = "cdwc"
    first_uniform: bool = True
    fixed: dict = field(default_factory=dict)


def changepoint_fit(data, model: ChangepointModel, mcmc: MCMCConfig = MCMCConfig(), seed=None):
    """Posterior draws of ``(K, tau2, t2)`` under flat priors.

    Each sweep draws ``K`` exactly from its full conditional (``k_update =
    'gibbs'``) or by a random walk of half-width ``k_window``; ``tau2`` by a
    reflected Gaussian random walk; ``t2`` by Metropolis with a uniform
    proposal on ``Z_m``.
    """
    mcmc.validate()
    m = check_m(model.m)
    x = np.asarray(data)
    counts_from_data(x, m)
    n = x.size
    if n < 4:
        raise DomainError("changepoint analysis needs n >= 4")
    seed = mcmc.seed if seed is None else seed
    ss = np.random.SeedSequence(seed)
    results = [
        _changepoint_chain(x, n, m, model, mcmc, np.random.default_rng(child))
        for child in (ss.spawn(mcmc.chains) if mcmc.chains > 1 else [ss])
    ]
    out = _pool(results)
    _check_acceptance(out.acceptance)
    return out


def _changepoint_chain(x, n, m, model, mcmc, rng):
    fam = _Family(model.family, m, mcmc.kappa_max)
    cum = np.zeros((n + 1, m))
    cum[np.arange(1, n + 1), x] = 1.0
    cum = np.cumsum(cum, axis=0)  # cum[k] = counts of the first k observations
    total = cum[n]
    fixed = dict(model.fixed)
    segs = [] if model.first_uniform else [1]
    segs.append(2)

    K = int(fixed.get("K", n // 2))
    tau = {s: float(fixed.get(f"tau{s}", min(0.1, fam.upper / 2))) for s in segs}
    t = {s: int(fixed.get(f"t{s}", 0)) for s in segs}
    logp = {s: fam.logp0(tau[s]) for s in segs}
    uniform_lp = np.full(m, -np.log(m))

    def seg_logp(s):
        if s == 1 and model.first_uniform:
            return uniform_lp
        return logp[s][(np.arange(m) - t[s]) % m]

    def seg_counts(s):
        return cum[K] if s == 1 else total - cum[K]

    scale = mcmc.scale_tau or fam.default_scale
    upd = {s: _TauUpdater(scale, fam.upper, mcmc.adapt) for s in segs}
    acc = {f"tau{s}": 0 for s in segs} | {f"t{s}": 0 for s in segs} | {"K": 0}
    tries = dict.fromkeys(acc, 0)
    keep = []
    ks = np.arange(1, n)

    for it in range(mcmc.iterations):
        burning = it < mcmc.burnin
        # K
        if "K" not in fixed:
            lp1, lp2 = seg_logp(1), seg_logp(2)
            prefix1 = cum[1:n] @ lp1
            prefix2 = cum[1:n] @ lp2
            ll = prefix1 + (total @ lp2 - prefix2)
            if mcmc.k_update == "gibbs":
                w = np.exp(ll - ll.max())
                K = int(rng.choice(ks, p=w / w.sum()))
                acc["K"] += not burning
            else:
                prop = K + int(rng.integers(-mcmc.k_window, mcmc.k_window + 1))
                if 1 <= prop <= n - 1 and prop != K:
                    if np.log(rng.random()) < ll[prop - 1] - ll[K - 1]:
                        K = prop
                        acc["K"] += not burning
            tries["K"] += not burning
        for s in segs:
            c = seg_counts(s)
            # tau
            if f"tau{s}" not in fixed:
                cur = fam.loglik_t(logp[s], c, t[s])
                prop = upd[s].propose(rng, tau[s])
                lp_prop = fam.logp0(prop)
                new = fam.loglik_t(lp_prop, c, t[s])
                ok = np.log(rng.random()) < new - cur
                if ok:
                    tau[s], logp[s] = prop, lp_prop
                    acc[f"tau{s}"] += not burning
                upd[s].record(ok, burning)
                tries[f"tau{s}"] += not burning
            # t
            if f"t{s}" not in fixed:
                prop = int(rng.integers(m))
                if prop != t[s]:
                    d = fam.loglik_t(logp[s], c, prop) - fam.loglik_t(logp[s], c, t[s])
                    if np.log(rng.random()) < d:
                        t[s] = prop
                        acc[f"t{s}"] += not burning
                tries[f"t{s}"] += not burning
        if not burning and (it - mcmc.burnin) % mcmc.thin == 0:
            row = {"K": K}
            for s in segs:
                row[f"tau{s}"] = tau[s]
                row[f"t{s}"] = t[s]
            keep.append(row)

    draws = {k: np.array([r[k] for r in keep]) for k in keep[0]}
    for k in ("K",):
        draws[k] = draws[k].astype(int)
    for s in segs:
        draws[f"t{s}"] = draws[f"t{s}"].astype(int)
    rates = {k: acc[k] / tries[k] for k in acc if tries[k] > 0}
    circ = {f"t{s}": m for s in segs}
    return PosteriorDraws(draws, rates, circ, ("K",) + tuple(circ), n)


def changepoint_stream(data, prefixes, model, mcmc=MCMCConfig(), seed=None):
    """Independent changepoint fits on ``data[:u]`` for each bound ``u``.

    Every prefix is fitted with the same seed, so a single-prefix call equals
    :func:`changepoint_fit` on that prefix.
    """
    prefixes = [int(u) for u in prefixes]
    if any(b <= a for a, b in zip(prefixes, prefixes[1:])):
        raise DomainError("prefixes must be increasing")
    if prefixes and prefixes[0] < 10:
        raise DomainError("each prefix must contain at least 10 observations")
    x = np.asarray(data)
    if prefixes and prefixes[-1] > x.size:
        raise DomainError("prefix exceeds data length")
    return [changepoint_fit(x[:u], model, mcmc, seed) for u in prefixes]


def stream_trace(fits, prefixes):
    """Per-prefix rows for plotting: interval endpoints, mean ``tau2`` and mode of ``K``."""
    rows = []
    for u, fit in zip(prefixes, fits):
        tau = fit.summary("tau2")
        k = fit.summary("K")
        rows.append({
            "prefix": int(u), "tau2_q025": tau["q025"], "tau2_q975": tau["q975"],
            "tau2_mean": tau["mean"], "K_mode": k["mode"], "K_q025": k["q025"],
            "K_q975": k["q975"],
        })
    return rows


# ---------------------------------------------------------------- mixtures

@dataclass(frozen=True)
class MixtureModel:
    """``K`` location components on ``Z_m``.

    ``families`` is one tag or one tag per component; indices in
    ``uniform_components`` are fixed at the uniform law.
    """

    m: int
    K: int
    families: object = "cdwc"
    uniform_components: tuple = ()

    def family_list(self):
        if isinstance(self.families, str):
            return [self.families] * self.K
        fams = list(self.families)
        if len(fams) != self.K:
            raise DomainError("need one family per component")
        return fams


def _initial_centres(counts, K, m):
    """Spread initial centres over the data mass, starting after its largest gap."""
    occupied = np.flatnonzero(counts)
    gaps = np.diff(np.concatenate([occupied, [occupied[0] + m]]))
    start = occupied[(np.argmax(gaps) + 1) % occupied.size]
    order = (np.arange(m) + start) % m
    cdf = np.cumsum(counts[order]) / counts.sum()
    q = (np.arange(K) + 0.5) / K
    return [int(order[min(np.searchsorted(cdf, v), m - 1)]) for v in q]


def mixture_fit(data, model: MixtureModel, mcmc: MCMCConfig = MCMCConfig(), seed=None,
                counts=None):
    """Posterior draws for a ``K``-component mixture under flat priors.

    Pass raw ``data`` or a frequency vector through ``counts``.  Allocations
    are drawn per lattice value as multinomial splits of ``n_r``; weights
    from ``Dirichlet(1 + N_j)``; each ``tau_j`` by reflected random walk and
    each ``t_j`` by uniform-proposal Metropolis.  Labels are made identifiable
    afterwards by circular ordering of the centres.
    """
    mcmc.validate()
    m = check_m(model.m)
    if model.K < 1:
        raise DomainError("need at least one component")
    if model.K > m:
        raise DomainError("more components than lattice points is unidentifiable")
    c = counts_from_data(data, m) if counts is None else np.asarray(counts, dtype=np.int64)
    if c.sum() < 10 * model.K:
        raise DomainError("mixture fitting needs n >= 10 K")
    seed = mcmc.seed if seed is None else seed
    ss = np.random.SeedSequence(seed)
    results = [
        _mixture_chain(c, m, model, mcmc, np.random.default_rng(child))
        for child in (ss.spawn(mcmc.chains) if mcmc.chains > 1 else [ss])
    ]
    out = _pool(results)
    _check_acceptance(out.acceptance)
    return out


def _mixture_chain(counts, m, model, mcmc, rng):
    K = model.K
    fams = [_Family(f, m, mcmc.kappa_max) for f in model.family_list()]
    free = [j for j in range(K) if j not in model.uniform_components]
    w = np.full(K, 1.0 / K)
    tau = np.array([0.0 if j not in free else min(0.3, fams[j].upper / 2) for j in range(K)])
    t = np.zeros(K, dtype=int)
    init = _initial_centres(counts, len(free), m) if free else []
    for j, c0 in zip(free, init):
        t[j] = c0
    uniform_lp = np.full(m, -np.log(m))
    logp0 = [fams[j].logp0(tau[j]) if j in free else uniform_lp for j in range(K)]
    r = np.arange(m)
    upd = {j: _TauUpdater(mcmc.scale_tau or fams[j].default_scale, fams[j].upper, mcmc.adapt)
           for j in free}
    acc = {f"tau{j + 1}": 0 for j in free} | {f"t{j + 1}": 0 for j in free}
    tries = dict.fromkeys(acc, 0)
    keep_w, keep_tau, keep_t = [], [], []

    for it in range(mcmc.iterations):
        burning = it < mcmc.burnin
        logf = np.array([logp0[j][(r - t[j]) % m] for j in range(K)])  # [j, r]
        with np.errstate(divide="ignore"):
            lw = np.log(w)[:, None] + logf
        prob = np.exp(lw - lw.max(axis=0))
        prob /= prob.sum(axis=0)
        alloc = rng.multinomial(counts, prob.T)  # [r, j]
        comp = alloc.T.astype(float)  # [j, r]
        w = rng.dirichlet(1.0 + comp.sum(axis=1))
        for j in free:
            fam, cj = fams[j], comp[j]
            prop = upd[j].propose(rng, tau[j])
            lp_prop = fam.logp0(prop)
            d = fam.loglik_t(lp_prop, cj, t[j]) - fam.loglik_t(logp0[j], cj, t[j])
            ok = np.log(rng.random()) < d
            if ok:
                tau[j], logp0[j] = prop, lp_prop
                acc[f"tau{j + 1}"] += not burning
            upd[j].record(ok, burning)
            tries[f"tau{j + 1}"] += not burning
            prop_t = int(rng.integers(m))
            if prop_t != t[j]:
                d = fam.loglik_t(logp0[j], cj, prop_t) - fam.loglik_t(logp0[j], cj, t[j])
                if np.log(rng.random()) < d:
                    t[j] = prop_t
                    acc[f"t{j + 1}"] += not burning
            tries[f"t{j + 1}"] += not burning
        if not burning and (it - mcmc.burnin) % mcmc.thin == 0:
            keep_w.append(w.copy())
            keep_tau.append(tau.copy())
            keep_t.append(t.copy())

    W, TAU, T = relabel(np.array(keep_w), np.array(keep_tau), np.array(keep_t), m, free)
    draws = {}
    for j in range(K):
        draws[f"w{j + 1}"] = W[:, j]
        if j in free:
            draws[f"tau{j + 1}"] = TAU[:, j]
            draws[f"t{j + 1}"] = T[:, j].astype(int)
    rates = {k: acc[k] / tries[k] for k in acc if tries[k] > 0}
    circ = {f"t{j + 1}": m for j in free}
    return PosteriorDraws(draws, rates, circ, tuple(circ), int(counts.sum()))


def relabel(W, TAU, T, m, free=None):
    """Resolve label switching by circular ordering of the free components' centres.

    Each draw's free components are first sorted by centre; the circle is
    then cut in the widest gap between the resulting positions' circular
    means, and every draw is re-sorted by centre measured from that cut.
    """
    D, K = T.shape
    free = list(range(K)) if free is None else list(free)
    if len(free) < 2:
        return W, TAU, T
    W, TAU, T = W.copy(), TAU.copy(), T.copy()
    fr = np.array(free)

    def apply(order):
        rows = np.arange(D)[:, None]
        cols = fr[order]
        for arr in (W, TAU, T):
            arr[:, fr] = arr[rows, cols]

    apply(np.argsort(T[:, fr], axis=1, kind="stable"))
    ang = TWO_PI * T[:, fr] / m
    means = np.sort(np.mod(np.angle(np.exp(1j * ang).mean(axis=0)), TWO_PI))
    gaps = np.diff(np.concatenate([means, [means[0] + TWO_PI]]))
    i = int(np.argmax(gaps))
    cut = np.mod(means[i] + gaps[i] / 2, TWO_PI)
    shifted = np.mod(TWO_PI * T[:, fr] / m - cut, TWO_PI)
    apply(np.argsort(shifted, axis=1, kind="stable"))
    return W, TAU, T
