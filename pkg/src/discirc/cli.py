"""Command-line front end: ``discirc <command> [options]``.

Reports are JSON on stdout (or ``--out``).  Exit codes: 0 ok, 2 usage,
3 data or domain error, 4 numeric failure.  Errors are reported as JSON on
stderr.
"""

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, is_dataclass

import numpy as np

from . import __version__
from ._numerics import TWO_PI, check_m
from .errors import DomainError, NumericError

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4

# Parent names accepted together with --method
_PARENTS = {"vm", "wc", "cardioid", "kj", "wn", "stable"}
_MD_PARENTS = {"vm", "wc", "cardioid", "kj"}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# ---------------------------------------------------------------- ingestion

@dataclass
class Dataset:
    """Ordered lattice observations; ``ordered`` is False for frequency input."""

    m: int
    observations: np.ndarray
    ordered: bool = True

    @property
    def n(self):
        return int(self.observations.size)

    def counts(self):
        return np.bincount(self.observations, minlength=self.m)


def _parse_int(text, path, lineno):
    try:
        return int(text.strip())
    except ValueError:
        raise DataError(f"{path}:{lineno}: cannot parse {text.strip()!r} as an integer") from None


def ingest(path, fmt, m):
    """Read a ``sequence-csv`` (one value per line) or ``frequency-csv`` (``r,count``) file.

    Blank lines and ``#`` comments are skipped; a non-numeric first row of a
    frequency file is treated as a header.
    """
    m = check_m(m)
    if fmt not in ("sequence-csv", "frequency-csv"):
        raise UsageError(f"unknown format {fmt!r}")
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from None
    values, counts = [], np.zeros(m, dtype=np.int64)
    with fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if fmt == "sequence-csv":
                v = _parse_int(row[0], path, lineno)
                if not 0 <= v < m:
                    raise DataError(f"{path}:{lineno}: value {v} outside 0..{m - 1}")
                values.append(v)
            else:
                if len(row) < 2:
                    raise DataError(f"{path}:{lineno}: expected 'r,count'")
                if lineno == 1 and not row[0].strip().lstrip("-").isdigit():
                    continue
                r = _parse_int(row[0], path, lineno)
                c = _parse_int(row[1], path, lineno)
                if not 0 <= r < m:
                    raise DataError(f"{path}:{lineno}: value {r} outside 0..{m - 1}")
                if c < 0:
                    raise DataError(f"{path}:{lineno}: negative count {c}")
                counts[r] += c
    if fmt == "frequency-csv":
        obs = np.repeat(np.arange(m), counts)
        ordered = False
    else:
        obs = np.asarray(values, dtype=np.int64)
        ordered = True
    if obs.size == 0:
        raise DataError(f"{path}: no observations")
    return Dataset(m, obs, ordered)


# ---------------------------------------------------------------- helpers

def _jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def _root_seed(seed):
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**63))
    return int(seed)


def _child_seeds(seed, k):
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(k)]


def _resolve_family(family, method):
    fam = family.lower().replace("_", "").replace("-", "")
    if fam in _PARENTS:
        if method is None or method == "conditionalized":
            return "cd" + fam
        if fam not in _MD_PARENTS:
            raise UsageError(f"no marginalized form for parent {family!r}")
        return "md" + fam
    if method is not None:
        prefix = {"conditionalized": "cd", "marginalized": "md"}[method]
        if not fam.startswith(prefix):
            raise UsageError(f"family {family!r} conflicts with --method {method}")
    return fam


def _parse_shape(items):
    shape = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--shape expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            shape[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"--shape {k}: {v!r} is not a number") from None
    return shape


def _int_list(text, name):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{name} expects comma-separated integers") from None


def _spec(args):
    from .distributions import FamilySpec, family_info

    tag = _resolve_family(args.family, args.method)
    info = family_info(tag)
    if isinstance(info, str):
        raise UsageError("max-entropy laws are built through the library, not the CLI")
    shape = _parse_shape(args.shape)
    mu = shape.pop("mu", None)
    return FamilySpec(tag, args.m, args.concentration, args.t, mu, shape)


def _load(args, ordered=False):
    if args.data is None:
        raise UsageError("--data is required")
    if ordered and args.format == "frequency-csv":
        raise UsageError(f"{args.command} is order-sensitive and rejects frequency input")
    return ingest(args.data, args.format, args.m)


def _mcmc(args):
    from .bayes import MCMCConfig

    cfg = MCMCConfig.from_file(args.mcmc_config) if args.mcmc_config else MCMCConfig()
    over = {k: getattr(args, k) for k in ("iterations", "burnin", "thin", "chains")
            if getattr(args, k) is not None}
    if over:
        cfg = MCMCConfig(**{**asdict(cfg), **over})
    return cfg.validate()


def _write_rows(path, rows):
    if not rows:
        return
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        for row in rows:
            w.writerow({k: _jsonable(v) for k, v in row.items()})


def _posterior_report(fit, include_draws):
    out = {"n": fit.n_obs, "draws_kept": len(fit), "acceptance": fit.acceptance,
           "summaries": fit.summaries()}
    for name, s in out["summaries"].items():
        if "circ_mean" in s:
            s["mode_radians"] = TWO_PI * s["mode"] / fit.circular[name]
    if include_draws:
        out["draws"] = fit.draws
    return out


# ---------------------------------------------------------------- commands

def cmd_pmf(args, seed):
    spec = _spec(args)
    probs = spec.pmf()
    r = np.arange(args.m)
    if args.csv:
        _write_rows(args.csv, [{"r": int(i), "angle": TWO_PI * i / args.m, "prob": float(p)}
                               for i, p in zip(r, probs)])
    return {"family": spec.tag, "probs": probs, "angles": TWO_PI * r / args.m}


def cmd_sample(args, seed):
    from .sampling import sample_pmf

    x = sample_pmf(_spec(args).pmf(), args.n, seed)
    if args.data_out:
        with open(args.data_out, "w") as fh:
            fh.write("\n".join(str(int(v)) for v in x) + "\n")
    return {"family": _resolve_family(args.family, args.method), "n": args.n,
            "data_out": args.data_out, "counts": np.bincount(x, minlength=args.m),
            "observations": None if args.data_out else x}


def cmd_fit(args, seed):
    from .inference import bootstrap, mle, summarize_counts

    ds = _load(args)
    tag = _resolve_family(args.family, args.method)
    shape = _parse_shape(args.shape)
    kw = {"shape": shape} if shape else {}
    s = summarize_counts(ds.counts())
    res = mle(s, tag, **kw)
    out = {"family": res.family, "n": s.n, "tau_hat": res.tau_hat, "t_hat": res.t_hat,
           "theta_hat": res.theta_hat, "loglik": res.loglik, "saturated": res.saturated,
           "rbar": s.R, "theta_bar": s.theta}
    if args.bootstrap > 0:
        se, rbar = bootstrap(lambda ss: mle(ss, tag, **kw), res.spec(), s.n,
                             B=args.bootstrap, seed=seed)
        out.update(se_tau=se, rbar_t=rbar, bootstrap_replicates=args.bootstrap)
    return out


def cmd_test_uniformity(args, seed):
    from . import inference as inf

    ds = _load(args)
    s = inf.summarize_counts(ds.counts())
    names = ["T", "UG2", "T1", "T2"] if args.test == "all" else [args.test]
    seeds = dict(zip(names, _child_seeds(seed, len(names))))
    reports = {}
    for name in names:
        if name == "T":
            tag = _resolve_family(args.family, args.method)
            rep = inf.test_uniformity_T(s, family=tag, replicates=args.replicates,
                                        seed=seeds[name])
        else:
            fn = {"UG2": inf.test_UG2, "T1": inf.test_T1, "T2": inf.test_T2}[name]
            rep = fn(s, replicates=args.replicates, seed=seeds[name])
        reports[name] = rep
    return {"n": s.n, "tests": reports}


def cmd_test_serial(args, seed):
    from .inference import test_serial

    ds = _load(args, ordered=True)
    return {"n": ds.n, "test": test_serial(ds.observations, ds.m, args.replicates, seed)}


def cmd_changepoint(args, seed):
    from .bayes import ChangepointModel, changepoint_fit, changepoint_stream, stream_trace

    ds = _load(args, ordered=True)
    tag = _resolve_family(args.family, args.method)
    model = ChangepointModel(ds.m, tag, first_uniform=not args.free_first)
    cfg = _mcmc(args)
    if args.stream:
        prefixes = _int_list(args.stream, "--stream")
        fits = changepoint_stream(ds.observations, prefixes, model, cfg, seed)
        rows = stream_trace(fits, prefixes)
        if args.csv:
            _write_rows(args.csv, rows)
        return {"family": tag, "mcmc": cfg, "stream": rows}
    fit = changepoint_fit(ds.observations, model, cfg, seed)
    return {"family": tag, "mcmc": cfg, "posterior": _posterior_report(fit, args.draws)}


def cmd_mixture(args, seed):
    from .bayes import MixtureModel, mixture_fit

    ds = _load(args)
    tag = _resolve_family(args.family, args.method)
    uni = tuple(_int_list(args.uniform_components, "--uniform-components")) \
        if args.uniform_components else ()
    model = MixtureModel(ds.m, args.K, tag, uni)
    cfg = _mcmc(args)
    fit = mixture_fit(None, model, cfg, seed, counts=ds.counts())
    return {"family": tag, "K": args.K, "mcmc": cfg,
            "posterior": _posterior_report(fit, args.draws)}


def cmd_divergence_scan(args, seed):
    from .divergence import default_grid, max_divergence_scan

    base = _resolve_family(args.base, None)
    other = _resolve_family(args.other, None)
    res = max_divergence_scan(base, other, args.m, default_grid(args.step, args.cap))
    if args.csv:
        res.to_csv(args.csv)
    table = {k: {"max": v[0], "argmax_rho_w": v[1], "at_cap": v[2]}
             for k, v in res.table().items()}
    return {"base": base, "other": other, "grid_points": int(res.grid.size), "maxima": table}


def cmd_sheppard(args, seed):
    from .divergence import sheppard_report

    rows = sheppard_report(args.rho, _int_list(args.m_list, "--m-list"))
    if args.csv:
        _write_rows(args.csv, rows)
    return {"rho": args.rho, "rows": rows}


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_family(p, default="cdwc"):
    p.add_argument("--family", default=default,
                   help="family tag (cdvm, cdwc, mdvm, mdwc, cdkj, cdstable, ...) or parent "
                        "(vm, wc, cardioid, kj, wn, stable) combined with --method")
    p.add_argument("--method", choices=["marginalized", "conditionalized"])


def _add_params(p):
    p.add_argument("--concentration", type=float, default=0.0,
                   help="kappa, rho, lambda or p depending on the family")
    p.add_argument("--t", type=int, default=0, help="lattice centre")
    p.add_argument("--shape", action="append", metavar="KEY=VALUE",
                   help="extra parameter: mu, a, b, gamma, lam, q")


def _add_data(p):
    p.add_argument("--data", help="input file")
    p.add_argument("--format", choices=["sequence-csv", "frequency-csv"],
                   default="sequence-csv")


def _add_mcmc(p):
    p.add_argument("--mcmc-config", help="key=value MCMC configuration file")
    for name in ("iterations", "burnin", "thin", "chains"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--draws", action="store_true", help="include thinned draws in the report")


def build_parser():
    parser = _Parser(prog="discirc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"discirc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_, needs_m=True):
        p = sub.add_parser(name, help=help_)
        if needs_m:
            p.add_argument("--m", type=int, required=True, help="lattice size")
        p.add_argument("--seed", type=int, help="root seed for all randomness")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.set_defaults(func=fn)
        return p

    p = command("pmf", cmd_pmf, "evaluate a pmf")
    _add_family(p)
    _add_params(p)
    p.add_argument("--csv", help="write r, angle, prob plot data")

    p = command("sample", cmd_sample, "draw a sample")
    _add_family(p)
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--data-out", help="write the sample as sequence-csv")

    p = command("fit", cmd_fit, "maximum likelihood fit with bootstrap standard errors")
    _add_family(p)
    _add_data(p)
    p.add_argument("--shape", action="append", metavar="KEY=VALUE")
    p.add_argument("--bootstrap", type=int, default=500, help="replicates; 0 disables")

    p = command("test-uniformity", cmd_test_uniformity, "tests of uniformity")
    _add_family(p)
    _add_data(p)
    p.add_argument("--test", choices=["T", "UG2", "T1", "T2", "all"], default="T")
    p.add_argument("--replicates", type=int, default=999)

    p = command("test-serial", cmd_test_serial, "serial independence test")
    _add_data(p)
    p.add_argument("--replicates", type=int, default=100_000)

    p = command("changepoint", cmd_changepoint, "single changepoint posterior")
    _add_family(p)
    _add_data(p)
    _add_mcmc(p)
    p.add_argument("--free-first", action="store_true",
                   help="give the first segment its own parameters instead of uniform")
    p.add_argument("--stream", help="comma-separated increasing prefix lengths")
    p.add_argument("--csv", help="write the per-prefix trace (with --stream)")

    p = command("mixture", cmd_mixture, "finite mixture posterior")
    _add_family(p)
    _add_data(p)
    _add_mcmc(p)
    p.add_argument("--K", type=int, required=True, help="number of components")
    p.add_argument("--uniform-components", help="comma-separated indices fixed at uniform")

    p = command("divergence-scan", cmd_divergence_scan, "max-divergence scan over rho_w")
    p.add_argument("--base", default="cdvm")
    p.add_argument("--other", default="cdwc")
    p.add_argument("--step", type=float, default=0.001)
    p.add_argument("--cap", type=float, default=0.995)
    p.add_argument("--csv", help="write per-grid-point divergences")

    p = command("sheppard", cmd_sheppard, "binned moments and Sheppard multipliers",
                needs_m=False)
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--m-list", default="3,5,10,15,20,30,50,100,500")
    p.add_argument("--csv", help="write the table as CSV")
    return parser


def _emit(payload, path):
    text = json.dumps(_jsonable(payload), indent=2, allow_nan=False)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _fail(kind, message, code):
    err = {"schema_version": SCHEMA_VERSION, "tool": "discirc", "version": __version__,
           "error": {"type": kind, "message": message, "exit_code": code}}
    print(json.dumps(err), file=sys.stderr)
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    seed = _root_seed(args.seed)
    config = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    config["seed"] = seed
    try:
        result = args.func(args, seed)
        _emit({"schema_version": SCHEMA_VERSION, "tool": "discirc", "version": __version__,
               "command": args.command, "seed": seed, "config": config, "result": result},
              args.out)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except (DataError, DomainError) as exc:
        return _fail("data", str(exc), EXIT_DATA)
    except (NumericError, ArithmeticError) as exc:
        return _fail("numeric", str(exc), EXIT_NUMERIC)
    except NotImplementedError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
