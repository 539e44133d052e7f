"""Watch the posterior of a switch from uniform to CDWC sharpen as data arrive.

Writes ``changepoint_trace.csv`` next to this script with one row per prefix.
"""

from pathlib import Path

import numpy as np

from discirc.bayes import ChangepointModel, MCMCConfig, changepoint_stream, stream_trace
from discirc.distributions import pmf_cdwc
from discirc.sampling import sample_pmf

SEED = 7
M = 37


def main():
    rng = np.random.default_rng(SEED)
    x = np.concatenate([rng.integers(0, M, 600), sample_pmf(pmf_cdwc(M, 0.4, 10), 600, rng)])
    prefixes = [400, 600, 700, 800, 1000, 1200]
    cfg = MCMCConfig(iterations=6000, burnin=2000, thin=4)
    fits = changepoint_stream(x, prefixes, ChangepointModel(M), cfg, seed=SEED)
    rows = stream_trace(fits, prefixes)
    for row, fit in zip(rows, fits):
        lo, hi = fit.hpd_interval("tau2")
        print(f"prefix {row['prefix']:5d}: K mode {row['K_mode']:5d}  "
              f"rho2 mean {row['tau2_mean']:.3f}  HPD [{lo:.3f}, {hi:.3f}]")
    out = Path(__file__).with_name("changepoint_trace.csv")
    with open(out, "w") as fh:
        fh.write(",".join(rows[0]) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row.values()) + "\n")
    print(f"trace written to {out}")


if __name__ == "__main__":
    main()
