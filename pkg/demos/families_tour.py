"""Compare conditionalized and marginalized lattice families on a coarse lattice.

Prints the pmfs of matched CDVM, CDWC and CDWN laws and shows how a coarse
lattice splits the marginalized wrapped Cauchy mode across two bins.
"""

import numpy as np

from discirc.distributions import pmf_cdvm, pmf_cdwc, pmf_cdwn, pmf_mdwc
from discirc.divergence import divergences, map_concentration
from discirc.moments import trig_moments

M = 10
TWO_PI = 2 * np.pi


def main():
    rho = 0.6
    kappa = map_concentration("cdwc", "cdvm", rho, M)
    rho_wn = map_concentration("cdwc", "cdwn", rho, M)
    print(f"first-moment match on m={M}: CDWC rho={rho} <-> CDVM kappa={kappa:.4f}, "
          f"CDWN rho={rho_wn:.4f}")

    table = {"CDVM": pmf_cdvm(M, kappa, 2), "CDWC": pmf_cdwc(M, rho, 2),
             "CDWN": pmf_cdwn(M, rho_wn, 2), "MDWC": pmf_mdwc(M, rho, TWO_PI * 2 / M)}
    print("r    " + "  ".join(f"{k:>7}" for k in table))
    for r in range(M):
        print(f"{r:<4} " + "  ".join(f"{p[r]:7.4f}" for p in table.values()))

    # the marginalized law puts equal mass either side of the lattice point
    md = table["MDWC"]
    print(f"MDWC twin modes at r=1,2: {md[1]:.6f} {md[2]:.6f}")

    for name, p in table.items():
        tm = trig_moments(p, 1)
        print(f"{name}: mean resultant length {abs(tm.psi):.4f}")

    d = divergences(table["CDVM"], table["CDWC"])
    print(f"CDVM vs CDWC at matched moments: KL={d.kl:.4f} L1={d.l1:.4f} L2={d.l2:.4f}")


if __name__ == "__main__":
    main()
