import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from discirc.distributions import family_info, pmf_cdvm, pmf_cdwc
from discirc.divergence import (
    default_grid,
    divergences,
    first_moment,
    map_concentration,
    max_divergence_scan,
    moment_to_concentration,
    sheppard_multiplier,
    sheppard_report,
)
from discirc.errors import DomainError
from discirc.moments import B, B_inverse

TWO_PI = 2 * np.pi


def matched_pair(base, other, rho_w, m):
    p1 = family_info(base).pmf0(m, moment_to_concentration(base, rho_w, m))
    p2 = family_info(other).pmf0(m, moment_to_concentration(other, rho_w, m))
    return p1, p2


def test_identical_pmfs():
    p = pmf_cdwc(10, 0.4, 3)
    d = divergences(p, p)
    assert (d.kl, d.l1, d.l2) == (0.0, 0.0, 0.0)


def test_l2_scaling():
    p, q = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    d = divergences(q, np.array([0.5, 0.5]))
    assert d.l1 == pytest.approx(1.0)
    assert d.l2 == pytest.approx(np.sqrt(2 / TWO_PI * 0.5))
    with pytest.raises(DomainError):
        divergences(p, q)
    with pytest.raises(DomainError):
        divergences(p, np.full(3, 1 / 3))


@given(st.integers(2, 30), st.integers(0, 2**32 - 1))
def test_random_pairs(m, seed):
    rng = np.random.default_rng(seed)
    p, q = rng.dirichlet(np.ones(m)), rng.dirichlet(np.ones(m))
    a, b = divergences(p, q), divergences(q, p)
    assert a.kl >= 0 and 0 <= a.l1 <= 2
    assert a.l1 == pytest.approx(b.l1) and a.l2 == pytest.approx(b.l2)


def test_kl_asymmetric():
    p, q = pmf_cdwc(10, 0.95), np.full(10, 0.1)
    assert abs(divergences(p, q).kl - divergences(q, p).kl) > 0.05


# ---------------------------------------------------------------- mapping

def test_map_zero_and_round_trip():
    assert map_concentration("cdvm", "cdwc", 0.0, 10) == 0.0
    assert map_concentration("cdwc", "cdvm", 0.0, 10) == 0.0
    for kappa in (0.1, 1.0, 4.0, 20.0):
        rho = map_concentration("cdvm", "cdwc", kappa, 10)
        assert map_concentration("cdwc", "cdvm", rho, 10) == pytest.approx(kappa, abs=1e-8)


def test_map_rho_half_m10():
    assert first_moment("cdwc", 0.5, 10) == pytest.approx(0.50146, abs=5e-6)
    kappa = map_concentration("cdwc", "cdvm", 0.5, 10)
    p = pmf_cdvm(10, kappa)
    assert p @ np.cos(TWO_PI * np.arange(10) / 10) == pytest.approx(first_moment("cdwc", 0.5, 10),
                                                                    abs=1e-10)
    assert kappa == pytest.approx(B_inverse(B(kappa, 10), 10), abs=1e-10)


def test_generic_route_for_cdwn():
    rho = moment_to_concentration("cdwn", 0.7, 10)
    assert first_moment("cdwn", rho, 10) == pytest.approx(0.7, abs=1e-10)
    with pytest.raises(DomainError):
        moment_to_concentration("cdcardioid", 0.9, 10)


# ---------------------------------------------------------------- paper tables

def test_table6_kl_m10():
    p_vm, p_wc = matched_pair("cdvm", "cdwc", 0.9, 10)
    assert divergences(p_vm, p_wc).kl == pytest.approx(0.313, abs=2e-3)


def test_table7_cdwn_kl_m10():
    p_vm, p_wn = matched_pair("cdvm", "cdwn", 0.7, 10)
    assert divergences(p_vm, p_wn).kl == pytest.approx(0.018, abs=1e-3)


def test_scan_m10_l1():
    res = max_divergence_scan("cdvm", "cdwc", 10)
    val, arg, at_cap = res.best("l1")
    assert val == pytest.approx(0.639, abs=2e-3)
    assert arg == pytest.approx(0.852, abs=3e-3) and not at_cap


def test_scan_cap_flag_and_grid():
    grid = default_grid(step=0.05, cap=0.3)
    res = max_divergence_scan("cdvm", "cdwc", 10, grid)
    assert res.best("kl")[2]  # divergence still rising at the last grid point
    with pytest.raises(DomainError):
        max_divergence_scan("cdvm", "cdwc", 10, [0.5, 0.999])


def test_scan_csv(tmp_path):
    res = max_divergence_scan("cdvm", "cdwc", 10, [0.1, 0.2, 0.3])
    path = tmp_path / "scan.csv"
    res.to_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["rho_w", "kl", "l1", "l2"] and len(rows) == 4
    assert float(rows[2][1]) == pytest.approx(res.kl[1], rel=1e-9)


@pytest.mark.parametrize("rho_w", [0.3, 0.7, 0.9, 0.99])
def test_continuous_limit(rho_w):
    a = divergences(*matched_pair("cdvm", "cdwc", rho_w, 1000))
    b = divergences(*matched_pair("cdvm", "cdwc", rho_w, 10000))
    assert_allclose([a.kl, a.l1, a.l2], [b.kl, b.l1, b.l2], rtol=0.01)


# ---------------------------------------------------------------- Sheppard

def test_sheppard_multiplier():
    assert sheppard_multiplier(0.0) == 1.0
    assert sheppard_multiplier(1e-4) == pytest.approx(1.0, abs=1e-9)
    assert sheppard_multiplier(np.pi) == pytest.approx(np.pi / 2)
    assert_allclose(sheppard_multiplier([0.0, 2.0]), [1.0, 1 / np.sin(1.0)])


def test_sheppard_report_values():
    rows = {r["m"]: r for r in sheppard_report(0.5, [5, 20, 500])}
    assert rows[5]["cdwc_cos1"] == pytest.approx(0.545, abs=1e-3)
    assert rows[5]["cdwc_cos2"] == pytest.approx(0.364, abs=1e-3)
    assert rows[20]["mdwc_cos1"] == pytest.approx(0.493, abs=2e-3)
    # bins start at the lattice point, so the binned moment carries a half-bin phase;
    # the correction is exact only for bin-wise flat densities
    for m in (20, 500):
        r, h = rows[m], TWO_PI / m
        assert r["mdwc_cos1"] * r["a1"] == pytest.approx(0.5 * np.cos(h / 2), abs=1e-6)
        assert r["mdwc_cos2"] * r["a2"] == pytest.approx(0.25 * np.cos(h), abs=1e-6)
