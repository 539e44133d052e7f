import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal
from scipy.integrate import quad

from discirc.continuous import (
    cardioid_pdf,
    katojones_pdf,
    vonmises_pdf,
    wrapcauchy_pdf,
    wrapped_exponential_pdf,
)
from discirc.distributions import (
    FamilySpec,
    Geometric,
    Poisson,
    SkewLaplace,
    cdkj_normalizer,
    cdwc_normalizer,
    check_katojones,
    conditionalize,
    fit_max_entropy,
    marginalize,
    md_cardioid_as_cd,
    mixture_pmf,
    pmf_cd_cardioid,
    pmf_cd_stable,
    pmf_cdkj,
    pmf_cdvm,
    pmf_cdwc,
    pmf_cdwc_mu,
    pmf_cdwn,
    pmf_centered_wrapped,
    pmf_md_cardioid,
    pmf_mdkj,
    pmf_mdvm,
    pmf_mdwc,
)
from discirc.distributions.conditionalized import katojones_kernel
from discirc.errors import DomainError, NoSolutionError
from discirc.moments import B

TWO_PI = 2 * np.pi
mp.mp.dps = 40


def lattice(m):
    return TWO_PI * np.arange(m) / m


def per_bin_quad(pdf, m):
    edges = TWO_PI * np.arange(m + 1) / m
    return np.array([quad(pdf, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
                     for a, b in zip(edges[:-1], edges[1:])])


# ---------------------------------------------------------------- frozen values

class TestFrozenValues:
    def test_cdvm_m4(self):
        # exact values of exp(cos(pi r/2)) / sum; 0.53444 and 0.07234 differ by rounding only
        p = pmf_cdvm(4, 1.0, 0)
        e = np.exp([1.0, 0.0, -1.0, 0.0])
        assert_allclose(p, e / e.sum(), rtol=1e-14)
        assert_allclose(p, [0.53444, 0.19661, 0.07234, 0.19661], atol=2e-5)

    def test_cdwc_m4(self):
        assert_allclose(pmf_cdwc(4, 0.5, 0), [0.66176, 0.13235, 0.07353, 0.13235], atol=5e-6)

    def test_cdwc_moment_m10(self):
        p = pmf_cdwc(10, 0.5, 0)
        assert round(float(p @ np.cos(lattice(10))), 3) == 0.501

    def test_mdwc_moment_m10(self):
        assert abs(pmf_mdwc(10, 0.5) @ np.cos(lattice(10)) - 0.466) < 2e-3

    def test_geometric_m4(self):
        assert_allclose(pmf_centered_wrapped(Geometric(0.5), 4, 0), 8 / 15 * 0.5 ** np.arange(4),
                        rtol=1e-14)

    def test_poisson_zero_is_point_mass(self):
        p = pmf_centered_wrapped(Poisson(0.0), 12, 4)
        assert_array_equal(p, np.eye(12)[4])

    def test_poisson_direct_sum(self):
        k = np.arange(200)
        w = np.array([float(mp.exp(-3) * mp.mpf(3) ** int(j) / mp.factorial(int(j))) for j in k])
        direct = np.bincount(k % 5, weights=w, minlength=5)
        assert_allclose(pmf_centered_wrapped(Poisson(3.0), 5, 2), np.roll(direct, 2), atol=1e-15)

    def test_skew_laplace_direct_sum(self):
        p, q, m = 0.6, 0.3, 7
        c = (1 - p) * (1 - q) / (1 - p * q)
        k = np.arange(-400, 401)
        mass = np.where(k >= 0, c * p ** np.abs(k), c * q ** np.abs(k))
        assert_allclose(mass.sum(), 1.0, atol=1e-14)
        direct = np.bincount(k % m, weights=mass, minlength=m)
        assert_allclose(SkewLaplace(p, q).wrapped(m), direct, atol=1e-14)


# ---------------------------------------------------------------- uniform limits

@pytest.mark.parametrize("pmf", [
    lambda: pmf_cdvm(10, 0.0, 3),
    lambda: pmf_cdwc(37, 0.0, 0),
    lambda: pmf_mdvm(10, 0.0, 1.3),
    lambda: pmf_mdwc(10, 0.0),
    lambda: pmf_md_cardioid(8, 0.0, 0),
    lambda: pmf_cd_stable(10, 0.0, 4, a=0.7),
    lambda: pmf_cdwn(10, 0.0),
])
def test_zero_concentration_is_uniform(pmf):
    p = pmf()
    assert_allclose(p, 1.0 / p.size, atol=1e-15)


# ---------------------------------------------------------------- normalizers

def test_cdwc_normalizer_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(100):
        m = int(rng.integers(2, 200))
        rho = float(rng.uniform(0, 0.99))
        brute = np.sum(1.0 / (1 + rho**2 - 2 * rho * np.cos(lattice(m))))
        assert_allclose(1.0 / cdwc_normalizer(m, rho), brute, rtol=1e-10)


def test_cdkj_normalizer_matches_brute_force():
    rng = np.random.default_rng(1)
    done = 0
    while done < 100:
        m = int(rng.integers(2, 120))
        rho = float(rng.uniform(0, 0.98))
        gamma = float(rng.uniform(0, (1 + rho) / 2))
        lam = float(rng.uniform(-np.pi, np.pi))
        mu = float(rng.uniform(0, TWO_PI))
        try:
            check_katojones(rho, gamma, lam)
        except DomainError:
            continue
        brute = np.sum(katojones_kernel(lattice(m), rho, mu, gamma, lam))
        assert_allclose(cdkj_normalizer(m, rho, mu, gamma, lam), brute, rtol=1e-10, atol=1e-10)
        done += 1


def test_cdwn_matches_direct_wrapped_normal_sum():
    # direct image sum of the Gaussian kernel with sigma^2 = -2 log rho
    rng = np.random.default_rng(2)
    for _ in range(100):
        m = int(rng.integers(2, 80))
        rho = float(rng.uniform(0.01, 0.98))
        s2 = -2 * np.log(rho)
        k = np.arange(-60, 61)
        kern = np.exp(-((lattice(m)[:, None] + TWO_PI * k) ** 2) / (2 * s2)).sum(axis=1)
        assert_allclose(pmf_cdwn(m, rho), kern / kern.sum(), rtol=1e-10, atol=1e-13)


def test_cdwn_routes_agree():
    for m in (5, 10, 37):
        for rho in (0.05, 0.3, 0.6, 0.9):
            assert_allclose(pmf_cdwn(m, rho, method="series"), pmf_cdwn(m, rho, method="theta"),
                            atol=1e-13)


# ---------------------------------------------------------------- symmetry and modes

CD_LOCATION = [
    lambda m, t, x: pmf_cdvm(m, 20 * x, t),
    lambda m, t, x: pmf_cdwc(m, 0.99 * x, t),
    lambda m, t, x: pmf_cd_cardioid(m, 0.49 * x, t),
    lambda m, t, x: pmf_cdwn(m, 0.95 * x, t),
    lambda m, t, x: pmf_cd_stable(m, 0.9 * x, t, a=0.4 + 1.6 * x),
]


@given(st.integers(2, 60), st.integers(0, 10_000), st.floats(0.01, 1.0),
       st.sampled_from(range(len(CD_LOCATION))))
def test_conditionalized_symmetry_and_mode(m, t, x, which):
    t %= m
    p = CD_LOCATION[which](m, t, x)
    k = np.arange(m)
    assert_array_equal(p[(t + k) % m], p[(t - k) % m])
    assert int(np.argmax(p)) == t
    assert abs(p.sum() - 1) < 1e-12 and np.all(p >= 0)


@given(st.integers(3, 40), st.integers(0, 1000), st.floats(0.05, 0.95))
def test_marginalized_wc_bimodal_symmetric(m, t, rho):
    t %= m
    p = pmf_mdwc(m, rho, TWO_PI * t / m)
    top = p.max()
    assert_allclose([p[t], p[(t - 1) % m]], [top, top], rtol=1e-12)
    j = np.arange(m)
    assert_allclose(p[(t + j) % m], p[(t - 1 - j) % m], rtol=1e-11)
    assert abs(p.sum() - 1) < 1e-12


def test_mdvm_two_modes_and_symmetry():
    p = pmf_mdvm(10, 2.5, TWO_PI * 5 / 10)
    assert_allclose(p[4], p[5], rtol=1e-12)
    assert p[4] == pytest.approx(p.max(), rel=1e-12)
    q = pmf_mdvm(10, 1.0, np.pi)
    r = np.arange(10)
    assert_allclose(q[(10 - r - 5) % 10], q[(r - 1 - 5) % 10], rtol=1e-11)


# ---------------------------------------------------------------- quadrature oracles

def test_mdwc_matches_quadrature():
    mu = TWO_PI * 16 / 37
    oracle = per_bin_quad(lambda th: wrapcauchy_pdf(th, 0.25, mu), 37)
    assert_allclose(pmf_mdwc(37, 0.25, mu), oracle, atol=1e-10)


def test_mdvm_matches_quadrature():
    oracle = per_bin_quad(lambda th: vonmises_pdf(th, 3.0, 0.7), 12)
    assert_allclose(pmf_mdvm(12, 3.0, 0.7), oracle, atol=1e-10)


def test_md_cardioid_matches_quadrature_and_cd_family():
    t = 2
    oracle = per_bin_quad(lambda th: cardioid_pdf(th, 0.4, TWO_PI * t / 8), 8)
    p = pmf_md_cardioid(8, 0.4, t)
    assert_allclose(p, oracle, atol=1e-12)
    rho_c, mu_c = md_cardioid_as_cd(8, 0.4, t)
    assert_allclose(pmf_cd_cardioid(8, rho_c, mu=mu_c), p, atol=1e-14)


def test_mdkj_matches_quadrature():
    for args in [(0.5, 0.0, 0.5, 0.0), (0.6, 1.0, 0.3, 0.8), (0.0005, 0.2, 0.3, 0.5),
                 (0.0, 0.4, 0.25, 0.0)]:
        rho, mu, gamma, lam = args
        oracle = per_bin_quad(lambda th: katojones_pdf(th, rho, mu, gamma, lam), 12)
        assert_allclose(pmf_mdkj(12, rho, mu, gamma, lam), oracle, atol=1e-10)


# ---------------------------------------------------------------- reductions

def test_stable_reductions():
    rng = np.random.default_rng(3)
    for _ in range(50):
        m = int(rng.integers(2, 60))
        rho = float(rng.uniform(0, 0.95))
        t = int(rng.integers(0, m))
        assert_allclose(pmf_cd_stable(m, rho, t, a=1.0), pmf_cdwc(m, rho, t), atol=1e-10)
        assert_allclose(pmf_cd_stable(m, rho, t, a=2.0), pmf_cdwn(m, rho, t), atol=1e-10)


def test_kato_jones_reductions():
    assert_allclose(pmf_cdkj(40, 0.8, TWO_PI * 18 / 40, 0.8, 0.0), pmf_cdwc(40, 0.8, 18),
                    atol=1e-12)
    assert_allclose(pmf_mdkj(12, 0.5, 0.3, 0.5, 0.0), pmf_mdwc(12, 0.5, 0.3), atol=1e-12)


def test_kato_jones_skewed_is_positive_and_asymmetric():
    p = pmf_cdkj(40, 0.8, TWO_PI * 18 / 40, 0.4, TWO_PI / 40)
    assert np.all(p > 0) and abs(p.sum() - 1) < 1e-12
    k = np.arange(1, 20)
    assert np.max(np.abs(p[(18 + k) % 40] - p[(18 - k) % 40])) > 1e-4


def test_kato_jones_constraint_names_inequality():
    with pytest.raises(DomainError, match=r"gamma <= \(1\+rho\)/2"):
        check_katojones(0.2, 0.9, 0.0)
    with pytest.raises(DomainError, match="cos"):
        check_katojones(0.1, 0.5, np.pi)


def test_cdwc_mu_on_lattice_matches_t():
    assert_allclose(pmf_cdwc_mu(10, 0.6, TWO_PI * 3 / 10), pmf_cdwc(10, 0.6, 3), atol=1e-14)


# ---------------------------------------------------------------- structural identities

def test_wrapped_exponential_invariance():
    for m in (3, 8, 20):
        for lam in (0.1, 0.7, 2.5):
            pdf = lambda th: wrapped_exponential_pdf(th, lam)  # noqa: E731
            md = marginalize(pdf, m)
            cd = conditionalize(pdf, m)
            geo = Geometric(np.exp(-TWO_PI * lam / m)).wrapped(m)
            assert_allclose(md, cd, atol=1e-13)
            assert_allclose(cd, geo, atol=1e-13)


def _cauchy_cdf(x, scale):
    return mp.mpf(1) / 2 + mp.atan(x / scale) / mp.pi


@pytest.mark.parametrize("m", [5, 12, 37])
def test_duality_wrapped_cauchy(m):
    """Wrapping then discretizing equals discretizing on the line then wrapping."""
    rho = mp.mpf("0.6")
    scale = -mp.log(rho)
    h = 2 * mp.pi / m
    # marginalized route on the line: bin the Cauchy at width h, reduce mod m
    md_line = [mp.nsum(lambda k: _cauchy_cdf((r + k * m + 1) * h, scale)
                       - _cauchy_cdf((r + k * m) * h, scale), [-mp.inf, mp.inf])
               for r in range(m)]
    assert_allclose(np.array(md_line, dtype=float), pmf_mdwc(m, 0.6), atol=1e-12)
    # conditionalized route on the line: plug-in at 2 pi j/m, then fold mod m
    dens = [mp.nsum(lambda k: 1 / (scale**2 + ((r + k * m) * h) ** 2), [-mp.inf, mp.inf])
            for r in range(m)]
    tot = mp.fsum(dens)
    assert_allclose(np.array([d / tot for d in dens], dtype=float), pmf_cdwc(m, 0.6),
                    atol=1e-12)


# ---------------------------------------------------------------- max entropy

def test_maxent_uniform():
    c = lambda r: np.cos(TWO_PI * r / 9)  # noqa: E731
    s = lambda r: np.sin(TWO_PI * r / 9)  # noqa: E731
    assert_allclose(fit_max_entropy(9, [c, s], [0.0, 0.0]), 1 / 9, atol=1e-14)


def test_maxent_recovers_cdvm():
    target = B(1.7, 10)
    p = fit_max_entropy(10, [lambda r: np.cos(TWO_PI * r / 10)], [target])
    assert_allclose(p, pmf_cdvm(10, 1.7, 0), atol=1e-8)


def test_maxent_recovers_wrapped_geometric():
    g = Geometric(0.5).wrapped(6)
    r = np.arange(6)
    p = fit_max_entropy(6, [lambda r: r.astype(float)], [float(g @ r)])
    assert_allclose(p, g, atol=1e-8)


def test_maxent_infeasible_raises():
    with pytest.raises(NoSolutionError):
        fit_max_entropy(8, [lambda r: np.cos(TWO_PI * r / 8)], [1.0])


# ---------------------------------------------------------------- mixtures

def test_mixture_single_component():
    spec = FamilySpec("cdwc", 10, 0.5, 3)
    mix = mixture_pmf([(spec, 1.0)])
    assert_allclose(mix.probs, spec.pmf(), atol=1e-15)
    assert_allclose(mix.angles, lattice(10), atol=1e-15)


def test_mixture_irregular_union():
    mix = mixture_pmf([(FamilySpec("cdwc", 4, 0.5), 0.5), (FamilySpec("cdwc", 9, 0.5), 0.5)])
    assert len(mix) == 12
    assert abs(mix.probs.sum() - 1) < 1e-12
    assert_allclose(mix.probs[0], 0.5 * pmf_cdwc(4, 0.5)[0] + 0.5 * pmf_cdwc(9, 0.5)[0])


def test_mixture_three_components_sums_to_one():
    comps = [(FamilySpec("cdwc", 48, r, t), w)
             for r, t, w in [(0.67, 15, 0.3), (0.56, 25, 0.385), (0.71, 36, 0.315)]]
    assert abs(mixture_pmf(comps).probs.sum() - 1) < 1e-12


def test_mixture_empty_raises():
    with pytest.raises(DomainError):
        mixture_pmf([])


# ---------------------------------------------------------------- errors

@pytest.mark.parametrize("call", [
    lambda: pmf_cdvm(1, 1.0),
    lambda: pmf_cdvm(10, -1.0),
    lambda: pmf_cdwc(10, 1.0),
    lambda: pmf_mdwc(10, 1.2),
    lambda: pmf_md_cardioid(8, 0.5),
    lambda: pmf_cd_stable(10, 0.5, a=2.5),
    lambda: pmf_centered_wrapped(Geometric(1.5), 5),
    lambda: pmf_centered_wrapped(Poisson(-1), 5),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


# ---------------------------------------------------------------- normalization sweep

@given(st.integers(2, 80), st.floats(0, 0.98), st.floats(0, 30), st.integers(0, 79))
def test_pmfs_normalize(m, rho, kappa, t):
    t %= m
    for p in (pmf_cdvm(m, kappa, t), pmf_cdwc(m, rho, t), pmf_mdwc(m, rho, TWO_PI * t / m),
              pmf_cdwn(m, rho, t), pmf_cd_stable(m, rho, t, a=1.5)):
        assert abs(p.sum() - 1) < 1e-12
        assert np.all(p >= 0)
