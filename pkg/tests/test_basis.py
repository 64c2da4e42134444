import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from logkantorovich.basis import (
    LogWeight,
    ReparamCurve,
    basis_integral,
    bernstein_basis,
    bernstein_matrix,
    gamma_n,
    king_moments,
    king_moments_direct,
    ln_mu,
    paper_constants,
    reparam,
    reparam_complement,
    reparam_gap_limit,
)
from logkantorovich.errors import DomainError, ParameterError
from logkantorovich.quadrature import QuadratureRule, integrate
from oracles import mp_bernstein, mp_reparam


# --- ln_mu -------------------------------------------------------------------


@pytest.mark.parametrize("mu", [0.0, -1.0, float("nan")])
def test_log_weight_rejects_nonpositive_mu(mu):
    with pytest.raises(ParameterError):
        LogWeight(mu)


@pytest.mark.parametrize(
    "mu, x, expected",
    [(math.e - 2.0, 1.0, 1.0), (1.0, 0.0, math.log(2.0)), (1.0, 1.0, math.log(3.0))],
)
def test_ln_mu_values(mu, x, expected):
    assert ln_mu(LogWeight(mu), x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("x", [-1e-12, 1.0 + 1e-12, 2.0])
def test_ln_mu_domain(x):
    with pytest.raises(DomainError):
        ln_mu(LogWeight(1.0), x)


@given(st.floats(0.01, 50.0), st.floats(0.0, 1.0))
def test_ln_mu_lower_bound(mu, x):
    w = LogWeight(mu)
    assert ln_mu(w, x) >= w.lower > 0.0


# --- reparameterization --------------------------------------------------------


@pytest.mark.parametrize("m, mu", [(1, 0.5), (5, 1.0), (1025, 3.0), (10**6, 1.0)])
def test_reparam_endpoints_exact(m, mu):
    c = ReparamCurve(m, mu)
    assert reparam(c, 0.0) == 0.0
    assert reparam(c, 1.0) == 1.0
    assert reparam_complement(c, 0.0) == 1.0
    assert reparam_complement(c, 1.0) == 0.0


def test_reparam_pinned_value():
    with mpmath.workdps(50):
        expected = float(mp_reparam(5, 1, mpmath.mpf("0.5")))
    assert reparam(ReparamCurve(5, 1.0), 0.5) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("m", [2, 17, 513, 10**5])
@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
def test_reparam_monotone_concave_above_identity(m, mu):
    x = np.linspace(0.0, 1.0, 10_001)
    a = reparam(ReparamCurve(m, mu), x)
    assert np.all(a >= x)
    assert np.all(np.diff(a) > 0.0)
    assert np.all(np.diff(a, 2) <= 1e-12 * np.max(np.abs(a)))


@given(st.integers(1, 10**6), st.floats(0.05, 20.0), st.floats(0.0, 1.0))
def test_reparam_complement_matches_high_precision(m, mu, x):
    c = ReparamCurve(m, mu)
    with mpmath.workdps(40):
        exact = 1 - mp_reparam(m, mu, mpmath.mpf(x))
    got = reparam_complement(c, x)
    assert abs(got - float(exact)) <= 8 * np.finfo(float).eps * max(float(exact), 1e-300) + 1e-300


@pytest.mark.parametrize("x, expected", [(0.0, 0.0), (1.0, 0.0), (0.5, 0.0625)])
def test_gap_limit_values(x, expected):
    assert reparam_gap_limit(ReparamCurve(3, 1.0), x) == pytest.approx(expected, abs=1e-17)


def test_gap_limit_at_one_million():
    n, mu = 10**6, 1.0
    c = ReparamCurve(n + 1, mu)
    x = np.linspace(0.0, 1.0, 1001)
    dev = np.abs(n * (reparam(c, x) - x) - reparam_gap_limit(c, x))
    assert np.max(dev) <= 1e-5


# --- Bernstein basis -------------------------------------------------------------


@pytest.mark.parametrize("n", [0, 1, 7, 300])
def test_basis_endpoint_conventions(n):
    assert bernstein_basis(n, 0, 0.0) == 1.0
    assert bernstein_basis(n, n, 1.0) == 1.0
    if n > 0:
        assert bernstein_basis(n, n, 0.0) == 0.0
        assert bernstein_basis(n, 0, 1.0) == 0.0


def test_basis_small_value():
    assert bernstein_basis(2, 1, 0.5) == pytest.approx(0.5, rel=1e-15)


def test_basis_central_binomial_exact():
    exact = Fraction(math.comb(200, 100), 2**200)
    got = bernstein_basis(200, 100, 0.5)
    assert abs(Fraction(got) - exact) <= exact * Fraction(1, 10**14)


@given(st.integers(1, 3000), st.data())
def test_basis_matches_mpmath(n, data):
    k = data.draw(st.integers(0, n))
    y = data.draw(st.floats(0.0, 1.0))
    with mpmath.workdps(40):
        exact = mp_bernstein(n, k, y)
    got = bernstein_basis(n, k, y)
    if exact < mpmath.mpf("1e-290"):
        assert got <= 1e-280
    else:
        assert abs(got - float(exact)) <= 5e-13 * float(exact)


# a representative subset of n in 1..2048: every n up to 64, then a stride
PARTITION_NS = sorted(set(range(1, 65)) | set(range(65, 2049, 37)) | {2048})


@pytest.mark.parametrize("n", PARTITION_NS)
def test_partition_of_unity(n):
    y = np.linspace(0.0, 1.0, 1001)
    assert np.max(np.abs(bernstein_matrix(n, y).sum(axis=1) - 1.0)) <= 1e-12


def test_basis_matrix_rows_match_scalar():
    y = np.array([0.0, 0.3, 1.0])
    P = bernstein_matrix(9, y)
    for i, yi in enumerate(y):
        for k in range(10):
            assert P[i, k] == bernstein_basis(9, k, yi)


@pytest.mark.parametrize("n, k, expected", [(1, 0, 0.5), (9, 3, 0.1), (0, 0, 1.0)])
def test_basis_integral_values(n, k, expected):
    assert basis_integral(n, k) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 32])
def test_basis_integral_matches_quadrature(n):
    rule = QuadratureRule()
    for k in range(n + 1):
        q = integrate(rule, lambda t: bernstein_basis(n, k, t), 0.0, 1.0)
        assert q == pytest.approx(basis_integral(n, k), abs=1e-10)


def test_basis_integral_domain():
    with pytest.raises(DomainError):
        basis_integral(3, 4)


# --- moments --------------------------------------------------------------------------


def test_king_moments_values():
    m0, m1, m2 = king_moments(3, 0.5)
    assert m0 == 1.0
    assert m1 == pytest.approx(0.375, rel=1e-15)
    assert m2 == pytest.approx(0.1875, rel=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 31, 64])
def test_king_moments_closed_form_vs_direct(n):
    y = np.linspace(0.0, 1.0, 101)
    for closed, direct in zip(king_moments(n, y), king_moments_direct(n, y)):
        assert np.max(np.abs(closed - direct)) <= 1e-12


# --- gamma_n and constants -----------------------------------------------------------------


def _gamma_oracle(m, mu):
    """a(x) - x is maximal where a'(x) = 1, i.e. at x* = 1/log1p(eps) - 1/eps."""
    with mpmath.workdps(50):
        eps = 1 / (mpmath.mpf(m) * (1 + mpmath.mpf(mu)))
        xs = 1 / mpmath.log(1 + eps) - 1 / eps
        return float(mp_reparam(m, mu, xs) - xs)


def test_gamma_n_pinned_and_dense_scan():
    c = ReparamCurve(5, 1.0)
    x = np.linspace(0.0, 1.0, 10**6)
    scan = float(np.max(reparam(c, x) - x))
    g = gamma_n(c)
    assert g >= scan - 1e-15
    assert g == pytest.approx(scan, abs=1e-12)
    assert g == pytest.approx(_gamma_oracle(5, 1.0), rel=1e-10)
    assert g == pytest.approx(0.011912269652919583, rel=1e-12)


@pytest.mark.parametrize("m", [3, 17, 257, 4097])
@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
def test_gamma_n_matches_stationary_point(m, mu):
    assert gamma_n(ReparamCurve(m, mu)) == pytest.approx(_gamma_oracle(m, mu), rel=1e-9)


def test_gamma_n_decays_like_one_over_n():
    vals = [(n, gamma_n(ReparamCurve(n + 1, 1.0))) for n in (10, 100, 1000, 10000, 100000)]
    scaled = [n * g for n, g in vals]
    assert all(g > 0 for _, g in vals)
    assert max(scaled) < 0.07 and min(scaled) > 0.05
    assert vals[-1][1] < vals[0][1]


def test_paper_constants_k_mu_and_t_n():
    c = paper_constants(63, 1.0)
    assert c.k_mu == 1.5
    g = _gamma_oracle(64, 1.0)
    expected = 1.0 / 128.0 + math.sqrt(2.0) / 8.0 + g
    assert c.t_n == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 10, 100, 4096])
@pytest.mark.parametrize("mu", [0.25, 1.0, 7.0])
def test_t_n_lower_bound_and_monotone(n, mu):
    c = paper_constants(n, mu)
    assert c.t_n >= math.sqrt(2.0) / math.sqrt(n + 1)
    assert paper_constants(n + 1, mu).t_n < c.t_n
    assert 1.0 < c.k_mu < 2.0
    assert c.gamma_n >= 0.0


def test_lambda_and_cap_gamma_formulas():
    n, mu, p = 40, 2.0, 3.0
    c = paper_constants(n, mu, p=p)
    l1, l2 = math.log(1.0 + mu), math.log(2.0 + mu)
    k = 1.0 + 1.0 / (1.0 + mu)
    lam = l2 / l1 * (1.0 + 1.0 / ((1.0 + mu) * l1)) / (k + 1.0) * c.t_n
    assert c.lambda_n == pytest.approx(lam, rel=1e-14)
    cp = p / (p - 1.0)
    cpm = max(1.0 / ((1.0 + mu) * l1), cp)
    assert c.c_p == pytest.approx(cp) and c.c_p_mu == pytest.approx(cpm)
    cap = 2.0 ** ((p - 1.0) / p) * cpm * l2 / l1 / (k + 1.0) * c.t_n
    assert c.gamma_n_cap == pytest.approx(cap, rel=1e-14)


def test_c_p_override():
    c = paper_constants(10, 0.1, p=2.0, c_p=1.0)
    assert c.c_p == 1.0
    assert c.c_p_mu == pytest.approx(max(1.0 / (1.1 * math.log(1.1)), 1.0))


@pytest.mark.parametrize("p", [1.0, 0.5])
def test_paper_constants_reject_p_at_most_one(p):
    with pytest.raises(ParameterError):
        paper_constants(10, 1.0, p=p)


def test_paper_constants_need_n_at_least_two():
    with pytest.raises(ParameterError):
        paper_constants(1, 1.0)


@pytest.mark.parametrize("y", [5e-324, 1e-310, 1e-300])
@pytest.mark.parametrize("n, k", [(1, 0), (1, 1), (3, 1), (1000, 1), (1000, 999)])
def test_basis_at_tiny_arguments(n, k, y):
    with mpmath.workdps(40):
        exact = float(mp_bernstein(n, k, y))
    got = bernstein_basis(n, k, y)
    assert math.isfinite(got)
    assert got == pytest.approx(exact, rel=1e-12, abs=1e-320)
