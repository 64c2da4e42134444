import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logkantorovich.errors import DomainError, ParameterError
from logkantorovich.funcexpr import REGISTRY_NAMES, registry, validate
from logkantorovich.grids import Grid
from logkantorovich.operators import Family, OperatorSpec, apply, apply_grid, basis_weights, coefficients
from logkantorovich.quadrature import QuadratureRule
from oracles import mp_log_kantorovich

X101 = np.linspace(0.0, 1.0, 101)
NONNEGATIVE = ["e0", "e1", "x2", "xlnmu", "lnmu", "sinpi", "exp", "absmid", "hat"]


def op(family, n, mu=1.0):
    return OperatorSpec(Family(family), n, mu)


def test_spec_validation():
    with pytest.raises(ParameterError):
        OperatorSpec(Family.LOG_KANTOROVICH, 0)
    with pytest.raises(ParameterError):
        OperatorSpec(Family.LOG_KANTOROVICH, 2.5)
    with pytest.raises(ParameterError):
        OperatorSpec(Family.LOG_KANTOROVICH, 4, mu=0.0)
    OperatorSpec(Family.CLASSICAL_BERNSTEIN, 4, mu=-1.0)  # mu unused
    assert OperatorSpec("LogSampled", 3).family is Family.LOG_SAMPLED


@pytest.mark.parametrize("family", list(Family))
def test_points_outside_unit_interval(family):
    with pytest.raises(DomainError):
        apply(op(family, 4), registry(1.0)["e1"], 1.5)


@pytest.mark.parametrize("n", [1, 4, 16, 64, 256, 512])
@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("family", ["LogKantorovich", "LogSampled"])
def test_log_families_fix_log_weight(family, n, mu):
    f = registry(mu)["lnmu"]
    got = apply_grid(op(family, n, mu), f, X101)
    assert np.max(np.abs(got - np.log1p(mu + X101))) <= 1e-11


@pytest.mark.parametrize("n", [1, 8, 128, 512])
@pytest.mark.parametrize("mu", [0.5, 2.0])
def test_exp_kantorovich_fixes_exponential(n, mu):
    f = validate(f"exp({mu!r}*x)", mu)
    got = apply_grid(op("ExpKantorovich", n, mu), f, X101)
    assert np.max(np.abs(got - np.exp(mu * X101))) <= 1e-11 * np.exp(mu)


@pytest.mark.parametrize("n", [1, 8, 128, 512])
def test_bernstein_fixes_constants_and_lines(n):
    r = registry(1.0)
    s = op("ClassicalBernstein", n)
    assert np.max(np.abs(apply_grid(s, r["e0"], X101) - 1.0)) <= 1e-11
    assert np.max(np.abs(apply_grid(s, r["e1"], X101) - X101)) <= 1e-13


@pytest.mark.parametrize("n", [1, 8, 128, 512])
def test_classical_kantorovich_fixes_constants(n):
    got = apply_grid(op("ClassicalKantorovich", n), registry(1.0)["e0"], X101)
    assert np.max(np.abs(got - 1.0)) <= 1e-11


@pytest.mark.parametrize("family", list(Family))
def test_zero_maps_to_zero(family):
    assert np.all(apply_grid(op(family, 7), validate("0", 1.0), X101) == 0.0)


@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
def test_log_kantorovich_endpoints(mu):
    got = apply_grid(op("LogKantorovich", 20, mu), registry(mu)["lnmu"], Grid(np.array([0.0, 1.0])))
    assert got == pytest.approx([np.log1p(mu), np.log(2.0 + mu)], rel=1e-14)


def test_log_kantorovich_e1_pinned():
    f = registry(1.0)["e1"]
    ref = float(mp_log_kantorovich(f, 4, 1.0, 0.5, dps=40))
    assert apply(op("LogKantorovich", 4), f, 0.5) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 17])
@pytest.mark.parametrize("name", ["x2", "sinpi", "hat", "absmid"])
def test_against_direct_summation(name, n):
    f = registry(1.5)[name]
    for x in (0.0, 0.23, 0.5, 0.91, 1.0):
        ref = float(mp_log_kantorovich(f, n, 1.5, x))
        assert apply(op("LogKantorovich", n, 1.5), f, x) == pytest.approx(ref, rel=1e-12, abs=1e-14)


@pytest.mark.parametrize("family", list(Family))
def test_singleton_grid_is_bitwise_consistent(family):
    f = registry(1.0)["xlnmu"]
    s = op(family, 33)
    full = apply_grid(s, f, X101)
    for i in range(0, 101, 7):
        assert apply(s, f, X101[i]) == full[i]
        assert apply_grid(s, f, [X101[i]])[0] == full[i]


@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("name", NONNEGATIVE)
def test_positivity(family, name):
    f = registry(1.0)[name]
    for n in (3, 40, 300):
        assert np.min(apply_grid(op(family, n), f, X101)) >= -1e-12


@settings(max_examples=30)
@given(
    st.floats(-2, 2), st.floats(-2, 2),
    st.sampled_from(REGISTRY_NAMES), st.sampled_from(REGISTRY_NAMES),
    st.sampled_from(list(Family)), st.integers(1, 200),
)
def test_linearity(alpha, beta, a, b, family, n):
    r = registry(1.0)
    f, g = r[a], r[b]
    h = lambda t: alpha * f(t) + beta * g(t)
    s = op(family, n)
    rule = QuadratureRule().with_kinks(tuple(f.kinks) + tuple(g.kinks))
    lhs = apply_grid(s, h, X101, rule)
    rhs = alpha * apply_grid(s, f, X101, rule) + beta * apply_grid(s, g, X101, rule)
    scale = max(1.0, abs(alpha) + abs(beta)) * 3.0
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale


# Lipschitz constants on [0, 1] (mu = 1)
LIPSCHITZ = {"e0": 1.0, "e1": 1.0, "x2": 2.0, "xlnmu": np.log(3.0) + 1.0 / 3.0, "sinpi": np.pi,
             "exp": np.e, "absmid": 1.0, "hat": 4.0}


@pytest.mark.parametrize("name", sorted(LIPSCHITZ))
def test_uniform_convergence_is_monotone(name):
    f = registry(1.0)[name]
    errs = []
    for n in (16, 32, 64, 128, 256, 512, 1024):
        errs.append(np.max(np.abs(apply_grid(op("LogKantorovich", n), f, X101) - f(X101))))
    for a, b in zip(errs, errs[1:]):
        assert b <= 1.05 * a
    assert errs[-1] < 0.02 * LIPSCHITZ[name]


def test_coefficients_are_cached_and_read_only():
    f = registry(1.0)["sinpi"]
    s = op("LogKantorovich", 50)
    c1 = coefficients(s, f)
    assert coefficients(s, f) is c1
    assert not c1.flags.writeable
    assert c1.shape == (51,)


def test_unhashable_integrand_is_not_cached():
    class Unhashable:
        __hash__ = None

        def __call__(self, t):
            return np.asarray(t) ** 2

    got = apply(op("ClassicalKantorovich", 3), Unhashable(), 0.5)
    assert got == pytest.approx(apply(op("ClassicalKantorovich", 3), registry(1.0)["x2"], 0.5), rel=1e-14)


def test_sampled_family_at_first_node_is_finite():
    f = registry(0.5)["e0"]
    c = coefficients(op("LogSampled", 10, 0.5), f)
    assert c[0] == pytest.approx(1.0 / np.log1p(0.5))


def test_basis_weights_flush_and_partition():
    pref, P = basis_weights(op("LogKantorovich", 2000), X101)
    assert np.all((P == 0.0) | (P >= 1e-300))
    assert np.max(np.abs(P.sum(axis=1) - 1.0)) <= 1e-12
    assert pref == pytest.approx(np.log1p(1.0 + X101))
