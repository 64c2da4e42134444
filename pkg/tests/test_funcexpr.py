import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from logkantorovich.basis import LogWeight
from logkantorovich.errors import (
    DomainError,
    EvaluationError,
    ParseError,
    SmoothnessError,
    UnknownIdentifierError,
    ValidationError,
)
from logkantorovich.funcexpr import (
    REGISTRY_NAMES,
    BinOp,
    Call,
    Num,
    Smoothness,
    Var,
    eval_jet,
    f_mu,
    parse,
    parse_ast,
    registry,
    require_c2,
    resolve_function,
    to_source,
    validate,
)
from exprgen import noisy_source, random_tree, smooth_tree
from oracles import mp_eval


# --- parsing --------------------------------------------------------------------


def test_parse_variable():
    assert parse_ast("x") == Var()


def test_precedence_example():
    tree = parse_ast("x^2 + sin(3*x)")
    assert tree == BinOp("+", BinOp("^", Var(), Num(2.0)), Call("sin", (BinOp("*", Num(3.0), Var()),)))


@pytest.mark.parametrize(
    "src, expected",
    [
        ("-x^2", "-(x^2)"),
        ("2^3^2", "2^(3^2)"),
        ("1 - 2 - 3", "(1 - 2) - 3"),
        ("8/4/2", "(8/4)/2"),
        ("-2*x", "(-2)*x"),
        ("x^-2", "x^(-2)"),
        ("2*x^2 + 1", "(2*(x^2)) + 1"),
        ("--x", "-(-x)"),
    ],
)
def test_precedence_and_associativity(src, expected):
    assert parse_ast(src) == parse_ast(expected)


@pytest.mark.parametrize(
    "src, offset",
    [("2x", 1), ("x (2)", 2), ("3 4", 2), ("x +", 3), ("sin(x", 5), ("(x))", 3), ("x^^2", 2), ("", 0), ("é+x", 0)],
)
def test_syntax_errors_report_byte_offset(src, offset):
    with pytest.raises(ParseError) as info:
        parse_ast(src)
    assert info.value.offset == offset
    assert "offset" in str(info.value)


def test_expected_token_set():
    with pytest.raises(ParseError) as info:
        parse_ast("x +")
    assert {"number", "identifier", "(", "-"} <= set(info.value.expected)


@pytest.mark.parametrize("src", ["y", "foo(x)", "sinh(x)", "X"])
def test_unknown_identifier(src):
    with pytest.raises(UnknownIdentifierError):
        parse_ast(src)


@pytest.mark.parametrize("src", ["max(x)", "sin(x, x)", "min(x, x, x)"])
def test_argument_count(src):
    with pytest.raises(ParseError):
        parse_ast(src)


def test_size_limit():
    src = "x+" * (32 * 1024) + "x"
    with pytest.raises(ParseError):
        parse_ast(src)
    ok = "+".join(["x"] * 30000)
    assert len(ok) <= 64 * 1024
    parse_ast(ok)


def test_deep_nesting_is_an_error_not_a_crash():
    with pytest.raises(ParseError):
        parse_ast("(" * 5000 + "x" + ")" * 5000)


def test_ln_of_negative_parses_but_fails_validation():
    f = parse("ln(0 - 1)")
    with pytest.raises(ValidationError):
        validate(f, 1.0)


def test_parse_is_deterministic():
    assert parse_ast("sin(pi*x) + e^x") == parse_ast("sin(pi*x) + e^x")


@pytest.mark.parametrize("seed", range(20))
def test_round_trip_through_printer(seed):
    rng = np.random.default_rng(seed)
    for _ in range(50):
        tree = random_tree(rng, 5)
        assert parse_ast(to_source(tree)) == tree
        assert parse_ast(noisy_source(tree, rng)) == tree


@given(st.text(alphabet="x0123456789.+-*/^() ,eipsnlobmaxc", max_size=40))
def test_parser_never_crashes(src):
    try:
        tree = parse_ast(src)
    except ParseError:
        return
    assert parse_ast(to_source(tree)) == tree


# --- evaluation and derivatives ---------------------------------------------------------


@pytest.mark.parametrize(
    "src, x, expected",
    [("x^2", 0.5, (0.25, 1.0, 2.0)), ("x", 0.3, (0.3, 1.0, 0.0)), ("x", 1.0, (1.0, 1.0, 0.0))],
)
def test_eval_jet_examples(src, x, expected):
    j = eval_jet(validate(src, 1.0), x)
    assert (j.value, j.d1, j.d2) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_eval_jet_x_lnmu():
    j = eval_jet(registry(1.0)["xlnmu"], 0.5)
    assert j.d1 == pytest.approx(math.log(2.5) + 0.5 / 2.5, rel=1e-15)
    h = 1e-5
    f = registry(1.0)["xlnmu"]
    assert j.d1 == pytest.approx((f(0.5 + h) - f(0.5 - h)) / (2 * h), rel=1e-9)


def test_abs_kink_flag_and_subgradient():
    f = registry(1.0)["absmid"]
    j = eval_jet(f, np.array([0.25, 0.5, 0.75]))
    assert list(j.kink) == [False, True, False]
    assert j.d1[1] == 0.0
    assert not j.d1_valid and not j.d2_valid


def test_evaluation_outside_unit_interval():
    f = registry(1.0)["x2"]
    with pytest.raises(DomainError):
        f(1.5)
    with pytest.raises(DomainError):
        eval_jet(f, -0.1)


def test_non_finite_values_fail_validation():
    with pytest.raises(ValidationError):
        validate(parse("1/x"), 1.0)


def test_registry_contents():
    for name in ("e0", "e1", "x2", "xlnmu", "lnmu", "sinpi", "exp", "absmid", "hat"):
        assert name in REGISTRY_NAMES
    reg = registry(0.5)
    assert reg["hat"].smoothness == Smoothness.C0
    assert reg["hat"].kinks == pytest.approx((0.25, 0.5, 0.75))
    assert reg["absmid"].kinks == pytest.approx((0.5,))
    for name in ("e0", "e1", "x2", "xlnmu", "lnmu", "sinpi", "exp"):
        assert reg[name].smoothness >= Smoothness.C2


@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("name", ["e0", "e1", "x2", "xlnmu", "lnmu", "sinpi", "exp"])
def test_registry_ad_against_central_differences(name, mu):
    f = registry(mu)[name]
    x = np.linspace(0.0, 1.0, 103)[1:-1]
    j = eval_jet(f, x)
    h1, h2 = 1e-6, 1e-4
    fd1 = (f(x + h1) - f(x - h1)) / (2 * h1)
    fd2 = (f(x + h2) - 2 * f(x) + f(x - h2)) / h2**2
    assert np.all(np.abs(j.d1 - fd1) <= 1e-6 * (1 + np.abs(j.d1)))
    assert np.all(np.abs(j.d2 - fd2) <= 1e-4 * (1 + np.abs(j.d2)))


def _mp_derivatives(tree, x, mu, h="1e-12"):
    with mpmath.workdps(60):
        xm, hm = mpmath.mpf(x), mpmath.mpf(h)
        f0 = mp_eval(tree, xm, mu)
        fp = mp_eval(tree, xm + hm, mu)
        fm = mp_eval(tree, xm - hm, mu)
        return float(f0), float((fp - fm) / (2 * hm)), float((fp - 2 * f0 + fm) / hm**2)


@pytest.mark.parametrize("seed", range(10))
def test_ad_on_random_smooth_expressions(seed):
    rng = np.random.default_rng(1000 + seed)
    for _ in range(20):
        tree = smooth_tree(rng)
        f = validate(parse(to_source(tree)), 1.0)
        x = float(rng.uniform(0.01, 0.99))
        v, d1, d2 = _mp_derivatives(tree, x, 1.0)
        j = eval_jet(f, x)
        assert j.value == pytest.approx(v, rel=1e-12, abs=1e-12)
        assert abs(j.d1 - d1) <= 1e-9 * (1 + abs(d1))
        assert abs(j.d2 - d2) <= 1e-8 * (1 + abs(d2))


# --- smoothness inference --------------------------------------------------------------


@pytest.mark.parametrize(
    "src, cls",
    [
        ("x^2", Smoothness.ANALYTIC),
        ("abs(x - 0.3)", Smoothness.C0),
        ("max(x, 0.5)", Smoothness.C0),
        ("x^0.5", Smoothness.C0),
        ("x^1.5", Smoothness.C1),
        ("x^2.5", Smoothness.C2),
        ("(x + 1)^0.5", Smoothness.ANALYTIC),
        ("abs(x + 1)", Smoothness.ANALYTIC),
    ],
)
def test_inferred_smoothness(src, cls):
    assert validate(src, 1.0).smoothness == cls


def test_declared_smoothness_wins():
    assert validate(parse("abs(x - 0.3)", smoothness="C2"), 1.0).smoothness == Smoothness.C2


def test_require_c2():
    with pytest.raises(SmoothnessError):
        require_c2(registry(1.0)["hat"])
    require_c2(registry(1.0)["sinpi"])


def test_lnmu_needs_mu():
    with pytest.raises(ValidationError):
        validate(parse("lnmu(x)"))


def test_resolve_function_accepts_names_and_expressions():
    assert resolve_function("x2", 1.0) is registry(1.0)["x2"]
    assert resolve_function("x^3", 1.0)(0.5) == 0.125


# --- f_mu ---------------------------------------------------------------------------


def test_f_mu_of_lnmu_is_one():
    w = LogWeight(1.7)
    g = f_mu(registry(1.7)["lnmu"], w)
    x = np.linspace(0.0, 1.0, 1001)
    assert np.max(np.abs(g(x) - 1.0)) <= 1e-14


def test_f_mu_of_zero_and_of_x():
    w = LogWeight(1.0)
    assert f_mu(validate("0", 1.0), w)(0.7) == 0.0
    assert f_mu(validate("x", 1.0), w)(0.0) == 0.0


def test_f_mu_preserves_smoothness_and_kinks():
    w = LogWeight(1.0)
    h = registry(1.0)["hat"]
    g = f_mu(h, w)
    assert g.smoothness == h.smoothness
    assert g.kinks == h.kinks
