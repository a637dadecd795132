import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special, stats

from robustcontam import numerics
from robustcontam.exceptions import BracketError, DomainError, NumericalError
from robustcontam.numerics import NORMAL, T3, ErrorLaw


# -- quantiles and CDFs --------------------------------------------------------

@pytest.mark.parametrize("p, expected", [
    (0.5, 0.0),
    (0.975, 1.959963984540054),
    (0.75, 0.6744897501960817),
    (1e-10, -6.361340902404056),
])
def test_normal_quantile_values(p, expected):
    assert numerics.normal_quantile(p) == pytest.approx(expected, abs=1e-12)


def test_normal_quantile_matches_scipy_on_grid():
    p = np.concatenate([np.logspace(-15, -1, 60), np.linspace(0.01, 0.99, 197),
                        1 - np.logspace(-12, -1, 40)])
    assert np.max(np.abs(numerics.normal_quantile(p) - special.ndtri(p))) < 1e-9


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_quantile_domain(p):
    with pytest.raises(DomainError):
        numerics.normal_quantile(p)
    with pytest.raises(DomainError):
        numerics.t3_quantile(p)


def test_t3_quantile_values():
    # closed form at 0.975 from scipy's t distribution
    assert numerics.t3_quantile(0.975) == pytest.approx(3.182446305284263, abs=1e-9)
    assert numerics.t3_quantile(0.5) == 0.0
    assert numerics.t3_quantile(0.625) == pytest.approx(stats.t.ppf(0.625, 3), abs=1e-12)


def test_t3_cdf_closed_form_against_scipy():
    x = np.linspace(-50, 50, 4001)
    assert np.max(np.abs(numerics.t3_cdf(x) - stats.t.cdf(x, 3))) < 1e-12
    assert np.max(np.abs(numerics.t3_pdf(x) - stats.t.pdf(x, 3))) < 1e-14


@pytest.mark.parametrize("law", [NORMAL, T3], ids=["normal", "t3"])
def test_cdf_of_quantile_round_trip(law):
    p = np.concatenate([np.logspace(-12, -1, 50), np.linspace(0.01, 0.99, 99)])
    p = np.concatenate([p, 1 - p])
    back = numerics.cdf(law, numerics.quantile(law, p))
    assert np.max(np.abs(back - p)) < 1e-9


@pytest.mark.parametrize("law", [NORMAL, T3], ids=["normal", "t3"])
def test_quantile_of_cdf_round_trip(law):
    x = np.linspace(-8, 8, 1601)
    p = numerics.cdf(law, x)
    back = numerics.quantile(law, p)
    # on the lower half p carries full relative precision
    lower = x <= 0
    assert np.max(np.abs(back[lower] - x[lower])) < 1e-9
    # on the upper half p is rounded to a multiple of 2^-53, which moves the
    # quantile by up to ulp(1) / f(x); the round trip is exact to that level
    dens = numerics.pdf(law, x[~lower])
    slack = 1e-9 + np.spacing(1.0) / dens
    assert np.all(np.abs(back[~lower] - x[~lower]) <= slack)


@given(st.floats(min_value=1e-16, max_value=0.5))
@settings(max_examples=300, deadline=None)
def test_normal_quantile_symmetric(p):
    upper = 1.0 - p
    p = 1.0 - upper  # the probability whose complement is exactly `upper`
    q = numerics.normal_quantile(p)
    assert q <= 0
    assert numerics.normal_quantile(upper) == pytest.approx(-q, abs=1e-9)


@given(st.floats(min_value=1e-300, max_value=0.999), st.floats(min_value=1e-12, max_value=1e-3))
@settings(max_examples=200, deadline=None)
def test_normal_quantile_monotone(p, dp):
    if p + dp < 1:
        assert numerics.normal_quantile(p) < numerics.normal_quantile(p + dp)


def test_error_law_names():
    assert ErrorLaw.from_name("normal") == NORMAL
    assert ErrorLaw.from_name("t3") == T3
    assert str(T3) == "t3"
    with pytest.raises(DomainError):
        ErrorLaw.from_name("cauchy")
    with pytest.raises(DomainError):
        numerics.student_t(5)


# -- quadrature -----------------------------------------------------------------

def test_integrate_polynomial_exact():
    assert numerics.integrate(lambda x: x ** 4, -1.0, 2.0) == pytest.approx(33 / 5, rel=1e-14)


def test_normal_moments():
    assert numerics.expect_under_normal(lambda x: np.ones_like(x)) == pytest.approx(1, abs=1e-12)
    assert numerics.expect_under_normal(lambda x: x ** 2) == pytest.approx(1, abs=1e-12)
    assert numerics.expect_under_normal(lambda x: x ** 4) == pytest.approx(3, abs=1e-11)


def test_odd_integrand_vanishes():
    assert abs(numerics.expect_under_normal(lambda x: x ** 3)) < 1e-13
    assert abs(numerics.expect(T3, lambda x: np.sin(x))) < 1e-13


def test_t3_expectations_against_scipy():
    # E|X| and E min(X^2, 4) under t(3)
    ref = 2 * integrate.quad(lambda x: x * stats.t.pdf(x, 3), 0, np.inf)[0]
    assert numerics.expect(T3, np.abs) == pytest.approx(ref, abs=1e-9)
    assert numerics.expect(T3, np.abs) == pytest.approx(2 * math.sqrt(3) / math.pi, abs=1e-10)
    ref = 2 * (integrate.quad(lambda x: x * x * stats.t.pdf(x, 3), 0, 2)[0]
               + 4 * stats.t.sf(2.0, 3))
    assert numerics.expect(T3, lambda x: np.minimum(x * x, 4.0),
                           points=(-2.0, 2.0)) == pytest.approx(ref, abs=1e-9)


def test_integrate_reports_best_estimate_on_failure():
    with pytest.raises(NumericalError) as info:
        numerics.integrate(lambda x: np.abs(x - 1 / 3) ** -0.5, 0.0, 1.0, max_intervals=20)
    assert math.isfinite(info.value.best_estimate)


# -- root finding -----------------------------------------------------------------

def test_find_root_independent_of_bracket():
    g = lambda x: math.cos(x) - x  # noqa: E731
    roots = [numerics.find_root(g, lo, hi) for lo, hi in [(0, 1), (-1, 2), (0.5, 0.8), (-10, 10)]]
    assert max(roots) - min(roots) < 1e-12
    assert roots[0] == pytest.approx(0.7390851332151607, abs=1e-12)


def test_find_root_endpoint_and_bracket_error():
    assert numerics.find_root(lambda x: x - 2.0, 2.0, 5.0) == 2.0
    with pytest.raises(BracketError):
        numerics.find_root(lambda x: x * x + 1, -1.0, 1.0)


def test_find_root_recovers_quantile():
    for p in (0.1, 0.6, 0.99):
        r = numerics.find_root(lambda x: numerics.t3_cdf(x) - p, -50.0, 50.0)
        assert r == pytest.approx(stats.t.ppf(p, 3), abs=1e-9)
