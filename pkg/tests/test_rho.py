import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from robustcontam import rho as R
from robustcontam.exceptions import DomainError, UnsupportedOperation

SPECS = [R.absolute(), R.huber(), R.tukey(), R.squared(), R.huber(0.5), R.tukey(2.0)]
IDS = [str(s) for s in SPECS]
GRID = np.linspace(-20, 20, 10_001)
finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


def test_rho_values():
    assert R.rho(R.tukey(), 5.0) == pytest.approx(4.685 ** 2 / 6, abs=1e-12)
    assert R.rho(R.tukey(), 5.0) == pytest.approx(3.6582041666666667, abs=1e-12)
    assert R.rho(R.huber(), 0.0) == 0.0
    assert R.rho(R.absolute(), -2.0) == 2.0
    assert R.rho(R.squared(), -1.5) == 2.25


def test_psi_values():
    assert R.psi(R.tukey(), 6.0) == 0.0
    assert R.psi(R.huber(), 3.0) == 1.345
    assert R.psi(R.squared(), 1.5) == 3.0
    assert R.psi(R.absolute(), 0.0) == 0.0


def test_psi_prime_values():
    assert R.psi_prime(R.tukey(), 0.0) == 1.0
    assert R.psi_prime(R.huber(), 2.0) == 0.0
    assert R.psi_prime(R.huber(), 1.345) == 1.0
    assert np.all(R.psi_prime(R.squared(), GRID) == 2.0)
    with pytest.raises(UnsupportedOperation):
        R.psi_prime(R.absolute(), 1.0)


def test_tail_constants():
    rs, xs, ps = R.tail_constants(R.tukey())
    assert (rs, xs, ps) == (pytest.approx(4.685 ** 2 / 6, abs=1e-12), 4.685, 0.0)
    assert R.tail_constants(R.huber()) == (pytest.approx(0.9045125, abs=1e-15), 1.345, 1.345)
    assert R.tail_constants(R.absolute()) == (0.0, 0.0, 1.0)
    with pytest.raises(UnsupportedOperation):
        R.tail_constants(R.squared())


def test_spec_validation():
    with pytest.raises(DomainError):
        R.RhoSpec("cauchy")
    with pytest.raises(DomainError):
        R.RhoSpec("tukey", -1.0)
    with pytest.raises(DomainError):
        R.RhoSpec("absolute", 1.0)
    assert R.RhoSpec.from_name("tukey") == R.tukey()
    assert R.RhoSpec.from_name("huber", 2.0).c == 2.0
    assert R.is_redescending(R.tukey()) and not R.is_redescending(R.huber())


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_symmetric_nonnegative_monotone(spec):
    r = R.rho(spec, GRID)
    assert R.rho(spec, 0.0) == 0.0
    assert np.array_equal(r, R.rho(spec, -GRID))
    assert np.all(r >= 0)
    pos = r[GRID >= 0]
    assert np.all(np.diff(pos) >= 0)


@pytest.mark.parametrize("spec", [R.huber(), R.tukey(), R.huber(0.7), R.tukey(3.0)], ids=str)
def test_tail_identity(spec):
    rs, xs, ps = R.tail_constants(spec)
    x = np.concatenate([np.linspace(xs, 50, 2001), -np.linspace(xs, 50, 2001)])
    expected = rs + ps * (np.abs(x) - xs)
    assert np.allclose(R.rho(spec, x), expected, rtol=0, atol=1e-12)


def _away_from_kinks(spec, x, gap):
    mask = np.ones_like(x, dtype=bool)
    for k in R.kinks(spec):
        mask &= np.abs(x - k) > gap
    return x[mask]


@pytest.mark.parametrize("spec", SPECS, ids=IDS)
def test_psi_is_derivative_of_rho(spec):
    h = 1e-5
    x = _away_from_kinks(spec, np.linspace(-8, 8, 3203), 10 * h)
    fd = (R.rho(spec, x + h) - R.rho(spec, x - h)) / (2 * h)
    assert np.max(np.abs(fd - R.psi(spec, x))) < 1e-6


@pytest.mark.parametrize("spec", [s for s in SPECS if s.family != "absolute"], ids=str)
def test_psi_prime_is_derivative_of_psi(spec):
    h = 1e-5
    x = _away_from_kinks(spec, np.linspace(-8, 8, 3203), 10 * h)
    fd = (R.psi(spec, x + h) - R.psi(spec, x - h)) / (2 * h)
    assert np.max(np.abs(fd - R.psi_prime(spec, x))) < 1e-5


@given(finite, finite)
def test_tukey_lipschitz(a, b):
    spec = R.tukey()
    sup_psi = np.max(np.abs(R.psi(spec, np.linspace(0, spec.c, 100_001))))
    assert abs(R.rho(spec, a) - R.rho(spec, b)) <= sup_psi * abs(a - b) + 1e-12


@given(finite)
def test_scalar_in_scalar_out(x):
    for spec in SPECS:
        assert isinstance(R.rho(spec, x), float)
        assert isinstance(R.psi(spec, x), float)
