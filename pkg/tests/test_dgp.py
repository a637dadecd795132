import numpy as np
import pytest
from scipy import stats

from robustcontam import dgp
from robustcontam.exceptions import DomainError
from robustcontam.numerics import NORMAL, T3


@pytest.mark.parametrize("name, h, law, xi", [
    ("dgp1", 100, NORMAL, 0.0), ("dgp2", 100, T3, 0.0), ("dgp3", 80, NORMAL, 1.0),
    ("dgp4", 80, NORMAL, 3.0), ("dgp5", 80, T3, 3.0), ("dgp6", 99, NORMAL, 3.0),
])
def test_presets(name, h, law, xi):
    cfg = dgp.preset(name, 100)
    assert (cfg.h, cfg.good_law, cfg.xi, cfg.varrho) == (h, law, xi, 0.0)


def test_config_validation():
    with pytest.raises(DomainError):
        dgp.preset("dgp7", 10)
    with pytest.raises(DomainError):
        dgp.DgpConfig(n=10, h=11)
    with pytest.raises(DomainError):
        dgp.DgpConfig(n=10, h=8, varrho=0.3)
    with pytest.raises(DomainError):
        dgp.DgpConfig(n=10, h=8, sigma0=0.0)


def test_generation_is_deterministic():
    cfg = dgp.preset("dgp5", 250)
    a, ia = dgp.generate(cfg, 42)
    b, ib = dgp.generate(cfg, 42)
    c, _ = dgp.generate(cfg, 43)
    assert np.array_equal(a.values, b.values) and np.array_equal(ia, ib)
    assert not np.array_equal(a.values, c.values)


def test_rep_seed():
    assert dgp.rep_seed(20250213, 0) == 20250213
    assert dgp.rep_seed(0b1010, 0b0110) == 0b1100
    assert dgp.rep_seed(2 ** 64 - 1, 1) == 2 ** 64 - 2


@pytest.mark.parametrize("name", ["dgp3", "dgp4", "dgp5", "dgp6"])
def test_outlier_count_and_placement(name):
    cfg = dgp.preset(name, 400)
    s, good = dgp.generate(cfg, 5)
    y = s.values
    mask = np.zeros(cfg.n, bool)
    mask[good] = True
    assert good.size == cfg.h
    out = y[~mask]
    assert out.size == cfg.n - cfg.h
    assert np.all(out == y[mask].max() + cfg.xi)


def test_outliers_dominate_good_squares_for_xi3():
    exceptions = 0
    for seed in range(50):
        s, good = dgp.generate(dgp.preset("dgp4", 100), seed)
        mask = np.zeros(100, bool)
        mask[good] = True
        if not np.min(s.values[~mask] ** 2) > np.max(s.values[mask] ** 2):
            exceptions += 1
    assert exceptions == 0


def test_left_outliers():
    cfg = dgp.DgpConfig(n=100, h=80, xi=2.0, varrho=0.05)
    s, good = dgp.generate(cfg, 3)
    mask = np.zeros(100, bool)
    mask[good] = True
    g = s.values[mask]
    out = s.values[~mask]
    assert np.sum(out == g.min() - 2.0) == 5
    assert np.sum(out == g.max() + 2.0) == 15


@pytest.mark.parametrize("name", ["dgp1", "dgp2"])
def test_good_moments(name):
    cfg = dgp.preset(name, 20_000)
    s, good = dgp.generate(cfg, 8)
    e = s.values[good]
    h = e.size
    assert abs(e.mean()) < 4 / np.sqrt(h)
    if name == "dgp1":
        assert abs(e.var() - 1) < 4 * np.sqrt(2 / h)
    law = stats.norm if name == "dgp1" else stats.t(3)
    assert stats.kstest(e, law.cdf).pvalue > 1e-3


def test_location_scale_applied():
    cfg = dgp.DgpConfig(n=50, h=50, mu0=10.0, sigma0=2.0)
    base = dgp.DgpConfig(n=50, h=50)
    a, _ = dgp.generate(cfg, 1)
    b, _ = dgp.generate(base, 1)
    assert np.allclose(a.values, 10 + 2 * b.values, atol=1e-14)


def test_scale_sweep_cfg():
    base = dgp.preset("dgp4", 100)
    assert dgp.generate_scale_sweep_cfg(base, 0.6).h == 60
    assert dgp.generate_scale_sweep_cfg(base, 1.0).h == 100
    for lam in (0.4, 0.5, 1.1):
        with pytest.raises(DomainError):
            dgp.generate_scale_sweep_cfg(base, lam)


def test_text_round_trip():
    for cfg in [dgp.preset("dgp5", 400),
                dgp.DgpConfig(n=30, h=20, good_law=T3, xi=1.5, mu0=-2.0, sigma0=0.5,
                              varrho=0.1),
                dgp.generate_scale_sweep_cfg(dgp.preset("dgp4", 1000), 0.6)]:
        assert dgp.loads(dgp.dumps(cfg)) == cfg
    assert dgp.dumps(dgp.preset("dgp3", 25)) == "preset=dgp3\nn=25\n"


def test_loads_overrides_and_errors():
    cfg = dgp.loads("# design\npreset = dgp4\nn = 100\nxi = 5  # farther out\n")
    assert cfg.xi == 5.0 and cfg.h == 80
    for bad in ("h=3", "n=10\ncolour=red", "n=10\nnonsense", "preset=dgp1"):
        with pytest.raises(DomainError):
            dgp.loads(bad)
