import pytest
from pydantic import ValidationError

from lmg_fidelity.models import LmgParams
from lmg_fidelity.settings import CONFIG_PATH, NumericsConfig, Settings, load_settings
from lmg_fidelity.utils.cache import GroundStateCache


def write_config(tmp_path, body: str):
    path = tmp_path / "config.yaml"
    path.write_text(body, encoding="utf-8")
    return path


def test_bundled_config_loads():
    assert CONFIG_PATH.exists()
    s = load_settings()
    assert s.numerics.oracle_delta == 1e-3
    assert s.numerics.prescan_points == 32
    assert s.numerics.collapse_nu == pytest.approx(2.0 / 3.0)


def test_yaml_overrides(tmp_path):
    path = write_config(tmp_path, "numerics:\n  deriv_step: 5.0e-4\n  peak_h_hi: 1.5\n")
    s = load_settings(path)
    assert s.numerics.deriv_step == 5e-4
    assert s.numerics.peak_h_hi == 1.5
    assert s.numerics.eigen_tol == 1e-14


def test_invalid_yaml_values_rejected(tmp_path):
    path = write_config(tmp_path, "numerics:\n  peak_h_lo: 1.4\n  peak_h_hi: 1.3\n")
    with pytest.raises(ValidationError):
        load_settings(path)
    with pytest.raises(ValidationError):
        NumericsConfig(eps_zero=0.0)


def test_missing_config_uses_defaults(tmp_path):
    s = load_settings(tmp_path / "absent.yaml")
    assert s.numerics == NumericsConfig()


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("LMG_MAX_WORKERS", "3")
    monkeypatch.setenv("LMG_LOG_LEVEL", "DEBUG")
    s = Settings()
    assert s.MAX_WORKERS == 3
    assert s.LOG_LEVEL == "DEBUG"


def test_env_rejects_zero_workers(monkeypatch):
    monkeypatch.setenv("LMG_MAX_WORKERS", "0")
    with pytest.raises(ValidationError):
        Settings()


def test_params_validation():
    p = LmgParams(n_spins=8, gamma=0.5, field=1.0, **{"lambda": 2.0})
    assert p.lam == 2.0
    assert p.spin == 4.0
    assert p.at(1.5).field == 1.5
    for bad in ({"n_spins": 1}, {"gamma": 1.5}, {"field": -0.1}, {"lam": 0.0}):
        kwargs = {"n_spins": 8, "gamma": 0.5, "field": 1.0, **bad}
        with pytest.raises(ValidationError):
            LmgParams(**kwargs)


def test_params_are_frozen():
    p = LmgParams(n_spins=8, gamma=0.5, field=1.0)
    with pytest.raises(ValidationError):
        p.field = 2.0


def test_cache_hits_and_eviction():
    cache = GroundStateCache(maxsize=2)
    a, b, c = (LmgParams(n_spins=8, gamma=0.5, field=h) for h in (1.1, 1.2, 1.3))
    first = cache.get(a)
    assert cache.get(a) is first
    assert (cache.hits, cache.misses) == (1, 1)
    cache.get(b)
    cache.get(c)
    assert len(cache) == 2
    cache.get(a)
    assert cache.misses == 4


def test_cache_disabled():
    cache = GroundStateCache(maxsize=0)
    cache.get(LmgParams(n_spins=8, gamma=0.5, field=1.1))
    assert len(cache) == 0
