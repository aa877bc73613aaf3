import math

import numpy as np
import pytest

from lmg_fidelity.errors import CriticalPointError, DerivativeUndefinedError, ParameterError
from lmg_fidelity.services.isotropic import (
    iso_chi_thermo,
    iso_crossings,
    iso_energy,
    iso_m0,
    iso_reduced_fidelity,
)


def brute_force_m0(n: int, h: float) -> float:
    m = n / 2.0 - np.arange(n + 1)
    return float(m[np.argmin([iso_energy(n, x, h) for x in m])])


def test_m0_known_values():
    assert iso_m0(10, 1.3).m0 == 5
    assert iso_m0(10, 0.75).m0 == 4
    assert not iso_m0(10, 0.75).degenerate


def test_m0_at_crossing_is_flagged():
    ground = iso_m0(10, 0.9)
    assert ground.degenerate
    assert ground.m0 in (4, 5)


def test_plateau_bounds():
    ground = iso_m0(10, 0.75)
    assert ground.plateau == pytest.approx((0.7, 0.9))
    assert iso_m0(10, 1.3).plateau == (pytest.approx(0.9), math.inf)


def test_energy_closed_form():
    ground = iso_m0(10, 0.75)
    assert ground.energy == pytest.approx(0.2 * (4 - 3.75) ** 2 - 5 * (1 + 0.75**2))


def test_m0_minimizes_energy():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(2, 201))
        h = float(rng.uniform(0.0, 1.5))
        ground = iso_m0(n, h)
        if ground.degenerate:
            continue
        assert ground.m0 == brute_force_m0(n, h)


def test_crossings():
    assert iso_crossings(10) == [0.1, 0.3, 0.5, 0.7, 0.9]
    assert iso_crossings(4) == [0.25, 0.75]
    assert iso_crossings(2) == [0.5]
    assert iso_crossings(3)[0] == 0.0


def test_m0_constant_between_crossings():
    n = 10
    edges = [0.0] + iso_crossings(n) + [1.5]
    for lo, hi in zip(edges, edges[1:]):
        grid = np.linspace(lo, hi, 9)[1:-1]
        assert len({iso_m0(n, float(h)).m0 for h in grid}) == 1


def test_chi_thermo():
    assert iso_chi_thermo(0.0) == 0.5
    assert iso_chi_thermo(0.6) == pytest.approx(0.78125, abs=1e-15)
    assert iso_chi_thermo(1.2) == 0.0
    with pytest.raises(CriticalPointError):
        iso_chi_thermo(1.0)
    with pytest.raises(ParameterError):
        iso_chi_thermo(-0.1)


def test_reduced_fidelity_on_plateau():
    assert iso_reduced_fidelity(10, 0.95, 1.05) == 1.0
    assert iso_reduced_fidelity(10, 0.42, 0.42) == 1.0


def test_reduced_fidelity_across_crossing():
    assert iso_reduced_fidelity(10, 0.85, 0.95) == pytest.approx(math.sqrt(0.8))


@pytest.mark.parametrize("n", [4, 10, 50])
def test_reduced_fidelity_drops_only_at_crossings(n):
    crossings = iso_crossings(n)
    for h in crossings:
        if h == 0.0:
            continue
        assert iso_reduced_fidelity(n, h - 1e-3, h + 1e-3) < 1.0
    edges = [0.0] + crossings + [1.5]
    for lo, hi in zip(edges, edges[1:]):
        a, b = lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)
        assert iso_reduced_fidelity(n, a, b) == 1.0


def test_reduced_fidelity_rejects_crossing():
    with pytest.raises(DerivativeUndefinedError):
        iso_reduced_fidelity(10, 0.9, 0.95)


def test_invalid_inputs():
    with pytest.raises(ParameterError):
        iso_m0(1, 0.5)
    with pytest.raises(ParameterError):
        iso_m0(10, -0.5)
