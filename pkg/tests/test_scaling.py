import logging
import math

import numpy as np
import pytest

from lmg_fidelity.errors import AmbiguousPeakError, DerivativeUndefinedError, ParameterError, WindowTooCloseError
from lmg_fidelity.models import LmgParams
from lmg_fidelity.services.isotropic import iso_chi_thermo
from lmg_fidelity.services.scaling import (
    CollapseRow,
    PeakResult,
    chi_oracle,
    collapse_spread,
    collapse_table,
    evaluate_chi,
    find_peak,
    fit_peak_exponent,
    fit_thermo_exponent,
    sweep_chi,
)


def parabola(h: float) -> float:
    return 5.0 - (h - 0.8123) ** 2


def peak(n: int, chi_m: float, h_m: float = 0.95) -> PeakResult:
    return PeakResult(n_spins=n, gamma=0.5, h_m=h_m, chi_m=chi_m, bracket=1e-5)


def test_find_peak_recovers_parabola_maximum():
    result = find_peak(64, 0.0, chi_fn=parabola, tol_h=1e-5)
    assert abs(result.h_m - 0.8123) <= 1e-5
    assert result.chi_m == pytest.approx(5.0)
    assert result.bracket <= 1e-5


def test_find_peak_rejects_several_maxima():
    with pytest.raises(AmbiguousPeakError) as info:
        find_peak(64, 0.0, chi_fn=lambda h: math.cos(20.0 * h))
    assert len(info.value.maxima) > 1


def test_find_peak_rejects_monotone_bracket():
    with pytest.raises(AmbiguousPeakError):
        find_peak(64, 0.0, chi_fn=lambda h: h)


def test_find_peak_zooms_past_undefined_points():
    def chi(h: float) -> float:
        if h < 0.9:
            raise DerivativeUndefinedError(h)
        return 1.0 / (1.0 + 100.0 * (h - 0.92) ** 2)

    result = find_peak(64, 0.0, chi_fn=chi)
    assert result.h_m == pytest.approx(0.92, abs=1e-5)


def test_find_peak_routes_isotropic_requests():
    with pytest.raises(ParameterError):
        find_peak(64, 1.0, chi_fn=parabola)


def test_fit_peak_exponent_exact_line():
    peaks = [peak(n, 3.0 * n ** (2.0 / 3.0)) for n in (1024, 128, 256, 512)]
    fit = fit_peak_exponent(peaks)
    assert fit.slope == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(3.0), abs=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert [p[0] for p in fit.points] == sorted(p[0] for p in fit.points)


def test_fit_peak_exponent_validation():
    with pytest.raises(ParameterError):
        fit_peak_exponent([peak(128, 1.0), peak(256, 2.0)])
    with pytest.raises(ParameterError):
        fit_peak_exponent([peak(128, 1.0), peak(128, 2.0), peak(256, 3.0)])


def test_thermo_fit_of_simple_pole():
    fit = fit_thermo_exponent(4096, 0.5, window=(1.05, 1.4), chi_fn=lambda h: 2.5 / (h - 1.0))
    assert fit.slope == pytest.approx(-1.0, abs=1e-10)
    assert fit.intercept == pytest.approx(math.log(2.5), abs=1e-10)
    assert len(fit.points) == 16


def test_thermo_fit_below_critical_field():
    fit = fit_thermo_exponent(4096, 0.5, window=(0.9, 0.99), chi_fn=iso_chi_thermo)
    assert fit.slope == pytest.approx(-1.0, abs=0.05)


def test_thermo_fit_curvature_guard():
    with pytest.raises(WindowTooCloseError) as info:
        fit_thermo_exponent(4096, 0.5, window=(1.05, 1.4), chi_fn=lambda h: math.exp(-3.0 * math.log(h - 1.0) ** 2))
    assert info.value.curvature == pytest.approx(6.0)


def test_thermo_window_must_exclude_critical_field():
    with pytest.raises(ParameterError):
        fit_thermo_exponent(4096, 0.5, window=(0.95, 1.05), chi_fn=iso_chi_thermo)


def test_sweep_rows():
    rows = sweep_chi(16, 0.5, 1.05, 1.5, 5, workers=2)
    assert [r.h for r in rows] == pytest.approx(np.linspace(1.05, 1.5, 5).tolist())
    for r in rows:
        assert not r.degenerate
        assert r.chi > 0
        assert r.chi == pytest.approx(r.chi_block1 + r.chi_block2, abs=1e-10)
        assert r.chi_oracle == pytest.approx(r.chi, rel=5e-3)
        assert r.gap > 0


def test_sweep_marks_undefined_points():
    rows = sweep_chi(8, 0.0, 0.0, 1.2, 3, with_oracle=False, workers=1)
    assert len(rows) == 3
    first = rows[0]
    assert first.degenerate
    assert math.isnan(first.chi) and math.isnan(first.chi_block1) and math.isnan(first.chi_oracle)
    assert math.isfinite(first.energy)
    assert math.isnan(rows[-1].chi_oracle)


def test_sweep_routes_isotropic_requests():
    with pytest.raises(ParameterError):
        sweep_chi(8, 1.0, 1.1, 1.2, 2)
    assert len(sweep_chi(8, 0.999, 1.1, 1.2, 2, with_oracle=False)) == 2


def test_sweep_is_deterministic_across_worker_counts():
    serial = sweep_chi(12, 0.3, 1.1, 1.4, 4, workers=1)
    parallel = sweep_chi(12, 0.3, 1.1, 1.4, 4, workers=4)
    assert serial == parallel


def test_evaluate_chi_against_oracle():
    result, gs = evaluate_chi(LmgParams(n_spins=64, gamma=0.25, field=1.2))
    assert result.oracle_delta == 1e-3
    assert result.chi_total == pytest.approx(result.oracle_chi, rel=5e-3)
    assert not gs.degenerate


def test_collapse_table_with_known_peaks():
    peaks = {16: PeakResult(16, 0.5, 1.2, 1.0, 0.0), 32: PeakResult(32, 0.5, 1.25, 1.0, 0.0)}
    rows = collapse_table([32, 16], 0.5, x_range=(-0.5, 0.5), points=3, peaks=peaks)
    assert [r.n_spins for r in rows] == [16, 16, 16, 32, 32, 32]
    for r in rows:
        chi, _ = evaluate_chi(LmgParams(n_spins=r.n_spins, gamma=0.5, field=r.h), with_oracle=False)
        assert r.h == pytest.approx(peaks[r.n_spins].h_m + r.x * r.n_spins ** (-2.0 / 3.0))
        assert r.q == pytest.approx(1.0 / chi.chi_total)


def test_collapse_table_skips_negative_fields():
    peaks = {16: PeakResult(16, 0.5, 0.05, 1.0, 0.0)}
    rows = collapse_table([16], 0.5, x_range=(-1.0, 1.0), points=5, peaks=peaks)
    assert all(r.h > 0 for r in rows)
    assert len(rows) < 5


def test_collapse_spread():
    rows = [
        CollapseRow(128, 0.0, 0.9, 1.0),
        CollapseRow(256, 0.0, 0.95, 1.0),
        CollapseRow(128, 0.5, 0.95, 1.2),
        CollapseRow(256, 0.5, 0.97, 1.5),
        CollapseRow(512, 0.7, 0.99, 9.0),
    ]
    assert collapse_spread(rows) == pytest.approx(0.25)
    with pytest.raises(ParameterError):
        collapse_spread(rows[-1:])


def test_oracle_window_below_zero_is_undefined():
    with pytest.raises(DerivativeUndefinedError):
        chi_oracle(LmgParams(n_spins=4, gamma=0.5, field=0.0004))


def test_sweep_near_zero_field_drops_only_the_oracle(caplog):
    with caplog.at_level(logging.WARNING):
        rows = sweep_chi(4, 0.5, 0.0004, 0.0015, 2, workers=1)
    near_zero, inside = rows
    assert not near_zero.degenerate
    assert math.isfinite(near_zero.chi)
    assert math.isnan(near_zero.chi_oracle)
    assert math.isfinite(inside.chi_oracle)
    assert not [r for r in caplog.records if r.levelno >= logging.ERROR]


@pytest.mark.parametrize("gamma,h", [(0.3, 1.2), (0.0, 0.9), (-0.5, 1.4)])
def test_chi_scales_with_coupling(gamma, h):
    base, _ = evaluate_chi(LmgParams(n_spins=64, gamma=gamma, field=h), with_oracle=False)
    scaled, _ = evaluate_chi(LmgParams(n_spins=64, gamma=gamma, field=2.0 * h, lam=2.0), with_oracle=False)
    assert 4.0 * scaled.chi_total == pytest.approx(base.chi_total, rel=1e-6)
