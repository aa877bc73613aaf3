import math

import numpy as np
import pytest

from lmg_fidelity.errors import (
    InvalidDensityError,
    MissingSecondDerivativeError,
    ParameterError,
    SingularSusceptibilityError,
)
from lmg_fidelity.models import BlockCase, LmgParams
from lmg_fidelity.services.fidelity import (
    Block2x2,
    block_chi,
    block_fidelity,
    chi_blockdiag,
    chi_diagonal,
    chi_from_fidelity,
    chi_lmg,
    fidelity_blockdiag,
    lmg_blocks,
)
from lmg_fidelity.services.isotropic import iso_rdm
from lmg_fidelity.services.observables import RdmDerivatives, TwoSpinRdm, rdm_at, rdm_derivatives

SEED = 7


def diag(a, d) -> Block2x2:
    return Block2x2(a=a, d=d, b=0.0)


def flip_block(y) -> Block2x2:
    return Block2x2(a=y, d=y, b=y)


def as_block(m: np.ndarray) -> Block2x2:
    return Block2x2(a=float(m[0, 0]), d=float(m[1, 1]), b=float(m[0, 1]))


class SmoothFamily:
    """rho(h) = (+)_i W_i W_i^T / T with W_i = 2I + 0.3 (C1 sin h + C2 cos h)."""

    def __init__(self, seed=SEED, blocks=2):
        rng = np.random.default_rng(seed)
        self.c1 = rng.normal(size=(blocks, 2, 2))
        self.c2 = rng.normal(size=(blocks, 2, 2))

    def _w(self, h):
        w = 2.0 * np.eye(2) + 0.3 * (self.c1 * math.sin(h) + self.c2 * math.cos(h))
        dw = 0.3 * (self.c1 * math.cos(h) - self.c2 * math.sin(h))
        return w, dw, -(w - 2.0 * np.eye(2))

    def raw(self, h):
        w, dw, d2w = self._w(h)
        wt = np.transpose(w, (0, 2, 1))
        dwt = np.transpose(dw, (0, 2, 1))
        d2wt = np.transpose(d2w, (0, 2, 1))
        b = w @ wt
        b1 = dw @ wt + w @ dwt
        b2 = d2w @ wt + 2.0 * dw @ dwt + w @ d2wt
        return b, b1, b2

    def blocks(self, h):
        b, b1, b2 = self.raw(h)
        t = np.trace(b, axis1=1, axis2=2).sum()
        t1 = np.trace(b1, axis1=1, axis2=2).sum()
        t2 = np.trace(b2, axis1=1, axis2=2).sum()
        rho = b / t
        rho1 = b1 / t - b * t1 / t**2
        rho2 = b2 / t - 2.0 * b1 * t1 / t**2 - b * t2 / t**2 + 2.0 * b * t1**2 / t**3
        return [as_block(m) for m in rho], [as_block(m) for m in rho1], [as_block(m) for m in rho2]

    def oracle(self, h, delta):
        lo, _, _ = self.blocks(h - delta / 2)
        hi, _, _ = self.blocks(h + delta / 2)
        return chi_from_fidelity(fidelity_blockdiag(lo, hi), delta)


def test_block_fidelity_known_values():
    assert block_fidelity(diag(0.5, 0.5), diag(0.5, 0.5)) == pytest.approx(1.0)
    assert block_fidelity(diag(1.0, 0.0), diag(0.0, 1.0)) == pytest.approx(0.0)
    assert block_fidelity(diag(0.5, 0.5), diag(0.9, 0.1)) == pytest.approx(math.sqrt(0.8))


def test_block_fidelity_rejects_invalid_density():
    with pytest.raises(InvalidDensityError):
        block_fidelity(Block2x2(a=0.5, d=0.5, b=0.6), diag(0.5, 0.5))


def test_block_fidelity_clamps_roundoff():
    slightly_negative = Block2x2(a=0.5, d=0.5, b=math.sqrt(0.25 + 1e-14))
    assert block_fidelity(slightly_negative, slightly_negative) == pytest.approx(1.0)


def test_fidelity_blockdiag_identical_lists():
    p = [Block2x2(a=0.3, d=0.2, b=0.1), Block2x2(a=0.25, d=0.25, b=0.05)]
    assert fidelity_blockdiag(p, p) == pytest.approx(1.0)


def test_fidelity_blockdiag_disjoint_support_is_zero():
    zero = diag(0.0, 0.0)
    assert fidelity_blockdiag([diag(0.5, 0.5), zero], [zero, diag(0.5, 0.5)]) == 0.0


def test_fidelity_blockdiag_validation():
    with pytest.raises(ParameterError):
        fidelity_blockdiag([diag(0.5, 0.5)], [diag(0.5, 0.5), diag(0.0, 0.0)])
    with pytest.raises(InvalidDensityError):
        fidelity_blockdiag([diag(0.5, 0.6)], [diag(0.5, 0.5)])


def test_block_chi_constant_block():
    chi, case = block_chi(diag(0.6, 0.4), diag(0.0, 0.0))
    assert chi == 0.0
    assert case is BlockCase.REGULAR


def test_block_chi_flip_block():
    # y(h) = h (1 - h) at h = 0.25
    chi, case = block_chi(flip_block(0.1875), flip_block(0.5), flip_block(-2.0))
    assert case is BlockCase.ZERO_DET
    assert chi == pytest.approx(0.5**2 / (2 * 0.1875))


def test_block_chi_diagonal_family():
    chi, case = block_chi(diag(0.5, 0.5), diag(1.0, -1.0))
    assert case is BlockCase.REGULAR
    assert chi == pytest.approx(1.0)


def test_block_chi_needs_second_derivative_when_singular():
    with pytest.raises(MissingSecondDerivativeError):
        block_chi(flip_block(0.2), flip_block(0.1))


def test_block_chi_zero_trace():
    assert block_chi(diag(0.0, 0.0), diag(0.3, 0.1)) == (0.0, BlockCase.ZERO_TRACE)


def test_chi_blockdiag_constant_blocks():
    blocks = [diag(0.3, 0.2), diag(0.25, 0.25)]
    result = chi_blockdiag(blocks, [diag(0.0, 0.0)] * 2)
    assert result.chi_total == 0.0
    assert result.case_used == (BlockCase.REGULAR, BlockCase.REGULAR)


def test_chi_diagonal_known_values():
    assert chi_diagonal([0.5, 0.5], [1.0, -1.0]) == pytest.approx(1.0)
    assert chi_diagonal([0.36, 0.64], [1.2, -1.2]) == pytest.approx(1.5625)
    assert chi_diagonal([0.2, 0.8], [0.0, 0.0]) == 0.0
    assert chi_diagonal([1.0, 0.0], [0.0, 0.0]) == 0.0


def test_chi_diagonal_singular():
    with pytest.raises(SingularSusceptibilityError):
        chi_diagonal([1.0, 0.0], [-0.1, 0.1])
    with pytest.raises(InvalidDensityError):
        chi_diagonal([0.5, 0.6], [0.0, 0.0])


def test_chi_from_fidelity():
    assert chi_from_fidelity(1.0, 1e-3) == 0.0
    assert chi_from_fidelity(math.exp(-0.5e-4), 0.01) == pytest.approx(1.0)
    with pytest.raises(SingularSusceptibilityError):
        chi_from_fidelity(0.0, 1e-3)
    with pytest.raises(ParameterError):
        chi_from_fidelity(0.9, 0.0)


def test_smooth_family_matches_extrapolated_oracle():
    family = SmoothFamily()
    h = 0.7
    blocks, first, second = family.blocks(h)
    result = chi_blockdiag(blocks, first, second)
    delta = 1e-2
    extrapolated = (4.0 * family.oracle(h, delta / 2) - family.oracle(h, delta)) / 3.0
    assert result.chi_total > 0
    assert result.chi_total == pytest.approx(extrapolated, rel=1e-6)
    assert result.chi_total == pytest.approx(sum(result.per_block), abs=1e-15)


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_smooth_families_are_non_negative(seed):
    family = SmoothFamily(seed=seed)
    for h in (0.1, 1.0, 2.5):
        assert chi_blockdiag(*family.blocks(h)).chi_total >= -1e-10


def test_chi_lmg_equals_blockdiag_on_lmg_inputs():
    p = LmgParams(n_spins=128, gamma=0.0, field=0.9)
    d = rdm_derivatives(p, want_second=True)
    closed = chi_lmg(d.value, d)
    generic = chi_blockdiag(lmg_blocks(d.value), lmg_blocks(d.first), lmg_blocks(d.second))
    assert closed.chi_total == pytest.approx(generic.chi_total, rel=1e-10, abs=1e-12)
    assert closed.case_used == generic.case_used == (BlockCase.REGULAR, BlockCase.ZERO_DET)
    assert closed.chi_total == pytest.approx(sum(closed.per_block), abs=1e-10)


def test_lmg_fidelity_close_to_one_for_small_step():
    p = LmgParams(n_spins=128, gamma=0.0, field=0.9)
    _, here = rdm_at(p)
    _, there = rdm_at(p.at(0.901))
    f = fidelity_blockdiag(lmg_blocks(here), lmg_blocks(there))
    assert 1 - 1e-4 < f < 1


def test_chi_lmg_polarized_plateau_is_zero():
    polarized = iso_rdm(10, 5.0)
    still = TwoSpinRdm(0.0, 0.0, 0.0, 0.0)
    derivs = RdmDerivatives(value=polarized, first=still, second=still, step_used=1e-3, estimated_error=0.0)
    result = chi_lmg(polarized, derivs)
    assert result.chi_total == 0.0
    assert result.case_used == (BlockCase.ZERO_DET, BlockCase.ZERO_TRACE)

