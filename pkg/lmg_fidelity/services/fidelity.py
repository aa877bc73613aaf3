"""
Uhlmann fidelity and reduced fidelity susceptibility for density matrices
that are block-diagonal in real symmetric 2x2 blocks.

For 2x2 positive semidefinite A, B:

    tr sqrt(A^1/2 B A^1/2) = sqrt(tr(AB) + 2 sqrt(det(AB)))

so the fidelity of rho = (+) rho_i against rho~ = (+) rho~_i is the sum of the
block terms, and chi = sum_i chi_i with, per block,

    regular   (tr != 0, det != 0): [(tr')^2 - 4 det' + (det)'^2 / det] / (4 tr)
    zero-det  (tr != 0, det == 0): [(tr')^2 - 4 det' + 2 (det)''] / (4 tr)
    zero-trace:                    0

Here det' is the determinant of the derivative block and (det)', (det)'' are
derivatives of the determinant. Trace-derivative terms cancel across blocks
because tr rho = 1 identically.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from lmg_fidelity.errors import (
    InternalConsistencyError,
    InvalidDensityError,
    MissingSecondDerivativeError,
    ParameterError,
    SingularSusceptibilityError,
)
from lmg_fidelity.models.enums import BlockCase
from lmg_fidelity.services.observables import RdmDerivatives, TwoSpinRdm
from lmg_fidelity.settings import settings

logger = logging.getLogger(__name__)

CHI_FLOOR = -1e-10
GLOBAL_TRACE_TOL = 1e-10


@dataclass(frozen=True)
class Block2x2:
    """Real symmetric block [[a, b], [b, d]]; also holds derivative blocks."""

    a: float
    d: float
    b: float

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.b

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.d]])


@dataclass(frozen=True)
class SusceptibilityResult:
    chi_total: float
    per_block: Tuple[float, ...]
    case_used: Tuple[BlockCase, ...]
    oracle_chi: Optional[float] = None
    oracle_delta: Optional[float] = None


def _clamp(value: float, what: str) -> float:
    if value >= 0.0:
        return value
    if value >= settings.numerics.clamp_floor:
        return 0.0
    raise InvalidDensityError(f"{what} is negative ({value!r}); not a density block")


def _require_density(block: Block2x2) -> None:
    _clamp(block.trace, "trace")
    _clamp(block.det, "determinant")


def block_fidelity(first: Block2x2, second: Block2x2) -> float:
    _require_density(first)
    _require_density(second)
    tr_ab = first.a * second.a + first.d * second.d + 2.0 * first.b * second.b
    det_ab = _clamp(first.det, "determinant") * _clamp(second.det, "determinant")
    return math.sqrt(_clamp(tr_ab + 2.0 * math.sqrt(det_ab), "tr(AB) + 2 sqrt(det AB)"))


def _check_unit_trace(blocks: Sequence[Block2x2]) -> None:
    total = sum(block.trace for block in blocks)
    if abs(total - 1.0) > GLOBAL_TRACE_TOL:
        raise InvalidDensityError(f"block traces sum to {total!r}, expected 1")


def fidelity_blockdiag(blocks: Sequence[Block2x2], others: Sequence[Block2x2]) -> float:
    if len(blocks) != len(others):
        raise ParameterError(f"block count mismatch: {len(blocks)} vs {len(others)}")
    _check_unit_trace(blocks)
    _check_unit_trace(others)
    return sum(block_fidelity(p, q) for p, q in zip(blocks, others))


def block_chi(
    block: Block2x2,
    first: Block2x2,
    second: Optional[Block2x2] = None,
) -> Tuple[float, BlockCase]:
    _require_density(block)
    num = settings.numerics
    trace = block.trace
    if trace <= num.eps_zero:
        return 0.0, BlockCase.ZERO_TRACE

    common = first.trace**2 - 4.0 * first.det
    det = block.det
    if det > num.eps_det_rel * trace * trace:
        ddet = first.a * block.d + block.a * first.d - 2.0 * block.b * first.b
        chi, case = (common + ddet * ddet / det) / (4.0 * trace), BlockCase.REGULAR
    else:
        if second is None:
            raise MissingSecondDerivativeError("zero-determinant block needs second derivatives")
        d2det = (
            second.a * block.d
            + 2.0 * first.a * first.d
            + block.a * second.d
            - 2.0 * first.b * first.b
            - 2.0 * block.b * second.b
        )
        chi, case = (common + 2.0 * d2det) / (4.0 * trace), BlockCase.ZERO_DET

    if chi < CHI_FLOOR:
        raise InternalConsistencyError(f"negative block susceptibility {chi!r} ({case.value})")
    return chi, case


def chi_blockdiag(
    blocks: Sequence[Block2x2],
    first_derivs: Sequence[Block2x2],
    second_derivs: Optional[Sequence[Block2x2]] = None,
) -> SusceptibilityResult:
    if len(blocks) != len(first_derivs) or (second_derivs is not None and len(second_derivs) != len(blocks)):
        raise ParameterError("blocks and their derivatives differ in count")
    _check_unit_trace(blocks)
    per_block = []
    cases = []
    for i, (block, first) in enumerate(zip(blocks, first_derivs)):
        second = second_derivs[i] if second_derivs is not None else None
        chi, case = block_chi(block, first, second)
        per_block.append(chi)
        cases.append(case)
    return SusceptibilityResult(chi_total=sum(per_block), per_block=tuple(per_block), case_used=tuple(cases))


def chi_diagonal(lambdas: Sequence[float], dlambdas: Sequence[float]) -> float:
    """chi = sum (lambda_i')^2 / (4 lambda_i) over the nonzero eigenvalues."""
    values = np.asarray(lambdas, dtype=float)
    slopes = np.asarray(dlambdas, dtype=float)
    if values.shape != slopes.shape:
        raise ParameterError("lambdas and dlambdas differ in length")
    eps = settings.numerics.eps_zero
    if np.any(values < -eps):
        raise InvalidDensityError("negative eigenvalue in a density spectrum")
    if abs(values.sum() - 1.0) > GLOBAL_TRACE_TOL:
        raise InvalidDensityError(f"eigenvalues sum to {values.sum()!r}, expected 1")
    chi = 0.0
    for value, slope in zip(values, slopes):
        if value < eps:
            if abs(slope) >= eps:
                raise SingularSusceptibilityError(
                    f"vanishing eigenvalue with slope {slope!r}; fidelity is not differentiable"
                )
            continue
        chi += slope * slope / (4.0 * value)
    return float(chi)


def chi_from_fidelity(fidelity: float, delta: float) -> float:
    """Finite-delta estimator -2 ln F / delta^2."""
    if delta == 0:
        raise ParameterError("delta must be nonzero")
    if fidelity <= 0:
        raise SingularSusceptibilityError("fidelity is zero (orthogonal states)")
    if fidelity > 1.0 + 1e-9:
        raise InvalidDensityError(f"fidelity {fidelity!r} exceeds 1")
    return -2.0 * math.log(min(fidelity, 1.0)) / (delta * delta)


def lmg_blocks(rdm: TwoSpinRdm) -> Tuple[Block2x2, Block2x2]:
    """Blocks of the two-spin RDM in the basis {|00>, |11>, |01>, |10>}."""
    return Block2x2(a=rdm.v_plus, d=rdm.v_minus, b=rdm.u), Block2x2(a=rdm.y, d=rdm.y, b=rdm.y)


def chi_lmg(rdm: TwoSpinRdm, derivs: RdmDerivatives) -> SusceptibilityResult:
    """Closed-form RFS of the two-spin RDM.

    The flip block [[y, y], [y, y]] has det = 0 and (det)'' = 0 identically,
    so it contributes y'^2 / (2y). The polarization block uses the regular
    formula while its determinant is nonzero and falls back to the
    zero-determinant branch otherwise.
    """
    num = settings.numerics
    d = derivs.first

    if rdm.y <= num.eps_zero:
        if abs(d.y) > num.eps_zero:
            raise SingularSusceptibilityError(f"y = {rdm.y!r} vanishes while y' = {d.y!r}")
        chi2, case2 = 0.0, BlockCase.ZERO_TRACE
    else:
        chi2, case2 = d.y * d.y / (2.0 * rdm.y), BlockCase.ZERO_DET

    trace1 = rdm.v_plus + rdm.v_minus
    det1 = rdm.v_plus * rdm.v_minus - rdm.u * rdm.u
    if trace1 <= num.eps_zero:
        chi1, case1 = 0.0, BlockCase.ZERO_TRACE
    elif det1 > num.eps_det_rel * trace1 * trace1:
        ddet = d.v_plus * rdm.v_minus + rdm.v_plus * d.v_minus - 2.0 * d.u * rdm.u
        chi1 = ((d.v_plus - d.v_minus) ** 2 + 4.0 * d.u * d.u + ddet * ddet / det1) / (4.0 * trace1)
        case1 = BlockCase.REGULAR
    else:
        if derivs.second is None:
            raise MissingSecondDerivativeError("singular polarization block needs second derivatives")
        block, first, second = (lmg_blocks(r)[0] for r in (rdm, d, derivs.second))
        chi1, case1 = block_chi(block, first, second)

    return SusceptibilityResult(chi_total=chi1 + chi2, per_block=(chi1, chi2), case_used=(case1, case2))


__all__ = [
    "Block2x2",
    "SusceptibilityResult",
    "block_fidelity",
    "fidelity_blockdiag",
    "block_chi",
    "chi_blockdiag",
    "chi_diagonal",
    "chi_from_fidelity",
    "lmg_blocks",
    "chi_lmg",
]
