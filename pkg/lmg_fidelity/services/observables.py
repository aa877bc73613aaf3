"""
Collective spin moments, the two-spin reduced density matrix and its
h-derivatives.

In the standard basis {|00>, |01>, |10>, |11>} the two-spin RDM is

    [[v+, 0, 0, u], [0, y, y, 0], [0, y, y, 0], [u, 0, 0, v-]]

with the exact finite-N elements

    v+- = (N^2 - 2N + 4<Sz^2> +- 4<Sz>(N-1)) / (4N(N-1))
    y   = (N^2 - 4<Sz^2>) / (4N(N-1))
    u   = <Sx^2 - Sy^2> / (N(N-1))

For large N these reduce to v+- = 1/4 + <Sz^2>/N^2 +- <Sz>/N,
y = 1/4 - <Sz^2>/N^2 and u = <Sx^2 - Sy^2>/N^2; only the exact forms are
used here. The RDM does not depend on which pair of spins is picked.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from lmg_fidelity.errors import (
    DerivativeUndefinedError,
    InternalConsistencyError,
    ParameterError,
)
from lmg_fidelity.models.params import LmgParams
from lmg_fidelity.services.eigensolver import GroundState, ground_state
from lmg_fidelity.services.hamiltonian import ladder_pair
from lmg_fidelity.settings import settings
from lmg_fidelity.utils.cache import GroundStateCache

logger = logging.getLogger(__name__)

TRACE_TOL = 1e-12
POSITIVITY_FLOOR = -1e-12
TRACE_DERIVATIVE_TOL = 1e-8

# 5-point central stencil offsets (in units of the step)
STENCIL = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class SpinMoments:
    sz: float
    szz: float
    splus2_re: float
    sxx: float
    syy: float


@dataclass(frozen=True)
class TwoSpinRdm:
    """Independent RDM elements; also used for their derivatives."""

    v_plus: float
    v_minus: float
    y: float
    u: float

    @property
    def trace(self) -> float:
        return self.v_plus + self.v_minus + 2.0 * self.y

    def as_array(self) -> np.ndarray:
        return np.array([self.v_plus, self.v_minus, self.y, self.u])

    @classmethod
    def from_array(cls, values: np.ndarray) -> "TwoSpinRdm":
        return cls(*(float(v) for v in values))


@dataclass(frozen=True)
class RdmDerivatives:
    value: TwoSpinRdm
    first: TwoSpinRdm
    second: Optional[TwoSpinRdm]
    step_used: float
    estimated_error: float


def spin_moments(gs: GroundState, n_spins: int) -> SpinMoments:
    amplitudes = np.asarray(gs.amplitudes, dtype=float)
    m = np.asarray(gs.m_values, dtype=float)
    if amplitudes.shape != m.shape:
        raise ParameterError("amplitudes and m_values differ in length")
    weights = amplitudes**2
    if abs(weights.sum() - 1.0) > 1e-10:
        raise ParameterError(f"ground state is not normalized (norm^2 = {weights.sum():.15g})")

    spin = n_spins / 2.0
    sz = float(np.dot(m, weights))
    szz = float(np.dot(m**2, weights))
    # amplitudes are real, so <S+^2> = <S-^2> = <Sx^2 - Sy^2>
    splus2 = float(np.dot(amplitudes[1:] * amplitudes[:-1], ladder_pair(spin, m[:-1])))
    transverse = spin * (spin + 1.0) - szz
    return SpinMoments(
        sz=sz,
        szz=szz,
        splus2_re=splus2,
        sxx=0.5 * (transverse + splus2),
        syy=0.5 * (transverse - splus2),
    )


def two_spin_rdm(moments: SpinMoments, n_spins: int) -> TwoSpinRdm:
    if n_spins < 2:
        raise ParameterError("two-spin RDM needs at least two spins")
    n = float(n_spins)
    denom = 4.0 * n * (n - 1.0)
    base = n * n - 2.0 * n + 4.0 * moments.szz
    shift = 4.0 * moments.sz * (n - 1.0)
    rdm = TwoSpinRdm(
        v_plus=(base + shift) / denom,
        v_minus=(base - shift) / denom,
        y=(n * n - 4.0 * moments.szz) / denom,
        u=moments.splus2_re / (n * (n - 1.0)),
    )
    if abs(rdm.trace - 1.0) > TRACE_TOL:
        raise InternalConsistencyError(f"RDM trace {rdm.trace!r} differs from 1")
    det1 = rdm.v_plus * rdm.v_minus - rdm.u**2
    if min(rdm.v_plus, rdm.v_minus, rdm.y, det1) < POSITIVITY_FLOOR:
        raise InternalConsistencyError(f"RDM is not positive semidefinite: {rdm}")
    return rdm


Solver = Callable[[LmgParams], GroundState]


def _solver(cache: Optional[GroundStateCache], tol: Optional[float]) -> Solver:
    if cache is not None:
        return lambda p: cache.get(p, tol)
    return lambda p: ground_state(p, tol)


def rdm_at(
    params: LmgParams,
    cache: Optional[GroundStateCache] = None,
    tol: Optional[float] = None,
) -> Tuple[GroundState, TwoSpinRdm]:
    gs = _solver(cache, tol)(params)
    return gs, two_spin_rdm(spin_moments(gs, params.n_spins), params.n_spins)


def derivative_step(field: float, base: Optional[float] = None) -> float:
    """Stencil width: the base step, or the critical step close to h_c = 1."""
    num = settings.numerics
    base = num.deriv_step if base is None else base
    if abs(field - 1.0) < num.critical_window:
        return min(base, num.critical_step)
    return base


def rdm_derivatives(
    params: LmgParams,
    step: Optional[float] = None,
    want_second: bool = False,
    cache: Optional[GroundStateCache] = None,
    tol: Optional[float] = None,
) -> RdmDerivatives:
    """d/dh (and optionally d^2/dh^2) of the RDM elements by a 5-point stencil.

    Near h = 0 the step is shrunk so the stencil stays at h >= 0.
    """
    step = settings.numerics.deriv_step if step is None else step
    if step <= 0:
        raise ParameterError("derivative step must be > 0")
    h = params.field
    if h - 2.0 * step < 0.0:
        if h == 0.0:
            raise DerivativeUndefinedError(h, "stencil would cross h = 0")
        step = h / 2.0

    solve = _solver(cache, tol)
    states = []
    for k in STENCIL:
        point = params if k == 0 else params.at(h + k * step)
        gs = solve(point)
        if gs.degenerate:
            raise DerivativeUndefinedError(point.field)
        states.append(gs)
    if len({gs.sector for gs in states}) > 1:
        raise DerivativeUndefinedError(h, "ground-state parity changes inside the stencil")

    samples = np.array(
        [two_spin_rdm(spin_moments(gs, params.n_spins), params.n_spins).as_array() for gs in states]
    )
    first = (samples[0] - 8.0 * samples[1] + 8.0 * samples[3] - samples[4]) / (12.0 * step)
    first3 = (samples[3] - samples[1]) / (2.0 * step)
    second = None
    if want_second:
        second = TwoSpinRdm.from_array(
            (-samples[0] + 16.0 * samples[1] - 30.0 * samples[2] + 16.0 * samples[3] - samples[4])
            / (12.0 * step * step)
        )

    result = RdmDerivatives(
        value=TwoSpinRdm.from_array(samples[2]),
        first=TwoSpinRdm.from_array(first),
        second=second,
        step_used=step,
        estimated_error=float(np.max(np.abs(first - first3))),
    )
    if abs(result.first.trace) > TRACE_DERIVATIVE_TOL:
        raise InternalConsistencyError(f"trace derivative {result.first.trace!r} differs from 0")
    return result


def global_overlap(
    params: LmgParams,
    delta: float,
    cache: Optional[GroundStateCache] = None,
    tol: Optional[float] = None,
) -> float:
    """|<phi0(h)|phi0(h+delta)>|; states from different parity sectors are orthogonal."""
    solve = _solver(cache, tol)
    here = solve(params)
    there = here if delta == 0 else solve(params.at(params.field + delta))
    for point, gs in ((params.field, here), (params.field + delta, there)):
        if gs.degenerate:
            raise DerivativeUndefinedError(point)
    if here.sector is not there.sector:
        return 0.0
    return abs(float(np.dot(here.amplitudes, there.amplitudes)))


__all__ = [
    "SpinMoments",
    "TwoSpinRdm",
    "RdmDerivatives",
    "spin_moments",
    "two_spin_rdm",
    "rdm_at",
    "derivative_step",
    "rdm_derivatives",
    "global_overlap",
]
