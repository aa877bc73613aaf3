"""
Closed forms for the isotropic model (gamma = 1).

H commutes with Sz, so within S = N/2 the levels are

    E(M, h) = (2/N)(M - hN/2)^2 - (N/2)(1 + h^2)

and the ground state is the Dicke state |S, M0> with M0 = N/2 for h >= 1 and
M0 = N/2 - R[N(1 - h)/2] below, R rounding half away from zero. Adjacent
candidates cross at h_j = 1 - (2j + 1)/N.

The finite-N susceptibility is zero on every plateau and undefined at the
crossings, so it is not reported pointwise. In the thermodynamic limit
M0 ~ hN/2 gives chi = 1/(2(1 - h^2)) for h < 1 and 0 for h > 1, where the
state is fully polarized and independent of h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from lmg_fidelity.errors import CriticalPointError, DerivativeUndefinedError, ParameterError
from lmg_fidelity.services.fidelity import fidelity_blockdiag, lmg_blocks
from lmg_fidelity.services.observables import SpinMoments, TwoSpinRdm, two_spin_rdm

# |frac(x) - 1/2| below this counts as sitting on a crossing
CROSSING_TOL = 1e-9


@dataclass(frozen=True)
class IsoGround:
    m0: float
    energy: float
    plateau: Tuple[float, float]
    flips: int
    degenerate: bool


def _check(n_spins: int, field: float) -> None:
    if n_spins < 2:
        raise ParameterError("N must be >= 2")
    if not field >= 0:
        raise ParameterError(f"field must be >= 0, got {field!r}")


def iso_energy(n_spins: int, m: float, field: float) -> float:
    return (2.0 / n_spins) * (m - field * n_spins / 2.0) ** 2 - (n_spins / 2.0) * (1.0 + field * field)


def iso_m0(n_spins: int, field: float) -> IsoGround:
    _check(n_spins, field)
    if field >= 1.0:
        flips, degenerate = 0, False
    else:
        x = n_spins * (1.0 - field) / 2.0
        degenerate = abs(x - math.floor(x) - 0.5) < CROSSING_TOL
        flips = int(math.floor(x + 0.5))
    m0 = n_spins / 2.0 - flips
    lower = max(0.0, 1.0 - (2 * flips + 1) / n_spins)
    upper = math.inf if flips == 0 else 1.0 - (2 * flips - 1) / n_spins
    return IsoGround(
        m0=m0,
        energy=iso_energy(n_spins, m0, field),
        plateau=(lower, upper),
        flips=flips,
        degenerate=degenerate,
    )


def iso_crossings(n_spins: int) -> List[float]:
    """Crossing fields h_j >= 0 in ascending order."""
    if n_spins < 2:
        raise ParameterError("N must be >= 2")
    return [(n_spins - 2 * j - 1) / n_spins for j in range((n_spins - 1) // 2, -1, -1)]


def iso_chi_thermo(field: float) -> float:
    if not field >= 0:
        raise ParameterError(f"field must be >= 0, got {field!r}")
    if field == 1.0:
        raise CriticalPointError("susceptibility diverges at the critical field h = 1")
    if field > 1.0:
        return 0.0
    return 1.0 / (2.0 * (1.0 - field * field))


def iso_rdm(n_spins: int, m0: float) -> TwoSpinRdm:
    """Two-spin RDM of the Dicke state |N/2, m0>; diagonal, u = 0."""
    spin = n_spins / 2.0
    szz = m0 * m0
    transverse = spin * (spin + 1.0) - szz
    moments = SpinMoments(sz=m0, szz=szz, splus2_re=0.0, sxx=transverse / 2.0, syy=transverse / 2.0)
    return two_spin_rdm(moments, n_spins)


def iso_reduced_fidelity(n_spins: int, field1: float, field2: float) -> float:
    states = []
    for field in (field1, field2):
        ground = iso_m0(n_spins, field)
        if ground.degenerate:
            raise DerivativeUndefinedError(field, "level crossing")
        states.append(ground)
    if states[0].m0 == states[1].m0:
        return 1.0
    blocks = [lmg_blocks(iso_rdm(n_spins, ground.m0)) for ground in states]
    return fidelity_blockdiag(blocks[0], blocks[1])


__all__ = [
    "IsoGround",
    "iso_energy",
    "iso_m0",
    "iso_crossings",
    "iso_chi_thermo",
    "iso_rdm",
    "iso_reduced_fidelity",
]
