"""
Lowest eigenpair of a symmetric tridiagonal sector matrix and the global
ground state across both parity sectors.

Eigenvalues come from Sturm-sequence bisection (LAPACK stebz) and the
eigenvector from inverse iteration (stein), both via
``scipy.linalg.eigh_tridiagonal``. Amplitudes are real; the component of
largest magnitude is made positive so repeated runs agree bit for bit.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal, eigvalsh

from lmg_fidelity.errors import NumericalFailureError
from lmg_fidelity.models.enums import ParitySector
from lmg_fidelity.models.params import LmgParams
from lmg_fidelity.services.hamiltonian import SectorMatrix, build_full_matrix, build_sector
from lmg_fidelity.settings import settings

logger = logging.getLogger(__name__)

RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class GroundState:
    energy: float
    amplitudes: np.ndarray
    m_values: np.ndarray
    sector: ParitySector
    gap_within_sector: float
    gap_between_sectors: float
    degenerate: bool

    @property
    def gap(self) -> float:
        """Distance to the first excited level of either sector."""
        return min(self.gap_within_sector, self.gap_between_sectors)


def _fix_phase(vector: np.ndarray) -> np.ndarray:
    vector = vector / np.linalg.norm(vector)
    if vector[int(np.argmax(np.abs(vector)))] < 0:
        vector = -vector
    return vector


def _residual(matrix: SectorMatrix, energy: float, vector: np.ndarray) -> float:
    return float(np.max(np.abs(matrix.matvec(vector) - energy * vector)))


def _lowest_levels(matrix: SectorMatrix, tol: float, levels: int) -> Tuple[np.ndarray, np.ndarray]:
    """Smallest ``levels`` eigenvalues and the eigenvector of the smallest one."""
    if matrix.order == 1:
        return matrix.diagonal[:1].copy(), np.ones(1)
    levels = min(levels, matrix.order)
    abstol = tol * max(1.0, matrix.inf_norm())
    residual = math.inf
    for attempt in range(settings.numerics.eigen_restarts + 1):
        try:
            energies, vectors = eigh_tridiagonal(
                matrix.diagonal,
                matrix.offdiagonal,
                select="i",
                select_range=(0, levels - 1),
                lapack_driver="stebz",
                tol=abstol,
            )
        except LinAlgError as exc:
            logger.debug("stein failed on attempt %d (order %d): %s", attempt, matrix.order, exc)
            abstol /= 10.0
            continue
        vector = _fix_phase(vectors[:, 0])
        residual = _residual(matrix, float(energies[0]), vector)
        if residual <= RESIDUAL_RTOL * max(1.0, abs(float(energies[0]))):
            return energies, vector
        logger.debug("residual %.3e too large on attempt %d; tightening bisection", residual, attempt)
        abstol /= 10.0
    raise NumericalFailureError(f"inverse iteration did not converge for sector of order {matrix.order}", residual)


def lowest_eigenpair(matrix: SectorMatrix, tol: Optional[float] = None) -> Tuple[float, np.ndarray]:
    tol = settings.numerics.eigen_tol if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be > 0")
    energies, vector = _lowest_levels(matrix, tol, 1)
    return float(energies[0]), vector


def ground_state(params: LmgParams, tol: Optional[float] = None) -> GroundState:
    """Solve both parity sectors and keep the lower state.

    Ties within the degeneracy threshold go to the sector containing M = S.
    """
    tol = settings.numerics.eigen_tol if tol is None else tol
    solved = {}
    for sector in (ParitySector.TOP, ParitySector.OTHER):
        matrix = build_sector(params, sector)
        energies, vector = _lowest_levels(matrix, tol, 2)
        gap = float(energies[1] - energies[0]) if len(energies) > 1 else math.inf
        solved[sector] = (float(energies[0]), vector, matrix.m_values, gap)

    e_top = solved[ParitySector.TOP][0]
    e_other = solved[ParitySector.OTHER][0]
    threshold = settings.numerics.degeneracy_rtol * max(1.0, abs(min(e_top, e_other)))
    if e_other < e_top - threshold:
        winner, loser = ParitySector.OTHER, ParitySector.TOP
    else:
        winner, loser = ParitySector.TOP, ParitySector.OTHER

    energy, vector, m_values, gap_within = solved[winner]
    gap_between = abs(solved[loser][0] - energy)
    degenerate = bool(min(gap_within, gap_between) < settings.numerics.degeneracy_rtol * max(1.0, abs(energy)))
    if degenerate:
        logger.debug("degenerate ground state at %s (gaps %.3e, %.3e)", params, gap_within, gap_between)
    return GroundState(
        energy=energy,
        amplitudes=vector,
        m_values=m_values,
        sector=winner,
        gap_within_sector=gap_within,
        gap_between_sectors=gap_between,
        degenerate=degenerate,
    )


def dense_spectrum(params: LmgParams) -> np.ndarray:
    """Ascending spectrum of the unsplit matrix; test oracle for small N."""
    return eigvalsh(build_full_matrix(params))


__all__ = ["GroundState", "lowest_eigenpair", "ground_state", "dense_spectrum"]
