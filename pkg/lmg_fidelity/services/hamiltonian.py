"""
LMG Hamiltonian in the maximum-spin sector S = N/2, split by parity.

    H = -(lam/N)(1+gamma)(S^2 - Sz^2 - N/2) - (lam/2N)(1-gamma)(S+^2 + S-^2) - 2h Sz

The (S+^2 + S-^2) term couples M only to M +- 2, so each parity sublattice is
a symmetric tridiagonal matrix. Basis order is ascending M within a sector.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from lmg_fidelity.models.constants import DENSE_MAX_ORDER
from lmg_fidelity.models.enums import ParitySector
from lmg_fidelity.models.params import LmgParams
from lmg_fidelity.errors import ParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SectorMatrix:
    sector: ParitySector
    m_values: np.ndarray
    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.m_values)
        if len(self.diagonal) != n or len(self.offdiagonal) != max(n - 1, 0):
            raise ParameterError(
                f"malformed sector matrix: {n} basis states, {len(self.diagonal)} diagonal, "
                f"{len(self.offdiagonal)} off-diagonal entries"
            )
        if not (np.all(np.isfinite(self.diagonal)) and np.all(np.isfinite(self.offdiagonal))):
            raise ParameterError("sector matrix has non-finite entries")

    @property
    def order(self) -> int:
        return len(self.m_values)

    def inf_norm(self) -> float:
        """Maximum absolute row sum."""
        rows = np.abs(self.diagonal).copy()
        rows[:-1] += np.abs(self.offdiagonal)
        rows[1:] += np.abs(self.offdiagonal)
        return float(rows.max())

    def matvec(self, vector: np.ndarray) -> np.ndarray:
        out = self.diagonal * vector
        out[:-1] += self.offdiagonal * vector[1:]
        out[1:] += self.offdiagonal * vector[:-1]
        return out


def sector_m_values(n_spins: int, sector: ParitySector) -> np.ndarray:
    """Ascending magnetizations of a parity sublattice."""
    spin = n_spins / 2.0
    top = spin if sector is ParitySector.TOP else spin - 1.0
    count = int(round(top + spin)) // 2 + 1
    return top - 2.0 * np.arange(count)[::-1]


def ladder(spin: float, m: np.ndarray) -> np.ndarray:
    """<M+1|S+|M> = sqrt(S(S+1) - M(M+1))."""
    return np.sqrt(np.maximum(spin * (spin + 1.0) - m * (m + 1.0), 0.0))


def ladder_pair(spin: float, m: np.ndarray) -> np.ndarray:
    """<M+2|S+^2|M> = c(M) c(M+1)."""
    return ladder(spin, m) * ladder(spin, m + 1.0)


def diagonal_entries(n_spins: int, gamma: float, field: float, lam: float, m: np.ndarray) -> np.ndarray:
    spin = n_spins / 2.0
    return -(lam / n_spins) * (1.0 + gamma) * (spin * (spin + 1.0) - m**2 - n_spins / 2.0) - 2.0 * field * m


def offdiagonal_entries(n_spins: int, gamma: float, lam: float, m_lower: np.ndarray) -> np.ndarray:
    spin = n_spins / 2.0
    return -(lam / (2.0 * n_spins)) * (1.0 - gamma) * ladder_pair(spin, m_lower)


def build_sector(params: LmgParams, sector: ParitySector) -> SectorMatrix:
    m = sector_m_values(params.n_spins, sector)
    diag = diagonal_entries(params.n_spins, params.gamma, params.field, params.lam, m)
    off = offdiagonal_entries(params.n_spins, params.gamma, params.lam, m[:-1])
    return SectorMatrix(sector=sector, m_values=m, diagonal=diag, offdiagonal=off)


def build_full_matrix(params: LmgParams) -> np.ndarray:
    """Dense (N+1)x(N+1) pentadiagonal matrix without parity splitting (M ascending)."""
    order = params.n_spins + 1
    if order > DENSE_MAX_ORDER:
        raise ParameterError(f"dense matrix limited to order {DENSE_MAX_ORDER}, got {order}")
    spin = params.spin
    m = -spin + np.arange(order, dtype=float)
    full = np.diag(diagonal_entries(params.n_spins, params.gamma, params.field, params.lam, m))
    coupling = offdiagonal_entries(params.n_spins, params.gamma, params.lam, m[:-2])
    idx = np.arange(order - 2)
    full[idx, idx + 2] = coupling
    full[idx + 2, idx] = coupling
    return full


__all__ = [
    "SectorMatrix",
    "sector_m_values",
    "ladder",
    "ladder_pair",
    "diagonal_entries",
    "offdiagonal_entries",
    "build_sector",
    "build_full_matrix",
]
