from __future__ import annotations

from enum import Enum


class ParitySector(str, Enum):
    """Sublattice of magnetization values coupled by the Hamiltonian.

    ``TOP`` holds {S, S-2, ...}, ``OTHER`` holds {S-1, S-3, ...}.
    """

    TOP = "top"
    OTHER = "other"


class BlockCase(str, Enum):
    REGULAR = "regular"
    ZERO_DET = "zero-det"
    ZERO_TRACE = "zero-trace"


class Subcommand(str, Enum):
    SWEEP = "sweep"
    PEAK = "peak"
    SCALE = "scale"
    COLLAPSE = "collapse"
    THERMO = "thermo"
    ISO = "iso"
    SELFTEST = "selftest"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    TABLE = "table"


__all__ = ["ParitySector", "BlockCase", "Subcommand", "OutputFormat"]
