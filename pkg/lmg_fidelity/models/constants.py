from __future__ import annotations

# Critical field of the anisotropic model
H_C = 1.0

# Analytic collapse exponent
NU_ANALYTIC = 2.0 / 3.0

# Largest order for which the unsplit dense oracle is built
DENSE_MAX_ORDER = 256

JSON_SCHEMA_VERSION = 1

SWEEP_COLUMNS: tuple[str, ...] = (
    "h", "chi", "chi_block1", "chi_block2", "chi_oracle", "energy", "gap", "degenerate",
)

__all__ = ["H_C", "NU_ANALYTIC", "DENSE_MAX_ORDER", "JSON_SCHEMA_VERSION", "SWEEP_COLUMNS"]
