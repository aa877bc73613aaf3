from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from lmg_fidelity.constants import MSG_ISO_NEEDS_FIELDS, MSG_ISO_ROUTE
from lmg_fidelity.models.enums import OutputFormat, Subcommand

ANISOTROPIC = frozenset(
    {Subcommand.SWEEP, Subcommand.PEAK, Subcommand.SCALE, Subcommand.COLLAPSE, Subcommand.THERMO}
)
NEEDS_N = frozenset({Subcommand.SWEEP, Subcommand.PEAK, Subcommand.THERMO, Subcommand.ISO})
NEEDS_N_LIST = frozenset({Subcommand.SCALE, Subcommand.COLLAPSE})


class RunConfig(BaseModel):
    """Validated command line of one invocation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    subcommand: Subcommand
    n: Optional[int] = Field(None, ge=2)
    n_list: Optional[List[int]] = None
    gamma: float = Field(0.0, ge=-1.0, le=1.0, allow_inf_nan=False)
    lam: float = Field(1.0, gt=0.0, allow_inf_nan=False)

    # sweep grid
    h_min: Optional[float] = Field(None, ge=0.0, allow_inf_nan=False)
    h_max: Optional[float] = Field(None, ge=0.0, allow_inf_nan=False)
    steps: int = Field(200, ge=2)
    deriv_step: Optional[float] = Field(None, gt=0.0)
    oracle_delta: Optional[float] = Field(None, gt=0.0)
    no_oracle: bool = False

    # peak search
    h_lo: Optional[float] = Field(None, ge=0.0)
    h_hi: Optional[float] = Field(None, gt=0.0)
    tol_h: Optional[float] = Field(None, gt=0.0)

    # collapse
    nu: Optional[float] = Field(None, gt=0.0)
    x_min: float = -1.0
    x_max: float = 1.0
    points: int = Field(21, ge=2)

    # thermo
    window: Tuple[float, float] = (1.05, 1.4)
    thermo_points: Optional[int] = Field(None, ge=3)
    curvature_limit: Optional[float] = Field(None, gt=0.0)

    # iso
    crossings: bool = False
    h: Optional[float] = Field(None, ge=0.0)
    h1: Optional[float] = Field(None, ge=0.0)
    h2: Optional[float] = Field(None, ge=0.0)

    seed: Optional[int] = None
    format: OutputFormat = OutputFormat.CSV
    output: Optional[Path] = None
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _check_subcommand(self):  # type: ignore[override]
        cmd = self.subcommand
        if cmd in ANISOTROPIC and self.gamma == 1.0:
            raise ValueError(MSG_ISO_ROUTE)
        if cmd in NEEDS_N and self.n is None:
            raise ValueError(f"{cmd.value} requires --n")
        if cmd in NEEDS_N_LIST:
            sizes = self.n_list or []
            if any(n < 2 for n in sizes):
                raise ValueError("all sizes in --n-list must be >= 2")
            minimum = 3 if cmd is Subcommand.SCALE else 2
            if len(set(sizes)) < minimum:
                raise ValueError(f"{cmd.value} requires at least {minimum} distinct sizes in --n-list")
        if cmd is Subcommand.SWEEP:
            if self.h_min is None or self.h_max is None:
                raise ValueError("sweep requires --h-min and --h-max")
            if not self.h_min < self.h_max:
                raise ValueError("--h-min must be below --h-max")
        if self.h_lo is not None and self.h_hi is not None and not self.h_lo < self.h_hi:
            raise ValueError("--h-lo must be below --h-hi")
        if not self.x_min < self.x_max:
            raise ValueError("--x-min must be below --x-max")
        if cmd is Subcommand.ISO:
            modes = [self.crossings, self.h is not None, self.h1 is not None or self.h2 is not None]
            if sum(modes) != 1:
                raise ValueError(MSG_ISO_NEEDS_FIELDS)
            if modes[2] and (self.h1 is None or self.h2 is None):
                raise ValueError("iso fidelity needs both --h1 and --h2")
        return self


__all__ = ["RunConfig", "ANISOTROPIC"]
