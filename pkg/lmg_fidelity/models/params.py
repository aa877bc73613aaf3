from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class LmgParams(BaseModel):
    """Point in the driving-parameter space (N, gamma, h, lambda).

    Frozen so instances can key the ground-state cache.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    n_spins: int = Field(..., ge=2)
    gamma: float = Field(..., ge=-1.0, le=1.0, allow_inf_nan=False)
    field: float = Field(..., ge=0.0, allow_inf_nan=False)
    lam: float = Field(1.0, alias="lambda", gt=0.0, allow_inf_nan=False)

    @property
    def spin(self) -> float:
        """Total spin S = N/2 of the maximum-spin sector."""
        return self.n_spins / 2.0

    def at(self, field: float) -> "LmgParams":
        """Same model at another field value (validated)."""
        return LmgParams(n_spins=self.n_spins, gamma=self.gamma, field=field, lam=self.lam)


__all__ = ["LmgParams"]
