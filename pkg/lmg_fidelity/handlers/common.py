from __future__ import annotations

import argparse
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from lmg_fidelity.constants import (
    HELP_DERIV_STEP,
    HELP_FORMAT,
    HELP_GAMMA,
    HELP_LAMBDA,
    HELP_N,
    HELP_N_LIST,
    HELP_OUTPUT,
    HELP_WORKERS,
)
from lmg_fidelity.models.enums import OutputFormat
from lmg_fidelity.models.run_config import RunConfig


@dataclass(frozen=True)
class HandlerResult:
    text: str
    exit_code: int = 0
    message: Optional[str] = None


def int_list(raw: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from exc


def float_pair(raw: str) -> Tuple[float, float]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected a,b, got {raw!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected two numbers, got {raw!r}") from exc


def add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default="csv", help=HELP_FORMAT)
    parser.add_argument("--output", default=None, help=HELP_OUTPUT)
    parser.add_argument("--workers", type=int, default=None, help=HELP_WORKERS)


def add_model_args(parser: argparse.ArgumentParser, sizes: bool = False) -> None:
    if sizes:
        parser.add_argument("--n-list", dest="n_list", type=int_list, required=True, help=HELP_N_LIST)
    else:
        parser.add_argument("--n", type=int, required=True, help=HELP_N)
    parser.add_argument("--gamma", type=float, default=0.0, help=HELP_GAMMA)
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0, help=HELP_LAMBDA)
    parser.add_argument("--deriv-step", dest="deriv_step", type=float, default=None, help=HELP_DERIV_STEP)


def add_peak_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--h-lo", dest="h_lo", type=float, default=None, help="lower end of the peak bracket")
    parser.add_argument("--h-hi", dest="h_hi", type=float, default=None, help="upper end of the peak bracket")
    parser.add_argument("--tol-h", dest="tol_h", type=float, default=None, help="final bracket width")


def peak_kwargs(config: RunConfig) -> Dict[str, Any]:
    return {
        "h_lo": config.h_lo,
        "h_hi": config.h_hi,
        "tol_h": config.tol_h,
        "step": config.deriv_step,
        "lam": config.lam,
    }


def model_meta(config: RunConfig, **extra: Any) -> Dict[str, Any]:
    params: Dict[str, Any] = {"gamma": config.gamma, "lambda": config.lam}
    if config.n is not None:
        params["n"] = config.n
    if config.n_list is not None:
        params["n_list"] = sorted(set(config.n_list))
    if config.deriv_step is not None:
        params["deriv_step"] = config.deriv_step
    params.update(extra)
    return {"params": params}


__all__ = [
    "HandlerResult",
    "int_list",
    "float_pair",
    "add_output_args",
    "add_model_args",
    "add_peak_args",
    "peak_kwargs",
    "model_meta",
]
