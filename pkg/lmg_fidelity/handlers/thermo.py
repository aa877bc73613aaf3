from __future__ import annotations

import argparse

from lmg_fidelity.constants import HELP_WINDOW, NOTE_THERMO_BELOW
from lmg_fidelity.handlers.common import HandlerResult, add_model_args, add_output_args, float_pair, model_meta
from lmg_fidelity.models.constants import H_C
from lmg_fidelity.models.enums import Subcommand
from lmg_fidelity.models.run_config import RunConfig
from lmg_fidelity.services.scaling import fit_thermo_exponent
from lmg_fidelity.utils.formatting import render

COMMAND = Subcommand.THERMO
COLUMNS = ("ln_distance", "ln_chi")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="fit ln chi against ln|h - 1| on a window off h_c")
    add_model_args(parser)
    parser.add_argument("--window", type=float_pair, default=(1.05, 1.4), help=HELP_WINDOW)
    parser.add_argument("--points", dest="thermo_points", type=int, default=None)
    parser.add_argument("--curvature-limit", dest="curvature_limit", type=float, default=None)
    add_output_args(parser)


def handle(config: RunConfig) -> HandlerResult:
    fit = fit_thermo_exponent(
        config.n,
        config.gamma,
        window=config.window,
        points=config.thermo_points,
        curvature_limit=config.curvature_limit,
        step=config.deriv_step,
        lam=config.lam,
        workers=config.workers,
    )
    meta = model_meta(config, window=list(config.window))
    if config.window[1] < H_C:
        meta["note"] = NOTE_THERMO_BELOW
    summary = ("fit", {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared})
    return HandlerResult(render(config.format, COMMAND.value, COLUMNS, fit.points, meta, summary))
