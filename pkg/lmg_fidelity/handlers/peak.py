from __future__ import annotations

import argparse

from lmg_fidelity.handlers.common import (
    HandlerResult,
    add_model_args,
    add_output_args,
    add_peak_args,
    model_meta,
    peak_kwargs,
)
from lmg_fidelity.models.enums import Subcommand
from lmg_fidelity.models.run_config import RunConfig
from lmg_fidelity.services.scaling import find_peak
from lmg_fidelity.utils.formatting import render

COMMAND = Subcommand.PEAK
COLUMNS = ("n", "gamma", "h_m", "chi_m", "bracket")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="peak location h_m and height chi_m for one N")
    add_model_args(parser)
    add_peak_args(parser)
    add_output_args(parser)


def handle(config: RunConfig) -> HandlerResult:
    peak = find_peak(config.n, config.gamma, workers=config.workers, **peak_kwargs(config))
    row = (peak.n_spins, peak.gamma, peak.h_m, peak.chi_m, peak.bracket)
    return HandlerResult(render(config.format, COMMAND.value, COLUMNS, [row], model_meta(config)))
