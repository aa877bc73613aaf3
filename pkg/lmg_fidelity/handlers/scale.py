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
from lmg_fidelity.services.scaling import find_peaks, fit_peak_exponent
from lmg_fidelity.utils.formatting import render

COMMAND = Subcommand.SCALE
COLUMNS = ("n", "h_m", "chi_m", "bracket")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="fit ln chi_m against ln N over several sizes")
    add_model_args(parser, sizes=True)
    add_peak_args(parser)
    add_output_args(parser)


def handle(config: RunConfig) -> HandlerResult:
    peaks = find_peaks(config.n_list, config.gamma, workers=config.workers, **peak_kwargs(config))
    fit = fit_peak_exponent(peaks)
    rows = [(p.n_spins, p.h_m, p.chi_m, p.bracket) for p in peaks]
    summary = ("fit", {"slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared})
    return HandlerResult(render(config.format, COMMAND.value, COLUMNS, rows, model_meta(config), summary))
