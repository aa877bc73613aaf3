from __future__ import annotations

import argparse
from dataclasses import astuple

from lmg_fidelity.constants import HELP_NO_ORACLE, HELP_ORACLE_DELTA
from lmg_fidelity.handlers.common import HandlerResult, add_model_args, add_output_args, model_meta
from lmg_fidelity.models.constants import SWEEP_COLUMNS
from lmg_fidelity.models.enums import Subcommand
from lmg_fidelity.models.run_config import RunConfig
from lmg_fidelity.services.scaling import sweep_chi
from lmg_fidelity.utils.formatting import render

COMMAND = Subcommand.SWEEP


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="chi(h) on an even grid of fields")
    add_model_args(parser)
    parser.add_argument("--h-min", dest="h_min", type=float, required=True)
    parser.add_argument("--h-max", dest="h_max", type=float, required=True)
    parser.add_argument("--steps", type=int, default=200)
    parser.add_argument("--oracle-delta", dest="oracle_delta", type=float, default=None, help=HELP_ORACLE_DELTA)
    parser.add_argument("--no-oracle", dest="no_oracle", action="store_true", help=HELP_NO_ORACLE)
    add_output_args(parser)


def handle(config: RunConfig) -> HandlerResult:
    rows = sweep_chi(
        config.n,
        config.gamma,
        config.h_min,
        config.h_max,
        config.steps,
        step=config.deriv_step,
        oracle_delta=config.oracle_delta,
        with_oracle=not config.no_oracle,
        lam=config.lam,
        workers=config.workers,
    )
    meta = model_meta(config, h_min=config.h_min, h_max=config.h_max, steps=config.steps)
    return HandlerResult(render(config.format, COMMAND.value, SWEEP_COLUMNS, [astuple(r) for r in rows], meta))
