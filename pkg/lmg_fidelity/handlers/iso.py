from __future__ import annotations

import argparse
import math

from lmg_fidelity.constants import HELP_N, NOTE_ISO_DOMAIN
from lmg_fidelity.errors import CriticalPointError
from lmg_fidelity.handlers.common import HandlerResult, add_output_args
from lmg_fidelity.models.enums import OutputFormat, Subcommand
from lmg_fidelity.models.run_config import RunConfig
from lmg_fidelity.services.isotropic import iso_chi_thermo, iso_crossings, iso_m0, iso_reduced_fidelity
from lmg_fidelity.utils.formatting import fmt_value, render

COMMAND = Subcommand.ISO
GROUND_COLUMNS = ("n", "h", "m0", "energy", "plateau_lo", "plateau_hi", "flips", "degenerate", "chi_thermo")
FIDELITY_COLUMNS = ("n", "h1", "h2", "fidelity")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="closed forms of the isotropic model (gamma = 1)")
    parser.add_argument("--n", type=int, required=True, help=HELP_N)
    parser.add_argument("--crossings", action="store_true", help="list the level-crossing fields")
    parser.add_argument("--h", type=float, default=None, help="ground state and thermodynamic chi at this field")
    parser.add_argument("--h1", type=float, default=None, help="reduced fidelity between --h1 and --h2")
    parser.add_argument("--h2", type=float, default=None)
    add_output_args(parser)


def _crossings(config: RunConfig) -> str:
    values = iso_crossings(config.n)
    if config.format is OutputFormat.CSV:
        return ",".join(fmt_value(h) for h in values) + "\n"
    rows = [(h,) for h in values]
    return render(config.format, COMMAND.value, ("h",), rows, {"params": {"n": config.n}})


def _ground(config: RunConfig) -> str:
    ground = iso_m0(config.n, config.h)
    try:
        chi = iso_chi_thermo(config.h)
    except CriticalPointError:
        chi = math.nan
    lo, hi = ground.plateau
    row = (config.n, config.h, ground.m0, ground.energy, lo, hi, ground.flips, ground.degenerate, chi)
    meta = {"params": {"n": config.n, "h": config.h}, "note": NOTE_ISO_DOMAIN}
    return render(config.format, COMMAND.value, GROUND_COLUMNS, [row], meta)


def _fidelity(config: RunConfig) -> str:
    value = iso_reduced_fidelity(config.n, config.h1, config.h2)
    row = (config.n, config.h1, config.h2, value)
    return render(config.format, COMMAND.value, FIDELITY_COLUMNS, [row], {"params": {"n": config.n}})


def handle(config: RunConfig) -> HandlerResult:
    if config.crossings:
        return HandlerResult(_crossings(config))
    if config.h is not None:
        return HandlerResult(_ground(config))
    return HandlerResult(_fidelity(config))
