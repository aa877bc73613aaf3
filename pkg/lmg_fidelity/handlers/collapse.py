from __future__ import annotations

import argparse

from lmg_fidelity.constants import HELP_NU
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
from lmg_fidelity.services.scaling import collapse_spread, collapse_table, find_peaks
from lmg_fidelity.settings import settings
from lmg_fidelity.utils.cache import GroundStateCache
from lmg_fidelity.utils.formatting import render

COMMAND = Subcommand.COLLAPSE
COLUMNS = ("n", "x", "h", "q")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="q = chi_m / chi(h) against x = N^nu (h - h_m)")
    add_model_args(parser, sizes=True)
    add_peak_args(parser)
    parser.add_argument("--nu", type=float, default=None, help=HELP_NU)
    parser.add_argument("--x-min", dest="x_min", type=float, default=-1.0)
    parser.add_argument("--x-max", dest="x_max", type=float, default=1.0)
    parser.add_argument("--points", type=int, default=21)
    add_output_args(parser)


def handle(config: RunConfig) -> HandlerResult:
    nu = settings.numerics.collapse_nu if config.nu is None else config.nu
    cache = GroundStateCache()
    peaks = find_peaks(config.n_list, config.gamma, workers=config.workers, cache=cache, **peak_kwargs(config))
    rows = collapse_table(
        config.n_list,
        config.gamma,
        nu=nu,
        x_range=(config.x_min, config.x_max),
        points=config.points,
        peaks={p.n_spins: p for p in peaks},
        step=config.deriv_step,
        lam=config.lam,
        workers=config.workers,
        cache=cache,
    )
    meta = model_meta(config, nu=nu)
    meta["peaks"] = [{"n": p.n_spins, "h_m": p.h_m, "chi_m": p.chi_m} for p in peaks]
    summary = ("collapse", {"nu": nu, "spread": collapse_spread(rows)})
    table = [(r.n_spins, r.x, r.h, r.q) for r in rows]
    return HandlerResult(render(config.format, COMMAND.value, COLUMNS, table, meta, summary))
