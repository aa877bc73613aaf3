from __future__ import annotations

import argparse

from lmg_fidelity.constants import MSG_SELFTEST_FAILED
from lmg_fidelity.handlers.common import HandlerResult, add_output_args
from lmg_fidelity.models.enums import Subcommand
from lmg_fidelity.models.run_config import RunConfig
from lmg_fidelity.services.selftest import SEED, run_selftest
from lmg_fidelity.utils.formatting import render

COMMAND = Subcommand.SELFTEST
COLUMNS = ("suite", "passed", "checked", "failed", "detail")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(COMMAND.value, help="run the small-N invariant suites")
    parser.add_argument("--seed", type=int, default=SEED)
    add_output_args(parser)


def handle(config: RunConfig) -> HandlerResult:
    results = run_selftest(SEED if config.seed is None else config.seed)
    rows = [(r.name, r.passed, r.checked, r.failed, r.detail) for r in results]
    failing = [r.name for r in results if not r.passed]
    summary = ("summary", {"suites": len(results), "failed": len(failing)})
    text = render(config.format, COMMAND.value, COLUMNS, rows, None, summary)
    if failing:
        return HandlerResult(text, exit_code=3, message=MSG_SELFTEST_FAILED.format(suites=", ".join(failing)))
    return HandlerResult(text)
