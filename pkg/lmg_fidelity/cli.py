from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from pydantic import ValidationError

from lmg_fidelity.constants import DESCRIPTION, MSG_BAD_ARGS, MSG_NUMERICAL, PROG
from lmg_fidelity.errors import NumericalError, ParameterError
from lmg_fidelity.handlers import HANDLERS
from lmg_fidelity.models.run_config import RunConfig
from lmg_fidelity.utils.formatting import write_output

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_BAD_ARGS = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description=DESCRIPTION)
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for handler in HANDLERS.values():
        handler.register(subparsers)
    return parser


def _validation_detail(exc: ValidationError) -> str:
    return "; ".join(err["msg"] for err in exc.errors())


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage
        return EXIT_BAD_ARGS if exc.code else EXIT_OK

    try:
        config = RunConfig.model_validate(vars(namespace))
        result = HANDLERS[config.subcommand].handle(config)
    except ValidationError as exc:
        print(MSG_BAD_ARGS.format(detail=_validation_detail(exc)), file=sys.stderr)
        return EXIT_BAD_ARGS
    except ParameterError as exc:
        print(MSG_BAD_ARGS.format(detail=exc), file=sys.stderr)
        return EXIT_BAD_ARGS
    except NumericalError as exc:
        logger.debug("numerical failure", exc_info=True)
        print(MSG_NUMERICAL.format(detail=exc), file=sys.stderr)
        return EXIT_NUMERICAL

    write_output(result.text, config.output)
    if result.message:
        print(result.message, file=sys.stderr)
    return result.exit_code


def main() -> None:
    sys.exit(run())


__all__ = ["build_parser", "run", "main"]
