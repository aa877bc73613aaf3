"""Entry point for the lmg-fidelity command line."""

import logging
import sys

from lmg_fidelity.settings import settings

level = getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
logging.basicConfig(level=level, stream=sys.stderr)

from lmg_fidelity.cli import run


if __name__ == "__main__":
    sys.exit(run())
