from lmg_fidelity.models.enums import BlockCase, OutputFormat, ParitySector, Subcommand
from lmg_fidelity.models.params import LmgParams

__all__ = ["BlockCase", "OutputFormat", "ParitySector", "Subcommand", "LmgParams"]
