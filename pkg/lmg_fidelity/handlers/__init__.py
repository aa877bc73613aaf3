from lmg_fidelity.handlers import collapse, iso, peak, scale, selftest, sweep, thermo

HANDLERS = {module.COMMAND: module for module in (sweep, peak, scale, collapse, thermo, iso, selftest)}

__all__ = ["HANDLERS"]
