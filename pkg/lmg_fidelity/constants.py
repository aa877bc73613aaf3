"""Centralized user-facing strings (CLI help, errors and notes)."""

PROG = "lmg-fidelity"
DESCRIPTION = "Reduced fidelity susceptibility of two spins in the LMG model"

# Routing
MSG_ISO_ROUTE = (
    "gamma = 1 is the isotropic model: its finite-N susceptibility is not defined "
    "pointwise; use the `iso` subcommand instead"
)

# CLI errors
MSG_BAD_ARGS = "invalid arguments: {detail}"
MSG_NUMERICAL = "numerical failure: {detail}"
MSG_SELFTEST_FAILED = "selftest failed: {suites}"
MSG_ISO_NEEDS_FIELDS = "iso needs exactly one of --crossings, --h or --h1/--h2"

# Help strings
HELP_N = "number of spins N (>= 2)"
HELP_N_LIST = "comma-separated system sizes, e.g. 128,256,512"
HELP_GAMMA = "anisotropy gamma in [-1, 1)"
HELP_LAMBDA = "coupling lambda (> 0)"
HELP_DERIV_STEP = "finite-difference step in h (shrunk automatically near h_c = 1)"
HELP_ORACLE_DELTA = "delta of the -2 ln F / delta^2 oracle column"
HELP_NO_ORACLE = "skip the oracle column"
HELP_FORMAT = "output format"
HELP_OUTPUT = "write to this file instead of standard output"
HELP_WORKERS = "worker threads (default: LMG_MAX_WORKERS or CPU count)"
HELP_NU = "collapse exponent nu (default 2/3)"
HELP_WINDOW = "fit window a,b on one side of h_c = 1"

# Notes attached to outputs
NOTE_THERMO_BELOW = "broken-phase window (h < 1): exponent is experimental"
NOTE_ISO_DOMAIN = (
    "thermodynamic-limit chi = 1/(2(1-h^2)) is used on h < 1 only; for h > 1 the "
    "ground state is fully polarized and chi = 0"
)
