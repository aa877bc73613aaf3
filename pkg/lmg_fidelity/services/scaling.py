"""
Susceptibility sweeps, peak search and finite-size scaling fits.

Every chi value here is the closed-form two-spin RFS from ``chi_lmg``; the
finite-delta fidelity estimator only fills the oracle column. Work is spread
over a thread pool (scipy's LAPACK calls release the GIL) and results are
gathered with ``Executor.map``, so output order never depends on scheduling.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from lmg_fidelity.constants import MSG_ISO_ROUTE
from lmg_fidelity.errors import (
    AmbiguousPeakError,
    DerivativeUndefinedError,
    ParameterError,
    SingularSusceptibilityError,
    WindowTooCloseError,
)
from lmg_fidelity.models.constants import H_C
from lmg_fidelity.models.params import LmgParams
from lmg_fidelity.services.eigensolver import GroundState
from lmg_fidelity.services.fidelity import (
    SusceptibilityResult,
    chi_from_fidelity,
    chi_lmg,
    fidelity_blockdiag,
    lmg_blocks,
)
from lmg_fidelity.services.observables import derivative_step, rdm_at, rdm_derivatives
from lmg_fidelity.settings import settings
from lmg_fidelity.utils.cache import GroundStateCache

logger = logging.getLogger(__name__)

ChiFn = Callable[[float], float]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
# pre-scan refinements allowed when the maximum borders an undefined point
MAX_ZOOM = 4
NAN = float("nan")


@dataclass(frozen=True)
class SweepRow:
    h: float
    chi: float
    chi_block1: float
    chi_block2: float
    chi_oracle: float
    energy: float
    gap: float
    degenerate: bool


@dataclass(frozen=True)
class PeakResult:
    n_spins: int
    gamma: float
    h_m: float
    chi_m: float
    bracket: float


@dataclass(frozen=True)
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float
    points: Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class CollapseRow:
    n_spins: int
    x: float
    h: float
    q: float


def _require_anisotropic(gamma: float) -> None:
    if gamma == 1.0:
        raise ParameterError(MSG_ISO_ROUTE)


def _workers(workers: Optional[int]) -> int:
    workers = settings.MAX_WORKERS if workers is None else workers
    if workers < 1:
        raise ParameterError("workers must be >= 1")
    return workers


def chi_oracle(
    params: LmgParams,
    delta: Optional[float] = None,
    cache: Optional[GroundStateCache] = None,
    tol: Optional[float] = None,
) -> float:
    """-2 ln F(rho(h - delta/2), rho(h + delta/2)) / delta^2."""
    delta = settings.numerics.oracle_delta if delta is None else delta
    if delta <= 0:
        raise ParameterError("oracle delta must be > 0")
    h = params.field
    if h - delta / 2.0 < 0:
        raise DerivativeUndefinedError(h, "oracle window reaches below h = 0")
    blocks = []
    for point in (params.at(h - delta / 2.0), params.at(h + delta / 2.0)):
        gs, rdm = rdm_at(point, cache, tol)
        if gs.degenerate:
            raise DerivativeUndefinedError(point.field)
        blocks.append(lmg_blocks(rdm))
    return chi_from_fidelity(fidelity_blockdiag(blocks[0], blocks[1]), delta)


def evaluate_chi(
    params: LmgParams,
    step: Optional[float] = None,
    oracle_delta: Optional[float] = None,
    with_oracle: bool = True,
    cache: Optional[GroundStateCache] = None,
    tol: Optional[float] = None,
) -> Tuple[SusceptibilityResult, GroundState]:
    """Closed-form chi at one point, plus the oracle unless disabled."""
    derivs = rdm_derivatives(
        params,
        step=derivative_step(params.field, step),
        want_second=True,
        cache=cache,
        tol=tol,
    )
    result = chi_lmg(derivs.value, derivs)
    gs, _ = rdm_at(params, cache, tol)
    if with_oracle:
        delta = settings.numerics.oracle_delta if oracle_delta is None else oracle_delta
        result = replace(result, oracle_chi=chi_oracle(params, delta, cache, tol), oracle_delta=delta)
    return result, gs


def sweep_chi(
    n_spins: int,
    gamma: float,
    h_min: float,
    h_max: float,
    steps: int,
    step: Optional[float] = None,
    oracle_delta: Optional[float] = None,
    with_oracle: bool = True,
    lam: float = 1.0,
    workers: Optional[int] = None,
    cache: Optional[GroundStateCache] = None,
) -> List[SweepRow]:
    """chi on an even grid; points where it is undefined become NaN rows."""
    _require_anisotropic(gamma)
    if not h_min < h_max:
        raise ParameterError(f"need h_min < h_max, got {h_min!r}, {h_max!r}")
    if steps < 2:
        raise ParameterError("steps must be >= 2")
    base = LmgParams(n_spins=n_spins, gamma=gamma, field=h_min, lam=lam)
    cache = GroundStateCache() if cache is None else cache

    def row(h: float) -> SweepRow:
        params = base.at(float(h))
        try:
            result, gs = evaluate_chi(params, step, with_oracle=False, cache=cache)
        except DerivativeUndefinedError as exc:
            logger.warning("chi undefined at h=%.6g: %s", h, exc)
            gs = cache.get(params)
            return SweepRow(float(h), NAN, NAN, NAN, NAN, gs.energy, gs.gap, True)
        oracle = NAN
        if with_oracle:
            try:
                oracle = chi_oracle(params, oracle_delta, cache)
            except DerivativeUndefinedError as exc:
                logger.warning("oracle skipped at h=%.6g: %s", h, exc)
        return SweepRow(
            h=float(h),
            chi=result.chi_total,
            chi_block1=result.per_block[0],
            chi_block2=result.per_block[1],
            chi_oracle=oracle,
            energy=gs.energy,
            gap=gs.gap,
            degenerate=False,
        )

    grid = np.linspace(h_min, h_max, steps)
    with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
        rows = list(pool.map(row, grid))
    logger.info("sweep N=%d gamma=%g: %d rows, %d undefined", n_spins, gamma, len(rows), sum(r.degenerate for r in rows))
    return rows


def _default_chi_fn(
    n_spins: int, gamma: float, lam: float, step: Optional[float], cache: GroundStateCache
) -> ChiFn:
    base = LmgParams(n_spins=n_spins, gamma=gamma, field=1.0, lam=lam)

    def chi(h: float) -> float:
        result, _ = evaluate_chi(base.at(h), step, with_oracle=False, cache=cache)
        return result.chi_total

    return chi


def _safe(chi_fn: ChiFn, h: float) -> float:
    try:
        return chi_fn(h)
    except DerivativeUndefinedError:
        return NAN


def _prescan_bracket(chi_fn: ChiFn, h_lo: float, h_hi: float, points: int, workers: int) -> Tuple[float, float]:
    """Grid-scan for a unique interior maximum and return its neighbours."""
    lo, hi = h_lo, h_hi
    for _ in range(MAX_ZOOM):
        hs = np.linspace(lo, hi, points)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = np.array(list(pool.map(lambda h: _safe(chi_fn, float(h)), hs)))
        valid = np.flatnonzero(np.isfinite(values))
        if len(valid) < 3:
            raise AmbiguousPeakError([], "too few points with a defined susceptibility")
        seq = values[valid]
        maxima = [
            float(hs[valid[j]]) for j in range(1, len(valid) - 1) if seq[j] > seq[j - 1] and seq[j] > seq[j + 1]
        ]
        if len(maxima) > 1:
            raise AmbiguousPeakError(maxima)
        i = int(valid[np.argmax(seq)])
        if i == 0 or i == points - 1:
            raise AmbiguousPeakError([float(hs[i])], "maximum sits on the bracket edge")
        if np.isfinite(values[i - 1]) and np.isfinite(values[i + 1]):
            return float(hs[i - 1]), float(hs[i + 1])
        # the peak borders a point where chi is undefined; zoom in
        lo, hi = float(hs[i - 1]), float(hs[i + 1])
    raise AmbiguousPeakError([float(hs[i])], "peak stays next to undefined points after refinement")


def _golden_max(chi_fn: ChiFn, a: float, b: float, tol_h: float) -> Tuple[float, float, float]:
    """Golden-section maximization; returns (h_best, chi_best, final bracket width)."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = chi_fn(c), chi_fn(d)
    while b - a > tol_h:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = chi_fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = chi_fn(d)
    h_best, chi_best = (c, fc) if fc > fd else (d, fd)
    return h_best, chi_best, b - a


def find_peak(
    n_spins: int,
    gamma: float,
    h_lo: Optional[float] = None,
    h_hi: Optional[float] = None,
    tol_h: Optional[float] = None,
    step: Optional[float] = None,
    lam: float = 1.0,
    chi_fn: Optional[ChiFn] = None,
    workers: Optional[int] = None,
    cache: Optional[GroundStateCache] = None,
) -> PeakResult:
    """Locate h_m and chi_m = chi(h_m).

    ``chi_fn`` replaces the model evaluation (any callable h -> chi).
    """
    _require_anisotropic(gamma)
    num = settings.numerics
    h_lo = num.peak_h_lo if h_lo is None else h_lo
    h_hi = num.peak_h_hi if h_hi is None else h_hi
    tol_h = num.peak_tol_h if tol_h is None else tol_h
    if not 0 <= h_lo < h_hi:
        raise ParameterError(f"need 0 <= h_lo < h_hi, got {h_lo!r}, {h_hi!r}")
    if tol_h <= 0:
        raise ParameterError("tol_h must be > 0")
    if chi_fn is None:
        cache = GroundStateCache() if cache is None else cache
        chi_fn = _default_chi_fn(n_spins, gamma, lam, step, cache)

    a, b = _prescan_bracket(chi_fn, h_lo, h_hi, num.prescan_points, _workers(workers))
    h_m, chi_m, width = _golden_max(chi_fn, a, b, tol_h)
    logger.info("peak N=%d gamma=%g: h_m=%.8f chi_m=%.8g", n_spins, gamma, h_m, chi_m)
    return PeakResult(n_spins=n_spins, gamma=gamma, h_m=h_m, chi_m=chi_m, bracket=width)


def find_peaks(
    n_list: Iterable[int],
    gamma: float,
    workers: Optional[int] = None,
    **kwargs,
) -> List[PeakResult]:
    """find_peak for several sizes, sorted by N."""
    sizes = sorted(set(n_list))
    pool_size = _workers(workers)
    with ThreadPoolExecutor(max_workers=pool_size) as pool:
        return list(pool.map(lambda n: find_peak(n, gamma, workers=1, **kwargs), sizes))


def _linear_fit(xs: Sequence[float], ys: Sequence[float]) -> ScalingFit:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 3:
        raise ParameterError("a scaling fit needs at least 3 points")
    if np.ptp(x) == 0:
        raise ParameterError("degenerate abscissae")
    res = linregress(x, y)
    return ScalingFit(
        slope=float(res.slope),
        intercept=float(res.intercept),
        r_squared=float(min(1.0, res.rvalue**2)),
        points=tuple(zip(x.tolist(), y.tolist())),
    )


def fit_peak_exponent(peaks: Sequence[PeakResult]) -> ScalingFit:
    """Least-squares line through (ln N, ln chi_m)."""
    sizes = [p.n_spins for p in peaks]
    if len(set(sizes)) != len(sizes):
        raise ParameterError("peak sizes must be distinct")
    ordered = sorted(peaks, key=lambda p: p.n_spins)
    if any(p.chi_m <= 0 for p in ordered):
        raise SingularSusceptibilityError("peak heights must be positive to take logarithms")
    fit = _linear_fit([math.log(p.n_spins) for p in ordered], [math.log(p.chi_m) for p in ordered])
    logger.info("ln chi_m vs ln N: slope=%.6f r^2=%.6f", fit.slope, fit.r_squared)
    return fit


def log_curvature(xs: Sequence[float], ys: Sequence[float]) -> float:
    """|d^2 y / dx^2| of the best quadratic through the points."""
    return abs(2.0 * float(np.polyfit(xs, ys, 2)[0]))


def fit_thermo_exponent(
    n_spins: int,
    gamma: float,
    window: Tuple[float, float] = (1.05, 1.4),
    points: Optional[int] = None,
    curvature_limit: Optional[float] = None,
    step: Optional[float] = None,
    lam: float = 1.0,
    chi_fn: Optional[ChiFn] = None,
    workers: Optional[int] = None,
    cache: Optional[GroundStateCache] = None,
) -> ScalingFit:
    """Slope of ln chi against ln|h - 1| over a window on one side of h_c.

    Windows above h_c fit against ln(h - 1). Windows below h_c fit against
    ln(1 - h); that side is experimental.
    """
    _require_anisotropic(gamma)
    num = settings.numerics
    points = num.thermo_points if points is None else points
    curvature_limit = num.thermo_curvature_limit if curvature_limit is None else curvature_limit
    a, b = window
    if not 0 <= a < b:
        raise ParameterError(f"window must satisfy 0 <= a < b, got {window!r}")
    if a <= H_C <= b:
        raise ParameterError(f"window {window!r} contains the critical field h_c = {H_C}")
    if points < 3:
        raise ParameterError("points must be >= 3")
    if b < H_C:
        logger.info("fitting below h_c on %s; the broken-phase exponent is experimental", window)

    distances = np.geomspace(abs(a - H_C), abs(b - H_C), points)
    hs = H_C + distances if a > H_C else H_C - distances
    if chi_fn is None:
        cache = GroundStateCache() if cache is None else cache
        chi_fn = _default_chi_fn(n_spins, gamma, lam, step, cache)
    with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
        chis = np.array(list(pool.map(lambda h: chi_fn(float(h)), hs)))
    if not np.all(np.isfinite(chis)) or np.any(chis <= 0):
        raise SingularSusceptibilityError("chi must be finite and positive across the window")

    xs = np.log(distances)
    ys = np.log(chis)
    curvature = log_curvature(xs, ys)
    if curvature > curvature_limit:
        raise WindowTooCloseError(curvature, curvature_limit)
    fit = _linear_fit(xs, ys)
    logger.info("ln chi vs ln|h - 1| on %s: slope=%.6f r^2=%.6f", window, fit.slope, fit.r_squared)
    return fit


def collapse_table(
    n_list: Sequence[int],
    gamma: float,
    nu: Optional[float] = None,
    x_range: Tuple[float, float] = (-1.0, 1.0),
    points: int = 21,
    peaks: Optional[Mapping[int, PeakResult]] = None,
    step: Optional[float] = None,
    lam: float = 1.0,
    workers: Optional[int] = None,
    cache: Optional[GroundStateCache] = None,
) -> List[CollapseRow]:
    """Rows (N, x, h, q) with h = h_m + x N^-nu and q = chi_m / chi(h), grouped by N."""
    _require_anisotropic(gamma)
    nu = settings.numerics.collapse_nu if nu is None else nu
    if nu <= 0:
        raise ParameterError("nu must be > 0")
    if points < 2 or not x_range[0] < x_range[1]:
        raise ParameterError("need points >= 2 and x_min < x_max")
    sizes = sorted(set(n_list))
    cache = GroundStateCache() if cache is None else cache
    known: Dict[int, PeakResult] = dict(peaks or {})
    missing = [n for n in sizes if n not in known]
    for peak in find_peaks(missing, gamma, workers=workers, step=step, lam=lam, cache=cache):
        known[peak.n_spins] = peak

    xs = np.linspace(x_range[0], x_range[1], points)
    rows: List[CollapseRow] = []
    for n in sizes:
        peak = known[n]
        chi_fn = _default_chi_fn(n, gamma, lam, step, cache)
        fields = peak.h_m + xs * n ** (-nu)

        def q_at(h: float) -> float:
            if h <= 0:
                return NAN
            chi = _safe(chi_fn, h)
            return peak.chi_m / chi if chi > 0 else NAN

        with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
            qs = list(pool.map(lambda h: q_at(float(h)), fields))
        for x, h, q in zip(xs, fields, qs):
            if not math.isfinite(q):
                logger.warning("collapse row skipped: N=%d x=%.4g h=%.6g", n, x, h)
                continue
            rows.append(CollapseRow(n_spins=n, x=float(x), h=float(h), q=q))
    return rows


def collapse_spread(rows: Sequence[CollapseRow]) -> float:
    """Largest (max q - min q) / min q across sizes at a shared x."""
    by_x: Dict[float, List[float]] = {}
    for row in rows:
        by_x.setdefault(round(row.x, 12), []).append(row.q)
    spreads = [(max(qs) - min(qs)) / min(qs) for qs in by_x.values() if len(qs) > 1]
    if not spreads:
        raise ParameterError("no x value is shared by two system sizes")
    return max(spreads)


__all__ = [
    "SweepRow",
    "PeakResult",
    "ScalingFit",
    "CollapseRow",
    "chi_oracle",
    "evaluate_chi",
    "sweep_chi",
    "find_peak",
    "find_peaks",
    "fit_peak_exponent",
    "log_curvature",
    "fit_thermo_exponent",
    "collapse_table",
    "collapse_spread",
]
