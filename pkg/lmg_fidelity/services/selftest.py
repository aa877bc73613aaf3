"""
Small-N invariant suites run by ``lmg-fidelity selftest``.

Each suite checks closed forms or algebraic identities against an
independent oracle and reports how many cases it tried and how many failed.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy.linalg import eigh, eigvalsh_tridiagonal

from lmg_fidelity.errors import LmgFidelityError
from lmg_fidelity.models.enums import ParitySector
from lmg_fidelity.models.params import LmgParams
from lmg_fidelity.services.eigensolver import dense_spectrum, ground_state, lowest_eigenpair
from lmg_fidelity.services.fidelity import Block2x2, block_fidelity
from lmg_fidelity.services.hamiltonian import build_sector
from lmg_fidelity.services.isotropic import iso_crossings, iso_energy, iso_m0
from lmg_fidelity.services.observables import rdm_at, spin_moments
from lmg_fidelity.services.scaling import evaluate_chi

logger = logging.getLogger(__name__)

SEED = 20100731

SuiteOutcome = Tuple[int, int, str]


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failed: int
    detail: str
    seconds: float


def _random_density_block(rng: np.random.Generator) -> Block2x2:
    a, d = rng.uniform(0.0, 1.0, size=2)
    b = rng.uniform(-1.0, 1.0) * math.sqrt(a * d)
    return Block2x2(a=a, d=d, b=b)


def _sqrt_psd(matrix: np.ndarray) -> np.ndarray:
    w, v = eigh(matrix)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def suite_n2_energy(rng: np.random.Generator) -> SuiteOutcome:
    failed, worst = 0, 0.0
    for _ in range(100):
        gamma = float(rng.uniform(-1.0, 1.0))
        field = float(rng.uniform(0.0, 2.0))
        params = LmgParams(n_spins=2, gamma=gamma, field=field)
        energy, _ = lowest_eigenpair(build_sector(params, ParitySector.TOP))
        exact = -math.sqrt(4.0 * field**2 + (1.0 - gamma) ** 2 / 4.0)
        err = abs(energy - exact)
        worst = max(worst, err)
        failed += err > 1e-12
    return 100, failed, f"max |E - E_exact| = {worst:.2e}"


def suite_sector_vs_dense(rng: np.random.Generator) -> SuiteOutcome:
    sizes = (2, 3, 5, 8, 13, 21, 32, 64)
    failed, worst = 0, 0.0
    for n in sizes:
        params = LmgParams(n_spins=n, gamma=float(rng.uniform(-1.0, 1.0)), field=float(rng.uniform(0.0, 2.0)))
        parts = []
        for sector in ParitySector:
            matrix = build_sector(params, sector)
            if matrix.order == 1:
                parts.append(matrix.diagonal.copy())
            else:
                parts.append(eigvalsh_tridiagonal(matrix.diagonal, matrix.offdiagonal))
        split = np.sort(np.concatenate(parts))
        dense = dense_spectrum(params)
        err = float(np.max(np.abs(split - dense)) / max(1.0, float(np.max(np.abs(dense)))))
        worst = max(worst, err)
        failed += err > 1e-10
    return len(sizes), failed, f"max relative spectrum mismatch = {worst:.2e}"


def suite_fidelity_identity(rng: np.random.Generator) -> SuiteOutcome:
    failed, worst = 0, 0.0
    for _ in range(1000):
        first, second = _random_density_block(rng), _random_density_block(rng)
        root = _sqrt_psd(first.as_matrix())
        inner = root @ second.as_matrix() @ root
        explicit = float(np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(inner), 0.0, None))))
        err = abs(block_fidelity(first, second) - explicit)
        worst = max(worst, err)
        failed += err > 1e-10
    return 1000, failed, f"max |closed form - explicit sqrt| = {worst:.2e}"


def suite_trace_square(rng: np.random.Generator) -> SuiteOutcome:
    failed, worst = 0, 0.0
    for _ in range(1000):
        block = _random_density_block(rng)
        matrix = block.as_matrix()
        err = abs(float(np.trace(matrix @ matrix)) - (block.trace**2 - 2.0 * block.det))
        worst = max(worst, err)
        failed += err > 1e-12
    return 1000, failed, f"max |tr A^2 - ((tr A)^2 - 2 det A)| = {worst:.2e}"


def suite_rdm_invariants(rng: np.random.Generator) -> SuiteOutcome:
    checked = failed = 0
    for n in (8, 16, 32):
        for gamma in (0.0, 0.5):
            for field in (0.9, 1.2, 1.5):
                params = LmgParams(n_spins=n, gamma=gamma, field=field)
                gs, rdm = rdm_at(params)
                moments = spin_moments(gs, n)
                spin = n / 2.0
                sum_rule = abs(moments.sxx + moments.syy + moments.szz - spin * (spin + 1.0)) / (spin * (spin + 1.0))
                result, _ = evaluate_chi(params, with_oracle=False)
                ok = (
                    abs(rdm.trace - 1.0) <= 1e-12
                    and min(rdm.v_plus, rdm.v_minus, rdm.y, rdm.v_plus * rdm.v_minus - rdm.u**2) >= -1e-12
                    and sum_rule <= 1e-9
                    and abs(result.chi_total - sum(result.per_block)) <= 1e-10
                )
                checked += 1
                failed += not ok
    return checked, failed, "trace, positivity, sum rule, block split"


def suite_chi_vs_oracle(rng: np.random.Generator) -> SuiteOutcome:
    checked = failed = 0
    worst = 0.0
    for gamma in (0.0, 0.5):
        for field in (0.9, 1.2, 1.5):
            result, _ = evaluate_chi(LmgParams(n_spins=32, gamma=gamma, field=field))
            err = abs(result.chi_total - result.oracle_chi)
            rel = err / max(abs(result.chi_total), 1e-300)
            worst = max(worst, rel)
            checked += 1
            failed += not (rel <= 5e-3 or err <= 1e-6)
    return checked, failed, f"max relative chi/oracle mismatch = {worst:.2e}"


def suite_isotropic(rng: np.random.Generator) -> SuiteOutcome:
    checked = failed = 0
    for _ in range(200):
        n = int(rng.integers(2, 51))
        field = float(rng.uniform(0.0, 1.5))
        ground = iso_m0(n, field)
        if ground.degenerate:
            continue
        m_all = n / 2.0 - np.arange(n + 1)
        best = float(m_all[np.argmin([iso_energy(n, m, field) for m in m_all])])
        checked += 1
        failed += best != ground.m0
    for n in (4, 10, 50):
        crossings = iso_crossings(n)
        checked += 1
        failed += crossings != sorted(crossings) or len(crossings) != (n + 1) // 2
    return checked, failed, "M0 minimizes E(M, h); crossing list"


def suite_isotropic_vs_solver(rng: np.random.Generator) -> SuiteOutcome:
    checked = failed = 0
    for n in (2, 5, 10, 20):
        for field in rng.uniform(0.0, 1.5, size=5):
            ground = iso_m0(n, float(field))
            if ground.degenerate:
                continue
            gs = ground_state(LmgParams(n_spins=n, gamma=1.0, field=float(field)))
            checked += 1
            failed += abs(gs.energy - ground.energy) > 1e-10
    return checked, failed, "gamma = 1 solver energy equals E(M0, h)"


SUITES: Tuple[Tuple[str, Callable[[np.random.Generator], SuiteOutcome]], ...] = (
    ("n2-energy", suite_n2_energy),
    ("sector-vs-dense", suite_sector_vs_dense),
    ("fidelity-identity", suite_fidelity_identity),
    ("trace-square-identity", suite_trace_square),
    ("rdm-invariants", suite_rdm_invariants),
    ("chi-vs-oracle", suite_chi_vs_oracle),
    ("isotropic-m0", suite_isotropic),
    ("isotropic-vs-solver", suite_isotropic_vs_solver),
)


def run_selftest(seed: int = SEED) -> List[SuiteResult]:
    results = []
    for name, suite in SUITES:
        rng = np.random.default_rng(seed)
        started = time.perf_counter()
        try:
            checked, failed, detail = suite(rng)
        except LmgFidelityError as exc:
            checked, failed, detail = 0, 1, f"raised {type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - started
        results.append(SuiteResult(name, failed == 0, checked, failed, detail, elapsed))
        logger.info("suite %s: %d/%d passed (%.2fs)", name, checked - failed, checked, elapsed)
    return results


__all__ = ["SuiteResult", "SUITES", "run_selftest"]
