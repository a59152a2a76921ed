# volflow/commands/_suite.py
"""Execução de baterias de checagens com tentativas semeadas."""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Literal, Optional

from volflow import config
from volflow.models import CheckResult, RunConfig, SuiteReport
from volflow.utils.numerics import derive_seed

logger = logging.getLogger(__name__)

ToleranceKind = Literal["algebra", "oracle", "exact", "count"]

EXACT_TOL = 1e-12
COUNT_TOL = 0.5  # resíduos inteiros (dimensões, somas)


@dataclass(frozen=True)
class Check:
    name: str
    residual: Callable[[int, int], float]  # (n, semente) -> resíduo
    tolerance: ToleranceKind = "algebra"
    applies: Callable[[int], bool] = lambda n: True
    randomized: bool = True


def tolerance_for(kind: ToleranceKind, override: Optional[float]) -> float:
    if override is not None:
        return override
    return {
        "algebra": config.TOL_ALGEBRA,
        "oracle": config.TOL_ORACLE,
        "exact": EXACT_TOL,
        "count": COUNT_TOL,
    }[kind]


def run_check(check: Check, n: int, index: int, cfg: RunConfig) -> CheckResult:
    trials = cfg.trials if check.randomized else 1
    seeds = [derive_seed(cfg.seed, n, index, trial) for trial in range(trials)]
    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        residuals = list(pool.map(lambda s: float(abs(check.residual(n, s))), seeds))
    wall = time.perf_counter() - started
    result = CheckResult(
        name=check.name,
        n=n,
        trials=trials,
        max_residual=max(residuals),
        tolerance=tolerance_for(check.tolerance, cfg.tol),
        wall_time=wall,
    )
    level = logging.DEBUG if result.passed else logging.WARNING
    logger.log(level, "%s (n=%d): resíduo %.3e / tol %.1e em %.3fs", check.name, n, result.max_residual, result.tolerance, wall)
    return result


def run_suite(command: str, checks: Iterable[Check], cfg: RunConfig) -> SuiteReport:
    checks = list(checks)
    results: List[CheckResult] = []
    for n in cfg.sizes:
        for index, check in enumerate(checks):
            if check.applies(n):
                results.append(run_check(check, n, index, cfg))
    return SuiteReport(command=command, seed=cfg.seed, checks=results)


def print_suite(report: SuiteReport) -> None:
    print(f"=== volflow {report.command} (seed {report.seed}) ===")
    for c in report.checks:
        status = "ok  " if c.passed else "FAIL"
        size = "-" if c.n is None else str(c.n)
        print(f"{status} {c.name:<36} n={size:<3} trials={c.trials:<5} max={c.max_residual:.3e} tol={c.tolerance:.1e}")
    for name, sign in report.signs.items():
        print(f"sinal {name}: {sign:+d}")
    total = len(report.checks)
    failed = sum(1 for c in report.checks if not c.passed)
    print(f"Checagens: {total}  Falhas: {failed}")
