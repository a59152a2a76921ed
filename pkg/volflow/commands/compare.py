# volflow/commands/compare.py
"""Comparação da taxa com as fórmulas de Hodgson (n=2), BFG (n=3) e DGG (todo n)."""
import argparse
import logging
import time
from typing import List, Tuple

import numpy as np

from volflow.commands._suite import print_suite, tolerance_for
from volflow.errors import CheckFailure
from volflow.models import CheckResult, HodgsonData, RunConfig, SuiteReport
from volflow.services.variation import (
    BFG_SIGN,
    DGG_SIGN,
    CuspJet,
    bfg_coords,
    bfg_rate,
    check_sign_consistency,
    dgg_coords,
    dgg_rate,
    hodgson_data_from_jet,
    hodgson_jet,
    hodgson_rate,
    random_jet,
    veronese_jet,
    volume_rate,
)
from volflow.utils.numerics import calibrate_sign, derive_seed

logger = logging.getLogger(__name__)

NAME = "compare"
HELP = "compara a taxa com Hodgson, BFG e DGG em jatos aleatórios"
DEFAULT_SIZES = "2..5"

HODGSON_SIGN = 1

# jato de referência para a calibração (dados de Hodgson fixos, empurrados por Veronese)
REFERENCE_DATA = HodgsonData(l1=0.3, theta1=1.1, l2=0.7, theta2=-0.4, dl1=0.2, dtheta1=0.5, dl2=-0.1, dtheta2=0.9)


# --------- Helpers ---------
def reference_jet(n: int) -> CuspJet:
    jet = hodgson_jet(REFERENCE_DATA)
    return jet if n == 2 else veronese_jet(n, jet)


def _dgg_value(jet: CuspJet) -> float:
    return dgg_rate(jet.n, *dgg_coords(jet))


def _bfg_value(jet: CuspJet) -> float:
    return 4 * bfg_rate(bfg_coords(jet))


def _hodgson_value(jet: CuspJet) -> float:
    return hodgson_rate([hodgson_data_from_jet(jet)])


def _comparator_check(
    name: str, n: int, pairs: List[Tuple[float, float]], sign: int, tol: float, started: float
) -> CheckResult:
    residual = max(abs(value - sign * rate) for rate, value in pairs)
    return CheckResult(
        name=f"{name}_agreement", n=n, trials=len(pairs), max_residual=residual, tolerance=tol,
        wall_time=time.perf_counter() - started,
    )


def _sign_check(name: str, n: int, pairs: List[Tuple[float, float]], sign: int, started: float) -> CheckResult:
    # calibração no jato de referência, depois consistência em todas as tentativas
    ref = reference_jet(n)
    observed = calibrate_sign(volume_rate([ref]), COMPARATORS[name][0](ref))
    try:
        if observed not in (0, sign):
            raise CheckFailure(f"sinal de {name} no jato de referência é {observed:+d}, constante {sign:+d}")
        check_sign_consistency(name, pairs, sign)
        ok = True
    except CheckFailure as exc:
        logger.error("%s", exc.detail)
        ok = False
    return CheckResult(
        name=f"{name}_sign_consistency", n=n, trials=len(pairs), max_residual=0.0 if ok else 1.0,
        tolerance=0.5, wall_time=time.perf_counter() - started,
    )


COMPARATORS = {
    # nome: (valor a partir do jato, sinal calibrado, tamanhos aplicáveis)
    "hodgson": (_hodgson_value, HODGSON_SIGN, lambda n: n == 2),
    "dgg": (_dgg_value, DGG_SIGN, lambda n: True),
    "bfg": (_bfg_value, BFG_SIGN, lambda n: n == 3),
}


def _random_jets(n: int, cfg: RunConfig) -> List[CuspJet]:
    if n == 2:
        # jatos de n=2 com diagonais gerais (dados de Hodgson aleatórios)
        out = []
        for trial in range(cfg.trials):
            values = np.random.default_rng(derive_seed(cfg.seed, n, trial)).standard_normal(8)
            out.append(hodgson_jet(HodgsonData(**dict(zip(HodgsonData.model_fields, values)))))
        return out
    return [random_jet(n, derive_seed(cfg.seed, n, trial)) for trial in range(cfg.trials)]


# --------- Comando ---------
def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.set_defaults(n=DEFAULT_SIZES)


def cmd_compare(cfg: RunConfig) -> SuiteReport:
    tol = tolerance_for("oracle", cfg.tol)
    checks: List[CheckResult] = []
    signs = {}
    for n in cfg.sizes:
        jets = _random_jets(n, cfg)
        rates = [volume_rate([j]) for j in jets]
        for name, (value_of, sign, applies) in COMPARATORS.items():
            if not applies(n):
                continue
            started = time.perf_counter()
            pairs = [(rate, value_of(j)) for rate, j in zip(rates, jets)]
            checks.append(_comparator_check(name, n, pairs, sign, tol, started))
            checks.append(_sign_check(name, n, pairs, sign, started))
            signs[name] = sign
        if n == 2:
            # dgg contra hodgson diretamente
            started = time.perf_counter()
            pairs = [(_hodgson_value(j), _dgg_value(j)) for j in jets]
            checks.append(_comparator_check("dgg_vs_hodgson", n, pairs, DGG_SIGN * HODGSON_SIGN, tol, started))
    logger.info("compare: sinais %s", signs)
    return SuiteReport(command=NAME, seed=cfg.seed, checks=checks, signs=signs)


execute = cmd_compare
print_report = print_suite
