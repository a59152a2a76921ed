# volflow/commands/rate.py
"""Taxa de variação do volume para jatos de cúspide lidos de um arquivo JSON."""
import argparse
import logging

from volflow.errors import UsageError
from volflow.models import RateReport, RateRow, RunConfig
from volflow.reports import jets_from_file, load_jet_file
from volflow.services.forms import zeta_cochain
from volflow.services.variation import cusp_contributions, torus_pair_eval

logger = logging.getLogger(__name__)

NAME = "rate"
HELP = "avalia a taxa em jatos de cúspide (JSON)"
DEFAULT_TOL = 1e-12


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.set_defaults(n=None)


def cmd_rate(cfg: RunConfig) -> RateReport:
    if cfg.input is None:
        raise UsageError("❌ rate exige --input com o arquivo de jatos")
    data = load_jet_file(cfg.input)
    jets = jets_from_file(data)
    contributions = cusp_contributions(jets)
    zeta = zeta_cochain(data.n)
    rows = [
        RateRow(cusp=idx, rate=rate, zeta_rate=torus_pair_eval(zeta, jet))
        for idx, (rate, jet) in enumerate(zip(contributions, jets))
    ]
    total = sum(r.rate for r in rows)
    zeta_total = sum(r.zeta_rate for r in rows)
    report = RateReport(
        n=data.n,
        rows=rows,
        total=total,
        zeta_total=zeta_total,
        difference=abs(total - zeta_total),
        tolerance=cfg.tol if cfg.tol is not None else DEFAULT_TOL,
    )
    logger.info("rate: %d cúspides, total %.12g", len(rows), total)
    return report


def print_report(report: RateReport) -> None:
    print(f"=== volflow rate (n={report.n}) ===")
    for r in report.rows:
        print(f"cúspide {r.cusp}: taxa={r.rate:.12g}  via ζ={r.zeta_rate:.12g}")
    print(f"Total: {report.total:.12g}")
    print(f"Total via ζ: {report.zeta_total:.12g}")
    status = "ok" if report.passed else "FALHA"
    print(f"Diferença: {report.difference:.3e} (tol {report.tolerance:.1e}) {status}")


execute = cmd_rate
