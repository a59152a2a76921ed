# volflow/commands/fig8.py
"""Experimento de deformação do figura-oito (CSV e JSON)."""
import argparse
import logging

from volflow.models import DeformationReport, PathSpec, RunConfig
from volflow.reports import sibling_path, write_report
from volflow.services.fig8 import deformation_experiment

logger = logging.getLogger(__name__)

NAME = "fig8"
HELP = "roda o experimento de deformação do nó figura-oito"


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--u0", default=None, help="ponto final RE,IM do caminho (ex.: 0.1,0.05)")
    parser.add_argument("--kind", choices=["radial", "circle", "list"], default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--richardson", action="store_true", help="jatos com estêncil de cinco pontos")
    parser.set_defaults(n=None)


def cmd_fig8(cfg: RunConfig) -> DeformationReport:
    path = cfg.path or PathSpec()
    report = deformation_experiment(path, seed=cfg.seed, richardson=cfg.richardson)
    if cfg.output is not None:
        # o relatório sai nos dois formatos
        other = "csv" if cfg.format == "json" else "json"
        write_report(report, sibling_path(cfg.output, other), other)
    return report


def print_report(report: DeformationReport) -> None:
    print(f"=== volflow fig8 ({report.path.kind}, {len(report.rows)} amostras) ===")
    print(f"{'t':>8} {'u':>24} {'v':>24} {'vol':>14} {'taxa':>12} {'taxa_fd':>12} {'∫taxa':>12}")
    for r in report.rows:
        u = complex(r.u_re, r.u_im)
        v = complex(r.v_re, r.v_im)
        print(f"{r.t:8.4f} {u:24.6g} {v:24.6g} {r.vol:14.10f} {r.rate:12.4e} {r.rate_fd:12.4e} {r.int_rate:12.4e}")
    d = report.diagnostics
    tau = complex(*d["tau"])
    print(f"τ ≈ {tau:.8g}")
    if "quartic" in d:
        print(f"Inclinação quártica: {d['quartic']['slope']:.3f}")
    if "nondiff_c" in d:
        print(f"Ajuste c (vol − vol₀ = c·|2cosh(u/2) − 2|): {d['nondiff_c']:.6f}")
    for c in report.checks:
        status = "ok  " if c.passed else "FAIL"
        print(f"{status} {c.name:<36} max={c.max_residual:.3e} tol={c.tolerance:.1e}")


execute = cmd_fig8
