# volflow/commands/veronese.py
"""Imagens de Veronese de diag(1,−1), E₁₂, E₂₁ e as identidades de traço."""
import argparse
import logging

import numpy as np

from volflow.commands._suite import Check, print_suite, run_suite
from volflow.commands.verify import veronese_integer_sums, veronese_trace
from volflow.models import RunConfig, SuiteReport
from volflow.services.variation import veronese_algebra

logger = logging.getLogger(__name__)

NAME = "veronese"
HELP = "mostra σ_n nas matrizes padrão e confere a identidade de traço"
DEFAULT_SIZES = "3"

STANDARD = {
    "diag(1,-1)": np.diag([1.0, -1.0]),
    "E12": np.array([[0.0, 1.0], [0.0, 0.0]]),
    "E21": np.array([[0.0, 0.0], [1.0, 0.0]]),
}

CHECKS = [
    Check("veronese_trace_identity", veronese_trace, "oracle"),
    Check("veronese_integer_sums", veronese_integer_sums, "count", randomized=False),
]


def _format_matrix(m: np.ndarray) -> str:
    rows = []
    for row in m.real:
        rows.append("  [" + " ".join(f"{v:5.0f}" for v in row) + "]")
    return "\n".join(rows)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.set_defaults(n=DEFAULT_SIZES)


def cmd_veronese(cfg: RunConfig) -> SuiteReport:
    for n in cfg.sizes:
        print(f"--- σ_{n} ---")
        for label, x in STANDARD.items():
            print(f"σ_{n}({label}):")
            print(_format_matrix(veronese_algebra(n, x).matrix))
    return run_suite(NAME, CHECKS, cfg)


execute = cmd_veronese
print_report = print_suite
