# volflow/main.py
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from dotenv import load_dotenv
from pydantic import ValidationError

# Carrega variáveis de ambiente antes de ler a configuração
load_dotenv()

from volflow import config  # noqa: E402
from volflow.commands import COMMANDS  # noqa: E402
from volflow.errors import EXIT_CHECK_FAILURE, EXIT_OK, EXIT_USAGE, UsageError, VolflowError  # noqa: E402
from volflow.models import PathSpec, RunConfig  # noqa: E402
from volflow.reports import load_path_spec, write_report  # noqa: E402

logger = logging.getLogger("volflow")


# --------- Helpers ---------
def parse_sizes(text: Optional[str]) -> Tuple[int, int]:
    """'k' ou 'a..b'."""
    if text is None:
        return 2, 2
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        k = int(text)
        return k, k
    except ValueError:
        raise UsageError(f"❌ --n inválido: {text!r} (use k ou a..b)")


def parse_complex(text: str) -> List[float]:
    try:
        re, im = text.split(",")
        return [float(re), float(im)]
    except ValueError:
        raise UsageError(f"❌ --u0 inválido: {text!r} (use RE,IM)")


def _path_from_args(args) -> Optional[PathSpec]:
    if args.command != "fig8":
        return None
    if args.input is not None:
        return load_path_spec(args.input)
    fields = {}
    if args.u0 is not None:
        fields["u0"] = parse_complex(args.u0)
    if args.kind is not None:
        fields["kind"] = args.kind
    if args.samples is not None:
        fields["samples"] = args.samples
    try:
        return PathSpec(**fields)
    except ValidationError as exc:
        raise UsageError(f"❌ caminho inválido: {exc.errors()[0]['msg']}")


def build_config(args) -> RunConfig:
    n_min, n_max = parse_sizes(args.n)
    try:
        return RunConfig(
            command=args.command,
            n_min=n_min,
            n_max=n_max,
            trials=args.trials,
            seed=args.seed,
            tol=args.tol,
            input=args.input,
            output=args.output,
            format=args.format,
            threads=config.THREADS,
            richardson=getattr(args, "richardson", False),
            path=_path_from_args(args),
        )
    except ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first["loc"])
        raise UsageError(f"❌ opção inválida ({field}): {first['msg']}")


# =========================
# Parser
# =========================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="volflow", description="Variação do volume de representações em SL_n(C)")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, module in COMMANDS.items():
        p = sub.add_parser(name, help=module.HELP)
        p.add_argument("--n", help="tamanho k ou intervalo a..b")
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None, help="sobrescreve todas as tolerâncias")
        p.add_argument("--input", type=Path, default=None)
        p.add_argument("--output", type=Path, default=None)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--verbose", action="store_true")
        module.add_arguments(p)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help sai com 0; erros de argparse com 2
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    level = logging.DEBUG if args.verbose else config.LOG_LEVEL
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    module = COMMANDS[args.command]
    try:
        cfg = build_config(args)
        report = module.execute(cfg)
        write_report(report, cfg.output, cfg.format)
    except VolflowError as exc:
        logger.error("%s", exc.detail)
        print(f"volflow {args.command}: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    module.print_report(report)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILURE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
