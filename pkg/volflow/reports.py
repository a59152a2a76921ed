# volflow/reports.py
"""Leitura de entradas JSON e escrita de relatórios (JSON/CSV)."""
import csv
import json
import logging
import os
import tempfile
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Any, Iterator, List, Optional, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from volflow.errors import SchemaError, UsageError, VolflowError
from volflow.models import JetFile, PathSpec
from volflow.services.variation import CuspJet

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


# =========================
# Entrada
# =========================
def _field_path(loc) -> str:
    return ".".join(str(p) for p in loc)


def load_model(path: Path, model: Type[M]) -> M:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"❌ não foi possível ler {path}: {exc.strerror or exc}") from exc
    try:
        return model.model_validate_json(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = _field_path(first["loc"]) or "<raiz>"
        raise SchemaError(f"❌ {path}: campo '{field}' inválido: {first['msg']}", field=field) from exc


def load_jet_file(path: Path) -> JetFile:
    return load_model(path, JetFile)


def load_path_spec(path: Path) -> PathSpec:
    return load_model(path, PathSpec)


def _pair(value: Any, field: str) -> complex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SchemaError(f"❌ campo '{field}': esperava par [re, im]", field=field)
    try:
        z = complex(float(value[0]), float(value[1]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"❌ campo '{field}': par não numérico", field=field) from exc
    if not np.isfinite(z):
        raise SchemaError(f"❌ campo '{field}': valor não finito", field=field)
    return z


def parse_matrix(rows: List[Any], n: int, field: str) -> np.ndarray:
    """Matriz n×n a partir de n linhas de pares [re, im] ou de n² pares em ordem row-major."""
    if len(rows) == n and all(isinstance(r, (list, tuple)) and len(r) == n for r in rows):
        flat = [entry for row in rows for entry in row]
    elif len(rows) == n * n:
        flat = rows
    else:
        raise SchemaError(f"❌ campo '{field}': esperava matriz {n}x{n}", field=field)
    values = [_pair(v, f"{field}.{i}") for i, v in enumerate(flat)]
    return np.array(values, dtype=complex).reshape(n, n)


def jets_from_file(data: JetFile) -> List[CuspJet]:
    jets = []
    for idx, cusp in enumerate(data.cusps):
        parts = {
            name: parse_matrix(getattr(cusp, name), data.n, f"cusps.{idx}.{name}")
            for name in ("a", "b", "da", "db")
        }
        try:
            jets.append(CuspJet(**parts))
        except VolflowError as exc:
            raise SchemaError(f"❌ cúspide {idx}: {exc.detail}", field=f"cusps.{idx}") from exc
    return jets


# =========================
# Saída
# =========================
@contextmanager
def output_scope(path: Optional[Path]) -> Iterator[IO[str]]:
    """
    Arquivo de saída escrito por inteiro ou não escrito: grava num
    temporário no mesmo diretório e renomeia no fim.
    """
    if path is None:
        yield None
        return
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    except OSError as exc:
        raise UsageError(f"❌ não foi possível escrever em {target}: {exc.strerror or exc}") from exc
    handle = os.fdopen(fd, "w", encoding="utf-8", newline="")
    try:
        yield handle
        handle.close()
        os.replace(tmp, target)
    except Exception:
        handle.close()
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_payload(report: BaseModel) -> dict:
    payload = json.loads(report.model_dump_json())
    payload["passed"] = bool(getattr(report, "passed", True))
    return payload


def write_json(report: BaseModel, handle: IO[str]) -> None:
    json.dump(report_payload(report), handle, indent=2, ensure_ascii=False)
    handle.write("\n")


def write_csv(rows: List[BaseModel], handle: IO[str]) -> None:
    if not rows:
        return
    fields = list(type(rows[0]).model_fields)
    writer = csv.DictWriter(handle, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        data = row.model_dump()
        writer.writerow({k: _csv_value(data[k]) for k in fields})


def _csv_value(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return value


def write_report(report: BaseModel, path: Optional[Path], fmt: str) -> None:
    if path is None:
        return
    with output_scope(path) as handle:
        if fmt == "csv":
            write_csv(report.csv_rows(), handle)
        else:
            write_json(report, handle)
    logger.info("relatório gravado em %s (%s)", path, fmt)


def sibling_path(path: Path, fmt: str) -> Path:
    """Mesmo caminho com o sufixo do outro formato (fig8 grava os dois)."""
    return Path(path).with_suffix(".json" if fmt == "json" else ".csv")
