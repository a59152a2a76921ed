# volflow/config.py
import os
from dotenv import load_dotenv

from volflow.errors import ConfigError

# Carrega variáveis de ambiente
load_dotenv()

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"❌ {name} deve ser inteiro, recebido {raw!r}")
    if value < 1:
        raise ConfigError(f"❌ {name} deve ser >= 1, recebido {value}")
    return value


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"❌ {name} deve ser numérico, recebido {raw!r}")
    if not value > 0:
        raise ConfigError(f"❌ {name} deve ser positivo, recebido {value}")
    return value


def _env_level(name: str, default: str) -> str:
    raw = (os.getenv(name) or default).strip().upper()
    if raw not in LOG_LEVELS:
        raise ConfigError(f"❌ {name} inválido: {raw!r} (use {sorted(LOG_LEVELS)})")
    return raw


# === Paralelismo ===
THREADS = _env_int("VOLFLOW_THREADS", 1)

# === Logging ===
LOG_LEVEL = _env_level("VOLFLOW_LOG_LEVEL", "WARNING")

# === Tolerâncias padrão (flags da CLI sobrescrevem) ===
TOL_ALGEBRA = _env_float("VOLFLOW_TOL_ALGEBRA", 1e-9)
TOL_ORACLE = _env_float("VOLFLOW_TOL_ORACLE", 1e-10)
TOL_SOLVER = _env_float("VOLFLOW_TOL_SOLVER", 1e-12)

# Pertinência algébrica e comutação (fixas)
EPS_ALG = 1e-10
EPS_COMM = 1e-8
