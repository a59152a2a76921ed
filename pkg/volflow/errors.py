# volflow/errors.py
"""
Hierarquia de erros do volflow.

Cada erro carrega o código de saída da CLI e um `detail` legível,
no mesmo espírito do HTTPException(status_code, detail) da API antiga.
"""
from typing import Optional

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3


class VolflowError(Exception):
    exit_code: int = EXIT_USAGE

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


# --------- Uso / entrada ---------
class ConfigError(VolflowError):
    exit_code = EXIT_USAGE


class UsageError(VolflowError):
    exit_code = EXIT_USAGE


class SchemaError(VolflowError, ValueError):
    """Entrada JSON inválida; `field` guarda o caminho do campo (ex.: cusps.0.da)."""
    exit_code = EXIT_USAGE

    def __init__(self, detail: str, field: Optional[str] = None):
        super().__init__(detail)
        self.field = field


# --------- Álgebra ---------
class InvalidSizeError(VolflowError, ValueError):
    exit_code = EXIT_USAGE


class SizeMismatchError(VolflowError, ValueError):
    exit_code = EXIT_USAGE


class MembershipError(VolflowError, ValueError):
    exit_code = EXIT_USAGE


class SingularMatrixError(VolflowError, ValueError):
    exit_code = EXIT_USAGE


class SingularPointError(VolflowError, ValueError):
    exit_code = EXIT_USAGE


class NonCommutingError(VolflowError, ValueError):
    exit_code = EXIT_USAGE


class BranchError(VolflowError, ValueError):
    exit_code = EXIT_SOLVER


# --------- Numérico ---------
class SolverError(VolflowError, RuntimeError):
    exit_code = EXIT_SOLVER

    def __init__(self, detail: str, sample_index: Optional[int] = None):
        if sample_index is not None:
            detail = f"{detail} (amostra {sample_index})"
        super().__init__(detail)
        self.sample_index = sample_index


class CheckFailure(VolflowError):
    exit_code = EXIT_CHECK_FAILURE
