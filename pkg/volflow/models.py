# volflow/models.py
"""Schemas pydantic de entrada (JSON) e de relatórios."""
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, confloat, conint, conlist, model_validator

FiniteFloat = confloat(allow_inf_nan=False)
ComplexPair = conlist(FiniteFloat, min_length=2, max_length=2)  # [re, im]

CommandName = Literal["verify", "rate", "fig8", "compare", "veronese"]
OutputFormat = Literal["json", "csv"]
PathKind = Literal["radial", "circle", "list"]

MAX_PATH_MODULUS = 0.5
PATH_FD_STEP = 1e-4
PATH_FD_REACH = 2 * PATH_FD_STEP  # estêncil de 5 pontos passa de [0, 1] por 2 passos


def pair_to_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def complex_to_pair(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


# --------- Entrada: jatos de cúspide ---------
class HodgsonData(BaseModel):
    """Comprimentos de translação / ângulos de rotação (radianos) e derivadas."""
    l1: FiniteFloat
    theta1: FiniteFloat
    l2: FiniteFloat
    theta2: FiniteFloat
    dl1: FiniteFloat = 0.0
    dtheta1: FiniteFloat = 0.0
    dl2: FiniteFloat = 0.0
    dtheta2: FiniteFloat = 0.0


class CuspJetIn(BaseModel):
    # matrizes row-major: n linhas de n pares [re, im] ou lista plana de n² pares
    a: List[Any]
    b: List[Any]
    da: List[Any]
    db: List[Any]


class JetFile(BaseModel):
    n: conint(ge=2)
    cusps: conlist(CuspJetIn, min_length=1)


# --------- Entrada: caminho do figure-eight ---------
class PathSpec(BaseModel):
    u0: ComplexPair = Field(default_factory=lambda: [0.1, 0.05])
    kind: PathKind = "radial"
    samples: conint(ge=9) = 33
    points: Optional[List[ComplexPair]] = None  # só para kind == "list"

    @model_validator(mode="after")
    def _check_path(self):
        if self.kind == "list":
            if not self.points or len(self.points) < 9:
                raise ValueError("kind 'list' exige 'points' com pelo menos 9 amostras")
            pts = [pair_to_complex(p) for p in self.points]
            reach = PATH_FD_REACH * (len(pts) - 1)
            ends = [pts[0] - (pts[1] - pts[0]) * reach, pts[-1] + (pts[-1] - pts[-2]) * reach]
            moduli = [abs(z) for z in pts + ends]
        elif self.kind == "radial":
            moduli = [abs(pair_to_complex(self.u0)) * (1 + PATH_FD_REACH)]
        else:
            moduli = [abs(pair_to_complex(self.u0))]
        if max(moduli) >= MAX_PATH_MODULUS:
            raise ValueError(
                f"|u| deve ficar abaixo de {MAX_PATH_MODULUS} (vizinhança de Dehn, incluindo o estêncil de diferenças)"
            )
        return self


# --------- Configuração de execução ---------
class RunConfig(BaseModel):
    command: CommandName
    n_min: conint(ge=2) = 2
    n_max: conint(ge=2) = 2
    trials: conint(ge=1) = 100
    seed: int = 0
    tol: Optional[confloat(gt=0)] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    format: OutputFormat = "json"
    threads: conint(ge=1) = 1
    richardson: bool = False
    path: Optional[PathSpec] = None

    @model_validator(mode="after")
    def _check_range(self):
        if self.n_min > self.n_max:
            raise ValueError(f"intervalo de n vazio: {self.n_min}..{self.n_max}")
        return self

    @property
    def sizes(self) -> List[int]:
        return list(range(self.n_min, self.n_max + 1))


# --------- Relatórios ---------
class CheckResult(BaseModel):
    name: str
    n: Optional[int] = None
    trials: int
    max_residual: float
    tolerance: float
    passed: bool = False
    wall_time: float = 0.0

    @model_validator(mode="after")
    def _sync_passed(self):
        # aprovado ⇔ resíduo máximo < tolerância (NaN reprova)
        self.passed = bool(not math.isnan(self.max_residual) and self.max_residual < self.tolerance)
        return self


class SuiteReport(BaseModel):
    command: str
    seed: int = 0
    checks: List[CheckResult] = Field(default_factory=list)
    signs: Dict[str, int] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def csv_rows(self) -> List[BaseModel]:
        return self.checks


class RateRow(BaseModel):
    cusp: int
    rate: float
    zeta_rate: float


class RateReport(BaseModel):
    n: int
    rows: List[RateRow]
    total: float
    zeta_total: float
    difference: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.difference < self.tolerance

    def csv_rows(self) -> List[BaseModel]:
        return self.rows


class DeformationRow(BaseModel):
    t: float
    u_re: float
    u_im: float
    v_re: float
    v_im: float
    vol: float
    rate: float
    rate_fd: float
    int_rate: float


class DeformationReport(BaseModel):
    path: PathSpec
    rows: List[DeformationRow] = Field(default_factory=list)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckResult] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_monotone(self):
        ts = [r.t for r in self.rows]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("parâmetro t do relatório não é crescente")
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def csv_rows(self) -> List[BaseModel]:
        return self.rows
