# volflow/services/variation.py
"""
Taxa de variação do volume a partir dos dados periféricos de cada cúspide,
extração desses dados de holonomias (Lie–Kolchin + logs com ramo),
o funtor de Veronese e as fórmulas de comparação (Hodgson, BFG, DGG).

Convenção: a vem da longitude l_i, b do meridiano m_i.
"""
import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from volflow.config import EPS_COMM
from volflow.errors import (
    BranchError,
    CheckFailure,
    InvalidSizeError,
    MembershipError,
    NonCommutingError,
    SingularMatrixError,
    SizeMismatchError,
    UsageError,
)
from volflow.models import HodgsonData
from volflow.services.forms import DualCochain, omega_eval, zeta_cochain
from volflow.services.lie_core import (
    BorelElement,
    Element,
    SlElement,
    SuElement,
    as_matrix,
    branch_log_upper,
    commuting_triangularize,
    nearest_branch,
    random_element,
    reorder_triangular,
    square_matrix,
)
from volflow.utils.numerics import calibrate_sign, derive_seed, fd_weights, is_uniform, tetrahedral

logger = logging.getLogger(__name__)

# Sinais calibrados (a = longitude, b = meridiano): ambas as fontes
# emparelham o meridiano antes da longitude.
DGG_SIGN = -1
BFG_SIGN = -1

MAX_BRANCH_JUMP = np.pi / 2


# =========================
# Tipos
# =========================
@dataclass(frozen=True, eq=False)
class CuspJet:
    a: BorelElement
    b: BorelElement
    da: BorelElement
    db: BorelElement

    def __post_init__(self):
        for name in ("a", "b", "da", "db"):
            value = getattr(self, name)
            if not isinstance(value, BorelElement):
                shifted = name in ("a", "b")
                object.__setattr__(self, name, BorelElement.from_upper(as_matrix(value), branch_shifted=shifted))
        sizes = {getattr(self, name).n for name in ("a", "b", "da", "db")}
        if len(sizes) != 1:
            raise SizeMismatchError(f"jato com tamanhos misturados: {sorted(sizes)}")

    @property
    def n(self) -> int:
        return self.a.n

    def diagonals(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.diag(getattr(self, k).matrix) for k in ("a", "b", "da", "db"))


@dataclass(frozen=True, eq=False)
class PeripheralPathSample:
    t: float
    rho_l: np.ndarray
    rho_m: np.ndarray

    def __post_init__(self):
        rho_l, rho_m = square_matrix(self.rho_l), square_matrix(self.rho_m)
        if rho_l.shape != rho_m.shape:
            raise SizeMismatchError("holonomias periféricas de tamanhos diferentes")
        defect = np.abs(rho_l @ rho_m - rho_m @ rho_l).max()
        if defect > EPS_COMM * max(1.0, np.abs(rho_l).max() * np.abs(rho_m).max()):
            raise NonCommutingError(f"ρ(l) e ρ(m) não comutam em t={self.t} (defeito {defect:.2e})")
        for name, m in (("rho_l", rho_l), ("rho_m", rho_m)):
            det = np.linalg.det(m)
            if abs(det - 1.0) > 1e-8:
                raise SingularMatrixError(f"{name} com determinante {det:.6g} != 1 em t={self.t}")
        object.__setattr__(self, "rho_l", rho_l)
        object.__setattr__(self, "rho_m", rho_m)


class DggCoords(NamedTuple):
    lam: np.ndarray
    mu: np.ndarray
    dlam: np.ndarray
    dmu: np.ndarray


class BfgCoords(NamedTuple):
    log_a: complex
    log_a_star: complex
    log_b: complex
    log_b_star: complex
    dlog_a: complex
    dlog_a_star: complex
    dlog_b: complex
    dlog_b_star: complex


# =========================
# Taxa
# =========================
def torus_pair_eval(c: DualCochain, jet: CuspJet) -> float:
    """c(a)(ḃ) − c(b)(ȧ)."""
    if c.degree != 1:
        raise SizeMismatchError(f"torus_pair_eval exige cocadeia dual de grau 1, recebeu grau {c.degree}")
    return c(jet.a)(jet.db) - c(jet.b)(jet.da)


def _check_jets(jets: Sequence[CuspJet]) -> None:
    if not jets:
        raise InvalidSizeError("lista de cúspides vazia")


def cusp_contributions(jets: Sequence[CuspJet]) -> List[float]:
    """tr(Re(b)·Im(ȧ) − Re(a)·Im(ḃ)) por cúspide."""
    _check_jets(jets)
    out = []
    for jet in jets:
        a, b = jet.a.matrix, jet.b.matrix
        da, db = jet.da.matrix, jet.db.matrix
        out.append(float(np.trace(b.real @ da.imag - a.real @ db.imag)))
    return out


def volume_rate(jets: Sequence[CuspJet]) -> float:
    # soma em ordem de índice (reprodutível)
    return float(sum(cusp_contributions(jets)))


def zeta_path_rate(jets: Sequence[CuspJet]) -> float:
    """Mesma taxa pelo caminho independente Σ torus_pair_eval(ζ, ·)."""
    _check_jets(jets)
    return float(sum(torus_pair_eval(zeta_cochain(j.n), j) for j in jets))


def random_jet(n: int, seed: int) -> CuspJet:
    parts = [random_element("borel", n, derive_seed(seed, k)) for k in range(4)]
    return CuspJet(*parts)


def permuted_jet(jet: CuspJet, order: Sequence[int]) -> CuspJet:
    """Permuta simultaneamente as diagonais de (a, b, ȧ, ḃ), mantendo a parte unipotente."""
    order = np.asarray(order)
    parts = {}
    for name in ("a", "b", "da", "db"):
        src = getattr(jet, name)
        m = np.triu(src.matrix, 1) + np.diag(np.diag(src.matrix)[order])
        parts[name] = BorelElement(m, branch_shifted=src.branch_shifted)
    return CuspJet(**parts)


def shifted_jet(jet: CuspJet, shift_a: Sequence[int], shift_b: Sequence[int]) -> CuspJet:
    """a ↦ a + 2πi·diag(k), b ↦ b + 2πi·diag(k') com inteiros constantes em t."""
    a = jet.a.matrix + 2j * np.pi * np.diag(np.asarray(shift_a, dtype=float))
    b = jet.b.matrix + 2j * np.pi * np.diag(np.asarray(shift_b, dtype=float))
    return CuspJet(
        a=BorelElement(a, branch_shifted=True), b=BorelElement(b, branch_shifted=True), da=jet.da, db=jet.db
    )


# --------- Hodgson ---------
def hodgson_rate(data: Sequence[HodgsonData]) -> float:
    return float(sum(0.5 * (d.l2 * d.dtheta1 - d.l1 * d.dtheta2) for d in data))


def _sl2_diag(z: complex) -> np.ndarray:
    return np.diag([z / 2, -z / 2])


def hodgson_jet(data: HodgsonData) -> CuspJet:
    return CuspJet(
        a=BorelElement(_sl2_diag(complex(data.l1, data.theta1))),
        b=BorelElement(_sl2_diag(complex(data.l2, data.theta2))),
        da=BorelElement(_sl2_diag(complex(data.dl1, data.dtheta1))),
        db=BorelElement(_sl2_diag(complex(data.dl2, data.dtheta2))),
    )


def hodgson_data_from_jet(jet: CuspJet) -> HodgsonData:
    if jet.n != 2:
        raise InvalidSizeError(f"dados de Hodgson só existem para n=2, recebido n={jet.n}")
    a, b, da, db = (d[0] for d in jet.diagonals())
    return HodgsonData(
        l1=2 * a.real, theta1=2 * a.imag, l2=2 * b.real, theta2=2 * b.imag,
        dl1=2 * da.real, dtheta1=2 * da.imag, dl2=2 * db.real, dtheta2=2 * db.imag,
    )


# --------- DGG ---------
def cartan_matrix(n: int) -> np.ndarray:
    """Matriz de Cartan tridiagonal de tamanho n−1."""
    m = n - 1
    return 2 * np.eye(m) - np.eye(m, k=1) - np.eye(m, k=-1)


def dgg_coords(jet: CuspJet) -> DggCoords:
    a, b, da, db = jet.diagonals()
    return DggCoords(np.diff(a), np.diff(b), np.diff(da), np.diff(db))


def dgg_rate(n: int, lam, mu, dlam, dmu) -> float:
    """Σ_ij (κ⁻¹)_ij (Re λ_i·Im dμ_j − Re μ_j·Im dλ_i)."""
    arrs = [np.asarray(x, dtype=complex).ravel() for x in (lam, mu, dlam, dmu)]
    if any(len(x) != n - 1 for x in arrs):
        raise SizeMismatchError(f"coordenadas DGG devem ter {n - 1} entradas")
    lam, mu, dlam, dmu = arrs
    kinv = np.linalg.inv(cartan_matrix(n))
    return float(lam.real @ kinv @ dmu.imag - dlam.imag @ kinv @ mu.real)


# --------- BFG (n = 3) ---------
def bfg_coords(jet: CuspJet) -> BfgCoords:
    if jet.n != 3:
        raise InvalidSizeError(f"coordenadas BFG exigem n=3, recebido n={jet.n}")
    a, b, da, db = jet.diagonals()
    return BfgCoords(
        log_a=b[2] - b[1], log_a_star=b[1] - b[0],
        log_b=a[2] - a[1], log_b_star=a[1] - a[0],
        dlog_a=db[2] - db[1], dlog_a_star=db[1] - db[0],
        dlog_b=da[2] - da[1], dlog_b_star=da[1] - da[0],
    )


def _wedge_z(f: complex, df: complex, g: complex, dg: complex) -> float:
    # Im(dlog∧log)(f∧g) = log|g|·d arg f − log|f|·d arg g
    return g.real * df.imag - f.real * dg.imag


def bfg_rate(c: BfgCoords) -> float:
    """(1/12)·Im(dlog∧log)(2A∧B + 2A*∧B* + A*∧B + A∧B*)."""
    a = (c.log_a, c.dlog_a)
    a_star = (c.log_a_star, c.dlog_a_star)
    b = (c.log_b, c.dlog_b)
    b_star = (c.log_b_star, c.dlog_b_star)
    total = (
        2 * _wedge_z(*a, *b)
        + 2 * _wedge_z(*a_star, *b_star)
        + _wedge_z(*a_star, *b)
        + _wedge_z(*a, *b_star)
    )
    return float(total / 12)


# --------- Calibração de sinais ---------
def check_sign_consistency(name: str, pairs: Sequence[Tuple[float, float]], expected: int) -> int:
    """
    Sinal observado em todos os pares (referência, valor).

    Pares degenerados (sinal 0) são ignorados; qualquer inversão entre
    tentativas, ou divergência da constante calibrada, é falha.
    """
    signs = [calibrate_sign(ref, value) for ref, value in pairs]
    seen: Dict[int, int] = {}
    for idx, s in enumerate(signs):
        if s:
            seen.setdefault(s, idx)
    if len(seen) > 1:
        raise CheckFailure(f"sinal de {name} inverteu entre tentativas (primeira inversão na tentativa {max(seen.values())})")
    if seen and expected not in seen:
        raise CheckFailure(f"sinal de {name} observado {next(iter(seen)):+d}, calibrado {expected:+d}")
    logger.debug("sinal de %s consistente em %d pares", name, len(signs))
    return expected if seen else 0


# =========================
# Veronese
# =========================
def veronese_group(n: int, m) -> np.ndarray:
    """
    Ação de m ∈ SL_2 nas formas binárias de grau n−1, base monomial
    (x^{n−1}, x^{n−2}y, …, y^{n−1}): a linha k é v_k(m·(x,y)) nessa base.
    """
    mat = np.asarray(m, dtype=complex)
    if mat.shape != (2, 2):
        raise InvalidSizeError(f"veronese_group exige matriz 2x2, recebido {mat.shape}")
    if n < 2:
        raise InvalidSizeError(f"tamanho n={n} inválido (n >= 2)")
    if abs(np.linalg.det(mat) - 1.0) > 1e-9:
        raise SingularMatrixError(f"entrada não unimodular (det = {np.linalg.det(mat):.6g})")
    x_image = mat[0]  # coeficientes (x, y) de m11·x + m12·y
    y_image = mat[1]
    rows = []
    for k in range(n):
        poly = np.array([1.0 + 0j])
        for _ in range(n - 1 - k):
            poly = np.convolve(poly, x_image)
        for _ in range(k):
            poly = np.convolve(poly, y_image)
        rows.append(poly)
    return np.array(rows)


def _veronese_gl2(n: int, x: np.ndarray) -> np.ndarray:
    # derivada da ação em gl_2; em sl_2 a diagonal é (n−1−2k)·x11
    k = np.arange(n)
    out = np.diag((n - 1 - k) * x[0, 0] + k * x[1, 1])
    out = out + np.diag((n - 1 - k[:-1]) * x[0, 1], 1)
    out = out + np.diag(k[1:] * x[1, 0], -1)
    return out.astype(complex)


def veronese_algebra(n: int, x: Element) -> SlElement:
    xm = as_matrix(x)
    if xm.shape != (2, 2):
        raise InvalidSizeError(f"veronese_algebra exige elemento de sl_2, recebido {xm.shape}")
    if n < 2:
        raise InvalidSizeError(f"tamanho n={n} inválido (n >= 2)")
    if abs(np.trace(xm)) > 1e-10 * max(1.0, np.abs(xm).max()):
        raise MembershipError("veronese_algebra exige elemento de traço nulo")
    return SlElement(_veronese_gl2(n, xm))


def _unitary_normalizer(n: int) -> np.ndarray:
    return np.sqrt(np.array([comb(n - 1, k) for k in range(n)], dtype=float))


def unitary_veronese_algebra(n: int, x: Element) -> SlElement:
    """σ_n conjugado por diag(√C(n−1,k)): leva su_2 em su_n."""
    c = _unitary_normalizer(n)
    raw = veronese_algebra(n, x).matrix
    image = c[:, None] * raw / c[None, :]
    if isinstance(x, SuElement):
        return SuElement(image)
    return SlElement(image)


def veronese_omega_pullback(n: int, x: Element, y: Element, z: Element) -> float:
    """ϖ_n(σx, σy, σz) − C(n+1,3)·ϖ_2(x, y, z) com o Veronese unitário."""
    images = [unitary_veronese_algebra(n, v) for v in (x, y, z)]
    return omega_eval(n, *images) - tetrahedral(n) * omega_eval(2, x, y, z)


def veronese_jet(n: int, jet: CuspJet) -> CuspJet:
    if jet.n != 2:
        raise InvalidSizeError(f"veronese_jet exige jato de n=2, recebido n={jet.n}")
    parts = {}
    for name in ("a", "b", "da", "db"):
        src = getattr(jet, name)
        parts[name] = BorelElement(_veronese_gl2(n, src.matrix), branch_shifted=src.branch_shifted)
    return CuspJet(**parts)


# =========================
# Jato a partir de holonomias
# =========================
def _branch_distance(upper: np.ndarray, predicted: np.ndarray) -> np.ndarray:
    """cost[i, j] = distância do log do autovalor i (no melhor ramo) à predição j."""
    logs = np.log(np.diag(upper).astype(complex))
    cost = np.empty((len(logs), len(predicted)))
    for i, v in enumerate(logs):
        for j, p in enumerate(predicted):
            cost[i, j] = abs(nearest_branch(v, p) - p)
    return cost


def _align_phases(conj: np.ndarray, uppers: List[np.ndarray], previous: np.ndarray):
    overlaps = np.einsum("ij,ij->j", previous.conj(), conj)
    phases = np.ones(len(overlaps), dtype=complex)
    mask = np.abs(overlaps) > 1e-8
    phases[mask] = np.conj(overlaps[mask] / np.abs(overlaps[mask]))
    conj = conj * phases[None, :]
    uppers = [np.conj(phases)[:, None] * u * phases[None, :] for u in uppers]
    return conj, uppers


def _frame_sample(sample: PeripheralPathSample, pred_l: np.ndarray, pred_m: np.ndarray, previous: np.ndarray):
    """Triangulariza a amostra com a ordem diagonal casada à predição."""
    conj, uppers = commuting_triangularize([sample.rho_l, sample.rho_m])
    cost = _branch_distance(uppers[0], pred_l) + _branch_distance(uppers[1], pred_m)
    rows, cols = linear_sum_assignment(cost)
    order = np.empty(len(cols), dtype=int)
    order[cols] = rows
    uppers, conj = reorder_triangular(uppers, conj, order)
    return _align_phases(conj, uppers, previous)


def _tracked_logs(upper_l, upper_m, ref: Optional[Tuple[BorelElement, BorelElement]], t: float):
    a = branch_log_upper(upper_l, reference=None if ref is None else ref[0])
    b = branch_log_upper(upper_m, reference=None if ref is None else ref[1])
    if ref is not None:
        jump = max(
            np.abs(np.diag(a.matrix) - np.diag(ref[0].matrix)).max(),
            np.abs(np.diag(b.matrix) - np.diag(ref[1].matrix)).max(),
        )
        if jump > MAX_BRANCH_JUMP:
            raise BranchError(f"salto de ramo {jump:.3f} em t={t}: amostragem grosseira demais")
    return a, b


def peripheral_jet(samples: Sequence[PeripheralPathSample], at: int, richardson: bool = False) -> CuspJet:
    """
    Jato (a, b, ȧ, ḃ) no índice `at` de um caminho amostrado de holonomias.

    Cada amostra é triangularizada com um conjugador escolhido de forma
    contínua (ordem diagonal casada por atribuição linear, fases alinhadas
    ao referencial vizinho); derivadas por diferenças centrais, de quarta
    ordem quando `richardson` e a malha uniforme permitem.
    """
    if len(samples) < 3 or not 1 <= at <= len(samples) - 2:
        raise InvalidSizeError("peripheral_jet exige >= 3 amostras em volta do índice")
    ts = [s.t for s in samples]
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise UsageError("amostras devem ter t estritamente crescente")
    sizes = {s.rho_l.shape for s in samples}
    if len(sizes) != 1:
        raise SizeMismatchError("amostras de tamanhos diferentes")

    lo, hi = at - 1, at + 1
    if richardson and at >= 2 and at <= len(samples) - 3 and is_uniform(ts[at - 2:at + 3]):
        lo, hi = at - 2, at + 2

    base = samples[at]
    conj0, uppers0 = commuting_triangularize([base.rho_l, base.rho_m])
    a0, b0 = _tracked_logs(uppers0[0], uppers0[1], None, base.t)
    logs = {at: (a0, b0)}
    frames = {at: conj0}

    # para frente casando com a amostra anterior; para trás extrapolando
    for idx in range(at + 1, hi + 1):
        prev = logs[idx - 1]
        older = logs.get(idx - 2)
        pred_l, pred_m = (np.diag(x.matrix) for x in prev)
        if older is not None:
            pred_l = 2 * pred_l - np.diag(older[0].matrix)
            pred_m = 2 * pred_m - np.diag(older[1].matrix)
        conj, uppers = _frame_sample(samples[idx], pred_l, pred_m, frames[idx - 1])
        logs[idx] = _tracked_logs(uppers[0], uppers[1], prev, samples[idx].t)
        frames[idx] = conj
    for idx in range(at - 1, lo - 1, -1):
        prev = logs[idx + 1]
        older = logs[idx + 2]
        pred_l = 2 * np.diag(prev[0].matrix) - np.diag(older[0].matrix)
        pred_m = 2 * np.diag(prev[1].matrix) - np.diag(older[1].matrix)
        conj, uppers = _frame_sample(samples[idx], pred_l, pred_m, frames[idx + 1])
        logs[idx] = _tracked_logs(uppers[0], uppers[1], prev, samples[idx].t)
        frames[idx] = conj

    window = list(range(lo, hi + 1))
    weights = fd_weights([ts[i] for i in window], ts[at])
    n = base.rho_l.shape[0]
    derivs = []
    for part in (0, 1):
        d = sum(w * logs[i][part].matrix for w, i in zip(weights, window))
        d = np.triu(d)
        d = d - np.trace(d) / n * np.eye(n)
        derivs.append(BorelElement(d))
    logger.debug("jato em t=%.6g com janela %s", ts[at], [ts[i] for i in window])
    return CuspJet(a=a0, b=b0, da=derivs[0], db=derivs[1])
