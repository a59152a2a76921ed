# volflow/services/forms.py
"""
Cocadeias concretas sobre sl_n(C): ϖ, β, γ, ζ, o mapa var e o
diferencial de Chevalley–Eilenberg (coeficientes triviais e no dual).

Cocadeias são representadas funcionalmente (closures sobre n).
Convenções de sinal:
  ϖ(A,B,C) = 2i·tr(H(A)[H(B),H(C)]), H = pr_isu
  β(x,y)   = i·tr(x_u^H y_u − x_u y_u^H)/4, x_u = parte estritamente superior
  γ(g)(h)  = i·tr(H(g)·S(h)), S = pr_su
  ζ(x)(y)  = i·tr(pr_ih(x)·pr_h(y))
  (δc)(x_1..x_{k+1}) = Σ_{i<j} (−1)^{i+j} c([x_i,x_j], …)
  (g·φ)(h) = −φ([g,h])
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from volflow.errors import InvalidSizeError, MembershipError, SizeMismatchError
from volflow.services.lie_core import (
    Element,
    SlElement,
    as_matrix,
    basis_frame,
    basis_labels,
    borel_basis,
    coordinates,
    lower_residual,
    su_basis,
)

logger = logging.getLogger(__name__)

MAX_DIMENSION_N = 4
RANK_THRESHOLD = 1e-8


# =========================
# Tipos de cocadeia
# =========================
@dataclass(frozen=True)
class ScalarCochain:
    """Cocadeia real alternada de grau k em sl_n."""
    degree: int
    evaluator: Callable[..., float]
    name: str = "c"

    def __call__(self, *args) -> float:
        if len(args) != self.degree:
            raise SizeMismatchError(f"{self.name} espera {self.degree} argumentos, recebeu {len(args)}")
        return float(self.evaluator(*args))


@dataclass(frozen=True)
class DualCochain:
    """Cocadeia de grau k com valores no dual: c(x_1..x_k) é um funcional."""
    degree: int
    evaluator: Callable[..., float]
    name: str = "c"

    def evaluate(self, args: Sequence, probe) -> float:
        if len(args) != self.degree:
            raise SizeMismatchError(f"{self.name} espera {self.degree} argumentos, recebeu {len(args)}")
        return float(self.evaluator(*args, probe))

    def __call__(self, *args) -> Callable[[Element], float]:
        if len(args) != self.degree:
            raise SizeMismatchError(f"{self.name} espera {self.degree} argumentos, recebeu {len(args)}")
        return lambda probe: self.evaluate(args, probe)


# --------- Helpers ---------
def _pr_su(m: np.ndarray) -> np.ndarray:
    return (m - m.conj().T) / 2


def _pr_isu(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def _br(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _sized(n: int, *xs) -> List[np.ndarray]:
    mats = [as_matrix(x) for x in xs]
    for m in mats:
        if m.shape != (n, n):
            raise SizeMismatchError(f"esperava matriz {n}x{n}, recebido {m.shape}")
    return mats


def _borel(n: int, *xs) -> List[np.ndarray]:
    mats = _sized(n, *xs)
    for m in mats:
        if lower_residual(m) > 1e-12 * max(1.0, float(np.abs(m).max())):
            raise MembershipError("entrada fora de b_n (parte inferior não nula)")
    return mats


def _real(value: complex) -> float:
    # resíduo imaginário (< 1e-12 em entradas unitárias) é descartado
    return float(np.real(value))


# =========================
# ϖ
# =========================
def omega_eval(n: int, A: Element, B: Element, C: Element) -> float:
    a, b, c = (_pr_isu(m) for m in _sized(n, A, B, C))
    return _real(2j * np.trace(a @ _br(b, c)))


def omega_cochain(n: int) -> ScalarCochain:
    return ScalarCochain(3, lambda A, B, C: omega_eval(n, A, B, C), "ϖ")


def isu_basis(n: int) -> List[SlElement]:
    """i·h_s, i·e_st, i·f_st: base real de i·su_n."""
    return [SlElement(1j * x.matrix) for x in su_basis(n)]


@lru_cache(maxsize=None)
def _isu_frame(n: int) -> np.ndarray:
    return basis_frame(isu_basis(n))


def _isu_coords(n: int, m: np.ndarray) -> np.ndarray:
    return coordinates(_pr_isu(m), isu_basis(n), _isu_frame(n))


@lru_cache(maxsize=None)
def _expansion_arrays(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    basis = [x.matrix for x in isu_basis(n)]
    idx, coefs = [], []
    for p, q, r in combinations(range(len(basis)), 3):
        value = omega_eval(n, basis[p], basis[q], basis[r])
        if abs(value) > 1e-13:
            idx.append((p, q, r))
            coefs.append(value)
    idx = np.array(idx, dtype=int).reshape(-1, 3)
    logger.debug("ϖ_%d: %d termos não nulos na base dual de i·su_%d", n, len(coefs), n)
    return idx[:, 0], idx[:, 1], idx[:, 2], np.array(coefs)


def omega_expansion_terms(n: int) -> Dict[Tuple[int, int, int], float]:
    """Coeficientes não nulos de ϖ na base dual de i·su_n (índices da isu_basis)."""
    p, q, r, coefs = _expansion_arrays(n)
    return {(int(a), int(b), int(c)): float(v) for a, b, c, v in zip(p, q, r, coefs)}


def omega_basis_expansion_eval(n: int, A: Element, B: Element, C: Element) -> float:
    """ϖ avaliada pela expansão Σ c_pqr·e^p∧e^q∧e^r (determinantes 3x3)."""
    a, b, c = (_isu_coords(n, m) for m in _sized(n, A, B, C))
    p, q, r, coefs = _expansion_arrays(n)
    det = (
        a[p] * (b[q] * c[r] - b[r] * c[q])
        - a[q] * (b[p] * c[r] - b[r] * c[p])
        + a[r] * (b[p] * c[q] - b[q] * c[p])
    )
    return float(np.dot(coefs, det))


# =========================
# β, γ, ζ
# =========================
def beta_eval(n: int, x: Element, y: Element) -> float:
    xm, ym = _borel(n, x, y)
    xu, yu = np.triu(xm, 1), np.triu(ym, 1)
    return _real(1j * np.trace(xu.conj().T @ yu - xu @ yu.conj().T) / 4)


def beta_cochain(n: int) -> ScalarCochain:
    return ScalarCochain(2, lambda x, y: beta_eval(n, x, y), "β")


def gamma_eval(n: int, g: Element, h: Element) -> float:
    gm, hm = _sized(n, g, h)
    return _real(1j * np.trace(_pr_isu(gm) @ _pr_su(hm)))


def gamma_cochain(n: int) -> DualCochain:
    return DualCochain(1, lambda g, h: gamma_eval(n, g, h), "γ")


def zeta_eval(n: int, x: Element, y: Element) -> float:
    xm, ym = _borel(n, x, y)
    pr_ih = np.diag(np.diag(xm).real)
    pr_h = 1j * np.diag(np.diag(ym).imag)
    return _real(1j * np.trace(pr_ih @ pr_h))


def zeta_cochain(n: int) -> DualCochain:
    return DualCochain(1, lambda x, y: zeta_eval(n, x, y), "ζ")


# =========================
# var e diferenciais
# =========================
def var_map(c: ScalarCochain) -> DualCochain:
    """var(c)(g_1..g_{k−1})(h) = c(g_1..g_{k−1}, h)."""
    if c.degree < 1:
        raise InvalidSizeError("var não está definida em grau 0")
    return DualCochain(c.degree - 1, lambda *args: c(*args), f"var({c.name})")


def ce_diff_scalar(c: ScalarCochain, args: Sequence[Element]) -> float:
    k = c.degree
    if len(args) != k + 1:
        raise SizeMismatchError(f"δ{c.name} espera {k + 1} argumentos, recebeu {len(args)}")
    mats = [as_matrix(x) for x in args]
    total = 0.0
    for i, j in combinations(range(k + 1), 2):
        rest = [m for idx, m in enumerate(mats) if idx not in (i, j)]
        total += (-1) ** (i + j) * c(_br(mats[i], mats[j]), *rest)
    return total


def ce_diff_dual(c: DualCochain, args: Sequence[Element], probe: Element) -> float:
    k = c.degree
    if len(args) != k + 1:
        raise SizeMismatchError(f"d{c.name} espera {k + 1} argumentos, recebeu {len(args)}")
    mats = [as_matrix(x) for x in args]
    h = as_matrix(probe)
    total = 0.0
    # termo da ação no dual: (x_i·φ)(h) = −φ([x_i, h])
    for i in range(k + 1):
        rest = [m for idx, m in enumerate(mats) if idx != i]
        total += (-1) ** i * -c.evaluate(rest, _br(mats[i], h))
    for i, j in combinations(range(k + 1), 2):
        rest = [m for idx, m in enumerate(mats) if idx not in (i, j)]
        total += (-1) ** (i + j) * c.evaluate([_br(mats[i], mats[j])] + rest, h)
    return total


# =========================
# Dimensões de formas invariantes
# =========================
def _ad_matrices(basis: List[np.ndarray], acting: List[np.ndarray]) -> List[np.ndarray]:
    frame = basis_frame(basis)
    mats = []
    for x in acting:
        cols = [coordinates(_br(x, e), basis, frame) for e in basis]
        mats.append(np.column_stack(cols))
    return mats


def _nullity(system: np.ndarray, unknowns: int) -> int:
    norms = np.linalg.norm(system, axis=1)
    rows = system[norms > 1e-10] / norms[norms > 1e-10, None]
    if rows.size == 0:
        return unknowns
    sv = np.linalg.svd(rows, compute_uv=False)
    return unknowns - int(np.sum(sv > RANK_THRESHOLD))


def _invariant_dimension(basis: List[np.ndarray], acting: List[np.ndarray], degree: int) -> int:
    ads = _ad_matrices(basis, acting)
    dim = len(basis)
    if degree == 1:
        # φ([X, y]) = 0  ⇔  M_Xᵀ φ = 0
        return _nullity(np.vstack([m.T for m in ads]), dim)
    pairs = list(combinations(range(dim), 2))
    blocks = []
    for m in ads:
        block = np.empty((dim * dim, len(pairs)))
        for col, (p, q) in enumerate(pairs):
            phi = np.zeros((dim, dim))
            phi[p, q], phi[q, p] = 1.0, -1.0
            block[:, col] = (m.T @ phi + phi @ m).ravel()
        blocks.append(block)
    return _nullity(np.vstack(blocks), len(pairs))


def _check_dimension_size(n: int) -> None:
    if not 2 <= n <= MAX_DIMENSION_N:
        raise InvalidSizeError(f"n={n} grande demais para o cálculo de dimensão (2 <= n <= {MAX_DIMENSION_N})")


def _borel_quotient(n: int) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Representantes de b_n/h_n (ih, ur, ui) e os geradores h_s do toro."""
    labels = basis_labels("borel", n)
    elems = [x.matrix for x in borel_basis(n)]
    quotient = [m for lbl, m in zip(labels, elems) if lbl.kind != "h"]
    torus = [m for lbl, m in zip(labels, elems) if lbl.kind == "h"]
    return quotient, torus


def invariant_two_form_dimension(n: int) -> int:
    """dim (⋀²su_n)^{SU(n)} pela condição infinitesimal φ([X,Y],Z) + φ(Y,[X,Z]) = 0."""
    _check_dimension_size(n)
    basis = [x.matrix for x in su_basis(n)]
    return _invariant_dimension(basis, basis, 2)


def borel_invariant_two_form_dimension(n: int) -> int:
    """dim ⋀²(b_n/h_n)^T; esperado n(n−1)/2 + (n−1)(n−2)/2."""
    _check_dimension_size(n)
    quotient, torus = _borel_quotient(n)
    return _invariant_dimension(quotient, torus, 2)


def borel_invariant_one_form_dimension(n: int) -> int:
    """dim (b_n/h_n)^{∨T}; esperado n − 1 (gerado pelas formas da diagonal real)."""
    _check_dimension_size(n)
    quotient, torus = _borel_quotient(n)
    return _invariant_dimension(quotient, torus, 1)
