# volflow/services/lie_core.py
"""
Aritmética real de álgebras de Lie para sl_n(C), su_n, i·su_n e a
subálgebra de Borel b_n, mais os utilitários matriciais usados pelo resto
do pacote: exponencial, triangularização simultânea de famílias que
comutam e logaritmo de triangulares superiores com ramo rastreado.

Todos os elementos são imutáveis (matriz numpy somente-leitura).
"""
import logging
from dataclasses import dataclass
from typing import List, Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.linalg import expm, null_space, schur, solve_sylvester

from volflow.config import EPS_ALG, EPS_COMM
from volflow.errors import (
    BranchError,
    InvalidSizeError,
    MembershipError,
    NonCommutingError,
    SingularMatrixError,
    SizeMismatchError,
    SolverError,
)

logger = logging.getLogger(__name__)

Space = Literal["sl", "su", "borel"]
BasisKind = Literal["h", "e", "f", "ih", "ur", "ui"]

# Matriz quadrada complexa genérica (n ≥ 2, entradas finitas)
SquareComplexMatrix = np.ndarray

LOWER_TOL = 1e-9           # entradas estritamente inferiores aceitas após triangularizar
CLUSTER_RTOL = 1e-4        # autovalores mais próximos que isso formam um único bloco
BRANCH_CUT_TOL = 1e-10
MERCATOR_MAX_TERMS = 500
DEFAULT_TRIANGULARIZE_SEED = 0


# =========================
# Helpers de validação
# =========================
def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.abs(m).max()))


def square_matrix(m) -> SquareComplexMatrix:
    """Cópia complexa somente-leitura de `m`, validando forma e finitude."""
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidSizeError(f"matriz deve ser quadrada, recebido shape={arr.shape}")
    if arr.shape[0] < 2:
        raise InvalidSizeError(f"tamanho n={arr.shape[0]} inválido (n >= 2)")
    if not np.all(np.isfinite(arr)):
        raise MembershipError("matriz com entradas não finitas")
    arr.setflags(write=False)
    return arr


def as_matrix(x) -> np.ndarray:
    if isinstance(x, SlElement):
        return x.matrix
    return np.asarray(x, dtype=complex)


def _check_size(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidSizeError(f"tamanho n={n} inválido (n >= 2)")


def _same_size(*xs) -> int:
    sizes = {as_matrix(x).shape for x in xs}
    if len(sizes) != 1:
        raise SizeMismatchError(f"operandos de tamanhos diferentes: {sorted(sizes)}")
    shape = sizes.pop()
    return shape[0]


def lower_residual(m) -> float:
    """Maior módulo entre as entradas estritamente inferiores."""
    low = np.tril(as_matrix(m), -1)
    return float(np.abs(low).max()) if low.size else 0.0


# =========================
# Tipos de elementos
# =========================
@dataclass(frozen=True, eq=False)
class SlElement:
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", square_matrix(self.matrix))
        self._validate()

    def _validate(self) -> None:
        tr = np.trace(self.matrix)
        if abs(tr) > EPS_ALG * _scale(self.matrix):
            raise MembershipError(f"traço {abs(tr):.3e} != 0: elemento fora de sl_{self.n}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def zero(cls, n: int):
        _check_size(n)
        return cls(np.zeros((n, n), dtype=complex))

    def _like(self, m: np.ndarray) -> "SlElement":
        try:
            return type(self)(m)
        except MembershipError:
            return SlElement(m)

    def __add__(self, other):
        _same_size(self, other)
        out = self.matrix + as_matrix(other)
        if isinstance(other, type(self)):
            return self._like(out)
        return SlElement(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return self._like(-self.matrix)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self._like(scalar * self.matrix)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"


@dataclass(frozen=True, eq=False)
class SuElement(SlElement):
    def _validate(self) -> None:
        super()._validate()
        defect = np.abs(self.matrix + self.matrix.conj().T).max()
        if defect > EPS_ALG * _scale(self.matrix):
            raise MembershipError(f"X + X^H = {defect:.3e} != 0: elemento fora de su_{self.n}")


@dataclass(frozen=True, eq=False)
class BorelElement(SlElement):
    # logs com ramo deslocado podem ter traço em 2πi·Z
    branch_shifted: bool = False

    def _validate(self) -> None:
        if np.any(np.tril(self.matrix, -1) != 0):
            raise MembershipError(f"entradas abaixo da diagonal não nulas: fora de b_{self.n}")
        tr = np.trace(self.matrix)
        tol = EPS_ALG * _scale(self.matrix)
        if self.branch_shifted:
            k = np.round(tr.imag / (2 * np.pi))
            if abs(tr.real) > tol or abs(tr.imag - 2 * np.pi * k) > tol:
                raise MembershipError(f"traço {tr:.3e} fora de 2πi·Z")
        elif abs(tr) > tol:
            raise MembershipError(f"traço {abs(tr):.3e} != 0: elemento fora de b_{self.n}")

    def _like(self, m: np.ndarray) -> "SlElement":
        try:
            return BorelElement(m, branch_shifted=self.branch_shifted)
        except MembershipError:
            return SlElement(m)

    @classmethod
    def from_upper(cls, m, branch_shifted: bool = False) -> "BorelElement":
        """Zera a parte estritamente inferior (após conferir que é desprezível)."""
        arr = np.asarray(m, dtype=complex)
        if lower_residual(arr) > EPS_ALG * _scale(arr):
            raise MembershipError(f"parte inferior {lower_residual(arr):.3e} não desprezível")
        return cls(np.triu(arr), branch_shifted=branch_shifted)


Element = Union[SlElement, np.ndarray]


def _closure(m: np.ndarray, *operands) -> SlElement:
    if all(isinstance(o, SuElement) for o in operands):
        return SuElement(m)
    if all(isinstance(o, BorelElement) for o in operands):
        return BorelElement(np.triu(m))
    return SlElement(m)


# --------- Índices de base ---------
class BasisIndex(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: BasisKind
    indices: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_indices(self):
        if self.kind in ("h", "ih"):
            if len(self.indices) != 1 or self.indices[0] < 1:
                raise ValueError(f"{self.kind} exige um índice s >= 1")
        else:
            if len(self.indices) != 2 or not 1 <= self.indices[0] < self.indices[1]:
                raise ValueError(f"{self.kind} exige índices 1 <= s < t")
        return self

    def check_size(self, n: int) -> None:
        limit = n - 1 if self.kind in ("h", "ih") else n
        if max(self.indices) > limit:
            raise InvalidSizeError(f"índice {self.indices} fora do intervalo para n={n}")

    def element(self, n: int) -> SlElement:
        self.check_size(n)
        if self.kind == "h":
            return h_element(n, self.indices[0])
        if self.kind == "ih":
            return BorelElement(1j * h_element(n, self.indices[0]).matrix)
        s, t = self.indices
        if self.kind == "e":
            return e_element(n, s, t)
        if self.kind == "f":
            return f_element(n, s, t)
        unit = _unit(n, s, t)
        return BorelElement(unit if self.kind == "ur" else 1j * unit)

    def __str__(self) -> str:
        return f"{self.kind}_{''.join(str(i) for i in self.indices)}"


# =========================
# Bases
# =========================
def _unit(n: int, s: int, t: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    m[s - 1, t - 1] = 1.0
    return m


def h_element(n: int, s: int) -> SuElement:
    """h_s: i/2 na posição (s,s) e −i/2 em (n,n)."""
    _check_size(n)
    if not 1 <= s <= n - 1:
        raise InvalidSizeError(f"h_{s} inexistente para n={n}")
    m = np.zeros((n, n), dtype=complex)
    m[s - 1, s - 1] = 0.5j
    m[n - 1, n - 1] = -0.5j
    return SuElement(m)


def h_pair(n: int, s: int, t: int) -> SuElement:
    """Diferença literal h_s − h_t: i/2 em s e −i/2 em t (sem BasisIndex)."""
    _check_size(n)
    if not 1 <= s < t <= n:
        raise InvalidSizeError(f"par ({s},{t}) inválido para n={n}")
    m = np.zeros((n, n), dtype=complex)
    m[s - 1, s - 1] = 0.5j
    m[t - 1, t - 1] = -0.5j
    return SuElement(m)


def e_element(n: int, s: int, t: int) -> SuElement:
    m = 0.5 * (_unit(n, s, t) - _unit(n, t, s))
    return SuElement(m)


def f_element(n: int, s: int, t: int) -> SuElement:
    m = 0.5j * (_unit(n, s, t) + _unit(n, t, s))
    return SuElement(m)


def _pairs(n: int) -> List[Tuple[int, int]]:
    return [(s, t) for s in range(1, n + 1) for t in range(s + 1, n + 1)]


def basis_labels(space: Space, n: int) -> List[BasisIndex]:
    """Rótulos na mesma ordem de su_basis / borel_basis."""
    _check_size(n)
    cartan = range(1, n)
    if space == "su":
        return (
            [BasisIndex(kind="h", indices=(s,)) for s in cartan]
            + [BasisIndex(kind="e", indices=p) for p in _pairs(n)]
            + [BasisIndex(kind="f", indices=p) for p in _pairs(n)]
        )
    if space == "borel":
        return (
            [BasisIndex(kind="h", indices=(s,)) for s in cartan]
            + [BasisIndex(kind="ih", indices=(s,)) for s in cartan]
            + [BasisIndex(kind="ur", indices=p) for p in _pairs(n)]
            + [BasisIndex(kind="ui", indices=p) for p in _pairs(n)]
        )
    raise ValueError(f"espaço sem base rotulada: {space!r}")


def su_basis(n: int) -> List[SuElement]:
    return [label.element(n) for label in basis_labels("su", n)]


def borel_basis(n: int) -> List[BorelElement]:
    out = []
    for label in basis_labels("borel", n):
        el = label.element(n)
        out.append(el if isinstance(el, BorelElement) else BorelElement(el.matrix))
    return out


def basis_frame(basis: Sequence[Element]) -> np.ndarray:
    """Matriz real (2n², k) cujas colunas vetorizam os elementos da base."""
    cols = []
    for b in basis:
        flat = as_matrix(b).ravel()
        cols.append(np.concatenate([flat.real, flat.imag]))
    return np.column_stack(cols)


def coordinates(x: Element, basis: Sequence[Element], frame: Optional[np.ndarray] = None) -> np.ndarray:
    """Coordenadas reais de x numa R-base (mínimos quadrados + resíduo conferido)."""
    frame = basis_frame(basis) if frame is None else frame
    flat = as_matrix(x).ravel()
    target = np.concatenate([flat.real, flat.imag])
    coeffs, *_ = np.linalg.lstsq(frame, target, rcond=None)
    resid = np.abs(frame @ coeffs - target).max()
    if resid > 1e-8 * max(1.0, float(np.abs(target).max())):
        raise MembershipError(f"elemento fora do span da base (resíduo {resid:.2e})")
    return coeffs


# =========================
# Operações algébricas
# =========================
def bracket(x: Element, y: Element) -> SlElement:
    _same_size(x, y)
    a, b = as_matrix(x), as_matrix(y)
    return _closure(a @ b - b @ a, x, y)


def split_hermitian(x: Element) -> Tuple[SuElement, SlElement]:
    """(pr_su(x), pr_isu(x)) = ((A − A^H)/2, (A + A^H)/2)."""
    a = as_matrix(x)
    adj = a.conj().T
    return SuElement((a - adj) / 2), SlElement((a + adj) / 2)


def split_diagonal(x: Element) -> Tuple[np.ndarray, np.ndarray, BorelElement]:
    """Parte real da diagonal, parte imaginária da diagonal e parte unipotente."""
    a = as_matrix(x)
    if lower_residual(a) > EPS_ALG * _scale(a):
        raise MembershipError("split_diagonal exige matriz triangular superior")
    d = np.diag(a)
    unipotent = np.triu(a, 1)
    return d.real.copy(), d.imag.copy(), BorelElement(unipotent)


def _is_unitary(k: np.ndarray) -> bool:
    return np.abs(k @ k.conj().T - np.eye(k.shape[0])).max() <= 1e-9


def adjoint_action(k, x: Element) -> SlElement:
    """k·x·k⁻¹."""
    km = square_matrix(k)
    _same_size(km, x)
    if abs(np.linalg.det(km)) < 1e-12 or np.linalg.cond(km) > 1e12:
        raise SingularMatrixError("conjugador singular")
    xm = as_matrix(x)
    conj = np.linalg.solve(km.T, (km @ xm).T).T
    if isinstance(x, SuElement) and _is_unitary(km):
        return SuElement(conj)
    return SlElement(conj)


def matrix_exp(x: Element) -> SquareComplexMatrix:
    return expm(as_matrix(x))


def corner_embed(x: Element, m: int) -> SlElement:
    """Mergulho no bloco superior esquerdo sl_n → sl_m."""
    a = as_matrix(x)
    n = a.shape[0]
    if m < n:
        raise InvalidSizeError(f"não há mergulho de sl_{n} em sl_{m}")
    big = np.zeros((m, m), dtype=complex)
    big[:n, :n] = a
    if isinstance(x, (SuElement, BorelElement)):
        return type(x)(big)
    return SlElement(big)


def torus_element(n: int, angles: Sequence[float]) -> SquareComplexMatrix:
    """diag(e^{iθ_1}, …, e^{iθ_{n−1}}, e^{−iΣθ}) no toro maximal de SU(n)."""
    _check_size(n)
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (n - 1,):
        raise SizeMismatchError(f"esperava {n - 1} ângulos, recebido {angles.shape}")
    phases = np.append(angles, -angles.sum())
    return np.diag(np.exp(1j * phases))


def random_element(space: Space, n: int, seed: int) -> SlElement:
    """Elemento aleatório determinístico para (space, n, seed)."""
    _check_size(n)
    rng = np.random.default_rng(seed)
    m = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    if space == "su":
        m = (m - m.conj().T) / 2
    elif space == "borel":
        m = np.triu(m)
    elif space != "sl":
        raise ValueError(f"espaço desconhecido: {space!r}")
    m = m - np.trace(m) / n * np.eye(n)
    if space == "su":
        return SuElement(m)
    if space == "borel":
        return BorelElement(m)
    return SlElement(m)


# =========================
# Triangularização simultânea
# =========================
def _check_commuting(mats: List[np.ndarray]) -> None:
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            a, b = mats[i], mats[j]
            defect = np.abs(a @ b - b @ a).max()
            if defect > EPS_COMM * _scale(a) * _scale(b):
                raise NonCommutingError(f"matrizes {i} e {j} não comutam (defeito {defect:.2e})")


def _common_eigvec(mats: List[np.ndarray]) -> np.ndarray:
    """Autovetor comum de uma família que comuta (refinamento por espaços nulos)."""
    dim = mats[0].shape[0]
    basis = np.eye(dim, dtype=complex)
    for m in mats:
        restricted = basis.conj().T @ m @ basis
        w, vecs = np.linalg.eig(restricted)
        kernel = null_space(restricted - w[0] * np.eye(len(w)), rcond=1e-6)
        if kernel.shape[1] == 0:
            kernel = vecs[:, :1] / np.linalg.norm(vecs[:, 0])
        basis = basis @ kernel
    return basis[:, 0]


def _flag_by_nullspaces(mats: List[np.ndarray]) -> np.ndarray:
    n = mats[0].shape[0]
    flag = np.zeros((n, 0), dtype=complex)
    for step in range(n):
        comp = null_space(flag.conj().T) if step else np.eye(n, dtype=complex)
        quotient = [comp.conj().T @ m @ comp for m in mats]
        v = comp @ _common_eigvec(quotient)
        flag = np.column_stack([flag, v / np.linalg.norm(v)])
    # reortogonaliza
    q, _ = np.linalg.qr(flag)
    return q


def commuting_triangularize(
    ms: Sequence, seed: int = DEFAULT_TRIANGULARIZE_SEED
) -> Tuple[SquareComplexMatrix, List[np.ndarray]]:
    """
    Conjugador unitário k tal que k⁻¹·m·k é triangular superior para toda m.

    Usa a forma de Schur de uma combinação real aleatória (semente fixa);
    se autovalores colidem, cai para o refinamento por espaços nulos.
    """
    if not ms:
        raise InvalidSizeError("lista vazia de matrizes")
    mats = [square_matrix(m) for m in ms]
    _same_size(*mats)
    _check_commuting(mats)
    n = mats[0].shape[0]
    scale = max(_scale(m) for m in mats)

    if all(lower_residual(m) <= LOWER_TOL * scale for m in mats):
        return np.eye(n, dtype=complex), [np.triu(m) for m in mats]

    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(0.5, 1.5, size=len(mats))
    combo = sum(c * m for c, m in zip(coeffs, mats))
    _, conj = schur(combo, output="complex")
    uppers = [conj.conj().T @ m @ conj for m in mats]

    if max(lower_residual(u) for u in uppers) > LOWER_TOL * scale:
        logger.debug("Schur não triangularizou a família; refinando por espaços nulos")
        conj = _flag_by_nullspaces(mats)
        uppers = [conj.conj().T @ m @ conj for m in mats]
        worst = max(lower_residual(u) for u in uppers)
        if worst > LOWER_TOL * scale:
            raise SolverError(f"triangularização simultânea falhou (resíduo {worst:.2e})")
    return conj, [np.triu(u) for u in uppers]


def _swap_adjacent(uppers: List[np.ndarray], conj: np.ndarray, p: int) -> None:
    """Troca as posições diagonais p e p+1 de toda a família (rotação unitária)."""
    pivot = None
    for u in uppers:
        if abs(u[p + 1, p + 1] - u[p, p]) > 1e-12 * _scale(u):
            pivot = u
            break
    if pivot is None:
        # pares diagonais idênticos: a troca não muda nada
        return
    x = np.array([pivot[p, p + 1], pivot[p + 1, p + 1] - pivot[p, p]])
    x = x / np.linalg.norm(x)
    g = np.array([[x[0], -np.conj(x[1])], [x[1], np.conj(x[0])]])
    for u in uppers:
        u[:, p:p + 2] = u[:, p:p + 2] @ g
        u[p:p + 2, :] = g.conj().T @ u[p:p + 2, :]
        u[p + 1, p] = 0.0
    conj[:, p:p + 2] = conj[:, p:p + 2] @ g


def reorder_triangular(
    uppers: Sequence[np.ndarray], conj: np.ndarray, order: Sequence[int]
) -> Tuple[List[np.ndarray], np.ndarray]:
    """
    Reordena a diagonal de uma família triangular simultânea.

    A nova posição j recebe o par diagonal que estava em order[j];
    conj é atualizado de modo que conj⁻¹·m·conj continue sendo a forma dada.
    """
    mats = [np.array(u, dtype=complex) for u in uppers]
    conj = np.array(conj, dtype=complex)
    target = np.empty(len(order), dtype=int)
    target[np.asarray(order)] = np.arange(len(order))
    keys = list(target)
    changed = True
    while changed:
        changed = False
        for p in range(len(keys) - 1):
            if keys[p] > keys[p + 1]:
                _swap_adjacent(mats, conj, p)
                keys[p], keys[p + 1] = keys[p + 1], keys[p]
                changed = True
    return [np.triu(m) for m in mats], conj


# =========================
# Logaritmo com ramo rastreado
# =========================
def nearest_branch(value: complex, target: complex) -> complex:
    """value + 2πi·k com k escolhido para ficar mais perto de target."""
    k = np.round((target.imag - value.imag) / (2 * np.pi))
    return value + 2j * np.pi * k


def _cluster_labels(diag: np.ndarray) -> List[int]:
    n = len(diag)
    labels = [-1] * n
    current = 0
    for i in range(n):
        if labels[i] >= 0:
            continue
        labels[i] = current
        stack = [i]
        while stack:
            k = stack.pop()
            for j in range(n):
                if labels[j] < 0 and abs(diag[j] - diag[k]) <= CLUSTER_RTOL * max(1.0, abs(diag[k])):
                    labels[j] = current
                    stack.append(j)
        current += 1
    return labels


def _mercator_log(nil: np.ndarray) -> np.ndarray:
    """log(I + N) pela série de Mercator, N quase nilpotente."""
    result = np.zeros_like(nil)
    term = np.eye(nil.shape[0], dtype=complex)
    for k in range(1, MERCATOR_MAX_TERMS + 1):
        term = term @ nil
        size = np.abs(term).max()
        if size == 0.0:
            return result
        contrib = term * ((-1) ** (k + 1) / k)
        result = result + contrib
        if np.abs(contrib).max() < 1e-17 * max(1.0, np.abs(result).max()):
            return result
    raise SolverError("série de Mercator não convergiu")


def branch_log_upper(u, reference: Optional[Element] = None) -> BorelElement:
    """
    Logaritmo de uma triangular superior unimodular.

    A diagonal é o log principal de cada autovalor, deslocado por 2πi·k para
    o ramo mais perto da diagonal de `reference`. O traço NÃO é forçado a
    zero depois do deslocamento (fica em 2πi·Z).
    """
    tri = square_matrix(u)
    n = tri.shape[0]
    if lower_residual(tri) > EPS_ALG * _scale(tri):
        raise MembershipError("branch_log_upper exige matriz triangular superior")
    tri = np.triu(tri)
    diag = np.diag(tri)
    if np.min(np.abs(diag)) < 1e-300:
        raise SingularMatrixError("entrada diagonal nula")
    if abs(np.prod(diag) - 1.0) > 1e-8:
        raise SingularMatrixError(f"determinante {np.prod(diag):.6g} != 1")
    ref_diag = None if reference is None else np.diag(as_matrix(reference))
    if ref_diag is not None and len(ref_diag) != n:
        raise SizeMismatchError("referência de tamanho diferente")

    # agrupa autovalores próximos em blocos contíguos
    labels = _cluster_labels(diag)
    order = sorted(range(n), key=lambda i: (labels[i], i))
    (work,), q = reorder_triangular([tri], np.eye(n, dtype=complex), order)
    sorted_labels = [labels[i] for i in order]
    blocks = []
    start = 0
    for p in range(1, n + 1):
        if p == n or sorted_labels[p] != sorted_labels[start]:
            blocks.append((start, p))
            start = p

    logs = np.zeros((n, n), dtype=complex)
    for lo, hi in blocks:
        block = work[lo:hi, lo:hi]
        lam = np.mean(np.diag(block))
        base = complex(np.log(lam))
        if ref_diag is not None:
            base = nearest_branch(base, complex(np.mean(ref_diag[order[lo:hi]])))
        elif abs(abs(np.angle(lam)) - np.pi) < BRANCH_CUT_TOL:
            raise BranchError(f"autovalor {lam:.6g} no corte do log sem referência")
        size = hi - lo
        logs[lo:hi, lo:hi] = base * np.eye(size) + _mercator_log(block / lam - np.eye(size))

    # recorrência de Parlett em blocos: T_ii F_ij − F_ij T_jj = rhs
    for j in range(len(blocks)):
        jl, jh = blocks[j]
        for i in range(j - 1, -1, -1):
            il, ih = blocks[i]
            rhs = logs[il:ih, il:ih] @ work[il:ih, jl:jh] - work[il:ih, jl:jh] @ logs[jl:jh, jl:jh]
            for k in range(i + 1, j):
                kl, kh = blocks[k]
                rhs += logs[il:ih, kl:kh] @ work[kl:kh, jl:jh] - work[il:ih, kl:kh] @ logs[kl:kh, jl:jh]
            logs[il:ih, jl:jh] = solve_sylvester(work[il:ih, il:ih], -work[jl:jh, jl:jh], rhs)

    result = q @ logs @ q.conj().T
    if lower_residual(result) > 1e-8 * _scale(result):
        raise SolverError(f"log não triangular (resíduo {lower_residual(result):.2e})")
    result = np.triu(result)
    defect = np.abs(expm(result) - tri).max()
    if defect > 1e-8 * _scale(tri):
        raise BranchError(f"exp(log(u)) difere de u em {defect:.2e}")
    # det(u) só é 1 a menos de 1e-8: leva o traço para 2πi·Z
    tr = np.trace(result)
    drift = tr - 2j * np.pi * np.round(tr.imag / (2 * np.pi))
    result = result - (drift / n) * np.eye(n)
    return BorelElement(result, branch_shifted=True)
