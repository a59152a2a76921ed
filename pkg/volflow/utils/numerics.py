# volflow/utils/numerics.py

from math import comb
from typing import Sequence

import numpy as np


def tetrahedral(n: int) -> int:
    """C(n+1, 3): fator de escala da forma traço sob o mergulho de Veronese."""
    return comb(n + 1, 3)


def veronese_square_sum(n: int) -> int:
    """(n−1)² + (n−3)² + … + (1−n)², somado exatamente em inteiros."""
    return sum((n - 1 - 2 * k) ** 2 for k in range(n))


def veronese_cross_sum(n: int) -> int:
    """(n−1)·1 + (n−2)·2 + … + 1·(n−1)."""
    return sum((n - k) * k for k in range(1, n))


def derive_seed(*keys: int) -> int:
    """Semente inteira determinística derivada de uma tupla de chaves."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def fd_weights(nodes: Sequence[float], x0: float) -> np.ndarray:
    """
    Pesos de diferença finita para f'(x0) nos nós dados (Vandermonde escalado).
    Com 3 nós é a fórmula central de segunda ordem (também em malha não uniforme).
    """
    nodes = np.asarray(nodes, dtype=float)
    h = np.max(np.abs(nodes - x0))
    if h == 0:
        raise ValueError("nós de diferença finita coincidentes")
    s = (nodes - x0) / h
    m = len(s)
    vander = np.vander(s, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[1] = 1.0
    return np.linalg.solve(vander, rhs) / h


def is_uniform(ts: Sequence[float], rtol: float = 1e-9) -> bool:
    steps = np.diff(np.asarray(ts, dtype=float))
    return bool(np.all(np.abs(steps - steps[0]) <= rtol * abs(steps[0])))


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Inclinação do ajuste linear de log|y| contra log|x|."""
    lx = np.log(np.abs(np.asarray(xs, dtype=float)))
    ly = np.log(np.abs(np.asarray(ys, dtype=float)))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def calibrate_sign(reference: float, value: float, floor: float = 1e-14) -> int:
    """Sinal s ∈ {+1, −1} com value ≈ s·reference; 0 se a referência degenera."""
    if abs(reference) < floor or abs(value) < floor:
        return 0
    return 1 if reference * value > 0 else -1
