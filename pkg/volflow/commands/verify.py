# volflow/commands/verify.py
"""Bateria de identidades de cocadeias, invariância, dimensões, taxa e Veronese."""
import argparse
import logging

import numpy as np

from volflow.commands._suite import Check, print_suite, run_suite
from volflow.models import HodgsonData, RunConfig, SuiteReport
from volflow.services.forms import (
    beta_cochain,
    beta_eval,
    borel_invariant_one_form_dimension,
    borel_invariant_two_form_dimension,
    ce_diff_dual,
    ce_diff_scalar,
    gamma_cochain,
    gamma_eval,
    invariant_two_form_dimension,
    omega_basis_expansion_eval,
    omega_cochain,
    omega_eval,
    zeta_cochain,
    zeta_eval,
)
from volflow.services.lie_core import (
    BorelElement,
    adjoint_action,
    corner_embed,
    e_element,
    f_element,
    h_pair,
    matrix_exp,
    random_element,
    split_hermitian,
    torus_element,
)
from volflow.services.variation import (
    CuspJet,
    hodgson_jet,
    hodgson_rate,
    permuted_jet,
    random_jet,
    shifted_jet,
    veronese_algebra,
    veronese_group,
    veronese_jet,
    veronese_omega_pullback,
    volume_rate,
    zeta_path_rate,
)
from volflow.utils.numerics import derive_seed, tetrahedral, veronese_cross_sum, veronese_square_sum

logger = logging.getLogger(__name__)

NAME = "verify"
HELP = "roda a bateria de identidades algébricas e da taxa"
DEFAULT_SIZES = "2..5"
MAX_DIMENSION_N = 4


# --------- Helpers ---------
def _rand(space: str, n: int, seed: int, k: int):
    return random_element(space, n, derive_seed(seed, k))


def _isu(n: int, seed: int, k: int) -> np.ndarray:
    return 1j * _rand("su", n, seed, k).matrix


def _sl2(seed: int, k: int):
    return _rand("sl", 2, seed, k)


def _random_sl2_group(seed: int, k: int) -> np.ndarray:
    m = matrix_exp(0.5 * _sl2(seed, k).matrix)
    return m / np.sqrt(np.linalg.det(m))


# --------- Checagens: lie_core / forms ---------
def hermitian_split(n: int, seed: int) -> float:
    x = _rand("sl", n, seed, 0).matrix
    su, isu = split_hermitian(x)
    return max(
        np.abs(su.matrix + isu.matrix - x).max(),
        np.abs(isu.matrix - isu.matrix.conj().T).max(),
    )


def omega_normalization(n: int, seed: int) -> float:
    a = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
    b = np.array([[0, 0.5j], [-0.5j, 0]], dtype=complex)
    c = np.diag([0.5, -0.5]).astype(complex)
    ur = np.array([[0, 1], [0, 0]], dtype=complex)
    ui = 1j * ur
    return max(abs(omega_eval(2, a, b, c) - 1.0), abs(omega_eval(2, c, ur, ui) - 1.0))


def omega_alternating(n: int, seed: int) -> float:
    x, y, z = (_rand("sl", n, seed, k) for k in range(3))
    ref = omega_eval(n, x, y, z)
    return max(
        abs(ref + omega_eval(n, y, x, z)),
        abs(ref + omega_eval(n, x, z, y)),
        abs(omega_eval(n, x, y, x)),
    )


def omega_su_invariance(n: int, seed: int) -> float:
    k = matrix_exp(_rand("su", n, seed, 9))
    x, y, z = (_rand("sl", n, seed, j) for j in range(3))
    moved = [adjoint_action(k, v) for v in (x, y, z)]
    return abs(omega_eval(n, *moved) - omega_eval(n, x, y, z))


def omega_stability(n: int, seed: int) -> float:
    x, y, z = (_rand("sl", n, seed, k) for k in range(3))
    big = [corner_embed(v, n + 1) for v in (x, y, z)]
    return abs(omega_eval(n + 1, *big) - omega_eval(n, x, y, z))


def omega_expansion(n: int, seed: int) -> float:
    x, y, z = (_rand("sl", n, seed, k) for k in range(3))
    return abs(omega_basis_expansion_eval(n, x, y, z) - omega_eval(n, x, y, z))


def omega_su2_blocks(n: int, seed: int) -> float:
    worst = 0.0
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            triple = (1j * h_pair(n, j, k).matrix, 1j * e_element(n, j, k).matrix, 1j * f_element(n, j, k).matrix)
            worst = max(worst, abs(omega_eval(n, *triple) + 1.0))
    return worst


def omega_closed(n: int, seed: int) -> float:
    args = [_isu(n, seed, k) for k in range(4)]
    return ce_diff_scalar(omega_cochain(n), args)


def beta_coboundary(n: int, seed: int) -> float:
    x, y, z = (_rand("borel", n, seed, k) for k in range(3))
    return ce_diff_scalar(beta_cochain(n), [x, y, z]) - omega_eval(n, x, y, z)


def gamma_coboundary(n: int, seed: int) -> float:
    x, y, z = (_rand("sl", n, seed, k) for k in range(3))
    return ce_diff_dual(gamma_cochain(n), [x, y], z) - omega_eval(n, x, y, z)


def zeta_restriction(n: int, seed: int) -> float:
    x, y = (_rand("borel", n, seed, k) for k in range(2))
    return zeta_eval(n, x, y) - (gamma_eval(n, x, y) - beta_eval(n, x, y))


def zeta_cocycle(n: int, seed: int) -> float:
    x, y, z = (_rand("borel", n, seed, k) for k in range(3))
    return ce_diff_dual(zeta_cochain(n), [x, y], z)


def beta_torus_invariance(n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    t = torus_element(n, rng.uniform(-np.pi, np.pi, size=n - 1))
    x, y = (_rand("borel", n, seed, k) for k in range(2))
    moved = [BorelElement(np.triu(adjoint_action(t, v).matrix)) for v in (x, y)]
    return beta_eval(n, *moved) - beta_eval(n, x, y)


def invariant_two_forms(n: int, seed: int) -> float:
    return invariant_two_form_dimension(n) - 0


def borel_two_forms(n: int, seed: int) -> float:
    return borel_invariant_two_form_dimension(n) - (n * (n - 1) // 2 + (n - 1) * (n - 2) // 2)


def borel_one_forms(n: int, seed: int) -> float:
    return borel_invariant_one_form_dimension(n) - (n - 1)


# --------- Checagens: taxa ---------
def rate_dual_path(n: int, seed: int) -> float:
    jets = [random_jet(n, derive_seed(seed, k)) for k in range(2)]
    return volume_rate(jets) - zeta_path_rate(jets)


def rate_shift_invariance(n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    jet = random_jet(n, seed)
    shifted = shifted_jet(jet, rng.integers(-3, 4, size=n), rng.integers(-3, 4, size=n))
    return volume_rate([shifted]) - volume_rate([jet])


def rate_permutation(n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    jet = random_jet(n, seed)
    return volume_rate([permuted_jet(jet, rng.permutation(n))]) - volume_rate([jet])


def rate_unipotent(n: int, seed: int) -> float:
    jet = random_jet(n, seed)
    parts = {name: BorelElement(np.triu(getattr(jet, name).matrix, 1)) for name in ("a", "b", "da", "db")}
    return volume_rate([CuspJet(**parts)])


def hodgson_reduction(n: int, seed: int) -> float:
    values = np.random.default_rng(seed).standard_normal(8)
    data = HodgsonData(**dict(zip(HodgsonData.model_fields, values)))
    return hodgson_rate([data]) - volume_rate([hodgson_jet(data)])


# --------- Checagens: Veronese ---------
def veronese_trace(n: int, seed: int) -> float:
    x, y = _sl2(seed, 0).matrix, _sl2(seed, 1).matrix
    sx, sy = veronese_algebra(n, x).matrix, veronese_algebra(n, y).matrix
    return np.trace(sx @ sy) - tetrahedral(n) * np.trace(x @ y)


def veronese_lie_hom(n: int, seed: int) -> float:
    x, y = _sl2(seed, 0).matrix, _sl2(seed, 1).matrix
    sx, sy = veronese_algebra(n, x).matrix, veronese_algebra(n, y).matrix
    lhs = veronese_algebra(n, x @ y - y @ x).matrix
    return np.abs(lhs - (sx @ sy - sy @ sx)).max()


def veronese_rate_scaling(n: int, seed: int) -> float:
    jet = random_jet(2, seed)
    return volume_rate([veronese_jet(n, jet)]) - tetrahedral(n) * volume_rate([jet])


def veronese_pullback(n: int, seed: int) -> float:
    return veronese_omega_pullback(n, *(_sl2(seed, k) for k in range(3)))


def veronese_integer_sums(n: int, seed: int) -> float:
    return abs(veronese_square_sum(n) - 2 * tetrahedral(n)) + abs(veronese_cross_sum(n) - tetrahedral(n))


def veronese_multiplicative(n: int, seed: int) -> float:
    m1, m2 = _random_sl2_group(seed, 0), _random_sl2_group(seed, 1)
    lhs = veronese_group(n, m1 @ m2)
    rhs = veronese_group(n, m1) @ veronese_group(n, m2)
    return np.abs(lhs - rhs).max() / max(1.0, np.abs(lhs).max())


def _small(n: int) -> bool:
    return n <= MAX_DIMENSION_N


CHECKS = [
    Check("hermitian_split", hermitian_split),
    Check("omega_normalization", omega_normalization, "exact", lambda n: n == 2, randomized=False),
    Check("omega_alternating", omega_alternating),
    Check("omega_su_invariance", omega_su_invariance),
    Check("omega_stability", omega_stability, "oracle"),
    Check("omega_expansion", omega_expansion, "oracle"),
    Check("omega_su2_blocks", omega_su2_blocks, "exact", randomized=False),
    Check("omega_closed", omega_closed),
    Check("beta_coboundary", beta_coboundary),
    Check("gamma_coboundary", gamma_coboundary),
    Check("zeta_restriction", zeta_restriction),
    Check("zeta_cocycle", zeta_cocycle),
    Check("beta_torus_invariance", beta_torus_invariance),
    Check("invariant_two_form_dimension", invariant_two_forms, "count", _small, randomized=False),
    Check("borel_invariant_two_form_dimension", borel_two_forms, "count", _small, randomized=False),
    Check("borel_invariant_one_form_dimension", borel_one_forms, "count", _small, randomized=False),
    Check("rate_dual_path", rate_dual_path, "exact"),
    Check("rate_shift_invariance", rate_shift_invariance, "exact"),
    Check("rate_permutation_invariance", rate_permutation, "exact"),
    Check("rate_unipotent_vanishing", rate_unipotent, "exact"),
    Check("hodgson_reduction", hodgson_reduction, "exact", lambda n: n == 2),
    Check("veronese_trace_identity", veronese_trace, "oracle", lambda n: n >= 3),
    Check("veronese_lie_homomorphism", veronese_lie_hom, "oracle", lambda n: n >= 3),
    Check("veronese_rate_scaling", veronese_rate_scaling, "oracle", lambda n: n >= 3),
    Check("veronese_omega_pullback", veronese_pullback, "oracle", lambda n: n >= 3),
    Check("veronese_group_multiplicative", veronese_multiplicative, "oracle", lambda n: n >= 3),
    Check("veronese_integer_sums", veronese_integer_sums, "count", randomized=False),
]


# --------- Comando ---------
def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.set_defaults(n=DEFAULT_SIZES)


def cmd_verify(cfg: RunConfig) -> SuiteReport:
    logger.info("verify: n=%s, %d tentativas, semente %d", cfg.sizes, cfg.trials, cfg.seed)
    return run_suite(NAME, CHECKS, cfg)


execute = cmd_verify
print_report = print_suite
