import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from volflow.errors import (
    CheckFailure,
    InvalidSizeError,
    MembershipError,
    NonCommutingError,
    SizeMismatchError,
    UsageError,
)
from volflow.models import HodgsonData
from volflow.services.lie_core import BorelElement, SuElement, bracket, random_element
from volflow.services.variation import (
    BFG_SIGN,
    DGG_SIGN,
    CuspJet,
    PeripheralPathSample,
    bfg_coords,
    bfg_rate,
    check_sign_consistency,
    cusp_contributions,
    dgg_coords,
    dgg_rate,
    hodgson_jet,
    hodgson_rate,
    peripheral_jet,
    permuted_jet,
    random_jet,
    shifted_jet,
    unitary_veronese_algebra,
    veronese_algebra,
    veronese_group,
    veronese_jet,
    veronese_omega_pullback,
    volume_rate,
    zeta_path_rate,
)
from volflow.utils.numerics import tetrahedral

seeds = st.integers(min_value=0, max_value=2**31 - 1)
sizes = st.integers(min_value=2, max_value=5)

UNIT_DATA = HodgsonData(l1=0.0, theta1=0.0, l2=2.0, theta2=0.0, dtheta1=1.0)


def _diag_jet(a, b, da, db):
    return CuspJet(*(np.diag([x, -x]) for x in (a, b, da, db)))


# --------- Taxa ---------
def test_hodgson_unit_example():
    assert hodgson_rate([UNIT_DATA]) == pytest.approx(1.0)
    assert volume_rate([hodgson_jet(UNIT_DATA)]) == pytest.approx(1.0)


def test_rate_is_sum_over_cusps(n):
    jets = [random_jet(n, 1), random_jet(n, 2)]
    parts = cusp_contributions(jets)
    assert volume_rate(jets) == pytest.approx(parts[0] + parts[1])


def test_empty_cusp_list():
    with pytest.raises(InvalidSizeError):
        volume_rate([])


def test_jet_rejects_lower_entries():
    lower = np.array([[0, 0], [1, 0]], dtype=complex)
    with pytest.raises(MembershipError):
        CuspJet(lower, lower, lower, lower)


def test_unipotent_jet_has_zero_rate(rng):
    parts = [np.triu(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)), 1) for _ in range(4)]
    assert volume_rate([CuspJet(*parts)]) == 0.0


@settings(max_examples=60, deadline=None, derandomize=True)
@given(n=sizes, seed=seeds)
def test_zeta_path_agrees(n, seed):
    jets = [random_jet(n, seed), random_jet(n, seed + 1)]
    assert abs(volume_rate(jets) - zeta_path_rate(jets)) < 1e-12


@settings(max_examples=40, deadline=None, derandomize=True)
@given(n=sizes, seed=seeds, data=st.data())
def test_rate_invariant_under_shift_and_permutation(n, seed, data):
    jet = random_jet(n, seed)
    ks = st.lists(st.integers(min_value=-3, max_value=3), min_size=n, max_size=n)
    shifted = shifted_jet(jet, data.draw(ks), data.draw(ks))
    order = data.draw(st.permutations(range(n)))
    base = volume_rate([jet])
    assert abs(volume_rate([shifted]) - base) < 1e-12
    assert abs(volume_rate([permuted_jet(jet, order)]) - base) < 1e-12


def test_hodgson_reduction_matches_random_data(rng):
    for _ in range(20):
        values = rng.standard_normal(8)
        data = HodgsonData(**dict(zip(["l1", "theta1", "l2", "theta2", "dl1", "dtheta1", "dl2", "dtheta2"], values)))
        assert volume_rate([hodgson_jet(data)]) == pytest.approx(hodgson_rate([data]), abs=1e-12)


# --------- DGG / BFG ---------
def test_dgg_rate_sl2_example():
    assert dgg_rate(2, [1.0], [0.0], [0.0], [1j]) == pytest.approx(0.5)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(n=sizes, seed=seeds)
def test_dgg_matches_rate_with_calibrated_sign(n, seed):
    jet = random_jet(n, seed)
    assert abs(dgg_rate(n, *dgg_coords(jet)) - DGG_SIGN * volume_rate([jet])) < 1e-10


@settings(max_examples=40, deadline=None, derandomize=True)
@given(seed=seeds)
def test_bfg_is_quarter_of_rate(seed):
    jet = random_jet(3, seed)
    assert abs(4 * bfg_rate(bfg_coords(jet)) - BFG_SIGN * volume_rate([jet])) < 1e-10


def test_bfg_requires_sl3():
    with pytest.raises(InvalidSizeError):
        bfg_coords(random_jet(2, 0))


def test_dgg_wrong_length():
    with pytest.raises(SizeMismatchError):
        dgg_rate(3, [1.0], [1.0], [1.0], [1.0])


# --------- Sinais ---------
def test_sign_consistency():
    assert check_sign_consistency("x", [(1.0, 2.0), (-1.0, -3.0)], 1) == 1
    assert check_sign_consistency("x", [(0.0, 1.0)], 1) == 0
    with pytest.raises(CheckFailure):
        check_sign_consistency("x", [(1.0, 2.0), (1.0, -2.0)], 1)
    with pytest.raises(CheckFailure):
        check_sign_consistency("x", [(1.0, -2.0)], 1)


# --------- Veronese ---------
def test_veronese_group_of_unipotent():
    expected = np.array([[1, 2, 1], [0, 1, 1], [0, 0, 1]], dtype=complex)
    assert np.allclose(veronese_group(3, [[1, 1], [0, 1]]), expected)


def test_veronese_algebra_examples():
    assert np.allclose(np.diag(veronese_algebra(3, np.diag([1.0, -1.0])).matrix), [2, 0, -2])
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.allclose(np.diag(veronese_algebra(4, e12).matrix, 1), [3, 2, 1])
    assert np.allclose(np.diag(veronese_algebra(4, e12.T).matrix, -1), [1, 2, 3])
    with pytest.raises(MembershipError):
        veronese_algebra(3, np.eye(2))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_veronese_is_lie_homomorphism(n):
    x, y = random_element("sl", 2, 1), random_element("sl", 2, 2)
    lhs = veronese_algebra(n, bracket(x, y)).matrix
    rhs = bracket(veronese_algebra(n, x), veronese_algebra(n, y)).matrix
    assert np.allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4])
def test_veronese_group_and_algebra_agree(n):
    x = 0.3 * random_element("sl", 2, 5).matrix
    assert np.allclose(veronese_group(n, expm(x)), expm(veronese_algebra(n, x).matrix), atol=1e-10)
    a, b = expm(x), expm(0.3 * random_element("sl", 2, 6).matrix)
    assert np.allclose(veronese_group(n, b @ a), veronese_group(n, b) @ veronese_group(n, a), atol=1e-10)


def test_unitary_veronese_keeps_su():
    assert isinstance(unitary_veronese_algebra(4, random_element("su", 2, 3)), SuElement)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_veronese_omega_pullback(n):
    x, y, z = (random_element("sl", 2, k) for k in range(3))
    assert abs(veronese_omega_pullback(n, x, y, z)) < 1e-9


@pytest.mark.parametrize("n", [3, 4, 5])
def test_veronese_rate_scaling(n):
    jet = hodgson_jet(UNIT_DATA)
    assert volume_rate([veronese_jet(n, jet)]) == pytest.approx(tetrahedral(n) * volume_rate([jet]))


def test_veronese_jet_requires_sl2():
    with pytest.raises(InvalidSizeError):
        veronese_jet(3, random_jet(3, 0))


# --------- Jato periférico ---------
def _path(ts, log_l, log_m, frame=None):
    g = np.eye(2, dtype=complex) if frame is None else frame
    g_inv = np.linalg.inv(g)
    out = []
    for t in ts:
        cl, cm = log_l(t), log_m(t)
        rho_l = g @ np.diag([np.exp(cl), np.exp(-cl)]) @ g_inv
        rho_m = g @ np.diag([np.exp(cm), np.exp(-cm)]) @ g_inv
        out.append(PeripheralPathSample(t, rho_l, rho_m))
    return out


ALPHA = 0.3 + 0.4j
BETA = -0.2 + 0.7j


def test_peripheral_jet_of_identity_path():
    samples = _path([0.0, 0.1, 0.2], lambda t: 0.0, lambda t: 0.0)
    jet = peripheral_jet(samples, at=1)
    assert volume_rate([jet]) == 0.0
    assert np.allclose(jet.a.matrix, 0)


def test_peripheral_jet_of_linear_diagonal_path():
    samples = _path([0.9, 1.0, 1.1], lambda t: ALPHA * t, lambda t: BETA * t)
    jet = peripheral_jet(samples, at=1)
    expected = volume_rate([_diag_jet(ALPHA, BETA, ALPHA, BETA)])
    assert volume_rate([jet]) == pytest.approx(expected, abs=1e-9)


def test_peripheral_jet_ignores_conjugating_frame():
    frame = np.array([[1.0, 0.4 + 0.2j], [-0.3j, 1.0 + 0.1j]])
    frame = frame / np.sqrt(np.linalg.det(frame))
    plain = _path([0.9, 1.0, 1.1], lambda t: ALPHA * t, lambda t: BETA * t)
    moved = _path([0.9, 1.0, 1.1], lambda t: ALPHA * t, lambda t: BETA * t, frame)
    assert volume_rate([peripheral_jet(moved, at=1)]) == pytest.approx(
        volume_rate([peripheral_jet(plain, at=1)]), abs=1e-9
    )


def test_peripheral_jet_richardson_on_cubic_path():
    coef = 0.2 + 0.3j
    ts = np.linspace(0.8, 1.2, 5)
    samples = _path(ts, lambda t: coef * t**3, lambda t: BETA)
    fine = peripheral_jet(samples, at=2, richardson=True)
    coarse = peripheral_jet(samples, at=2)
    # em t = 1 a derivada de c·t³ é 3·c
    assert np.allclose(np.diag(fine.da.matrix), 3 * np.diag(fine.a.matrix), atol=1e-9)
    assert np.abs(np.diag(coarse.da.matrix) - 3 * np.diag(coarse.a.matrix)).max() > 1e-4


def test_peripheral_sample_rejects_non_commuting():
    a = np.array([[1, 1], [0, 1]], dtype=complex)
    b = np.array([[1, 0], [1, 1]], dtype=complex)
    with pytest.raises(NonCommutingError):
        PeripheralPathSample(0.0, a, b)


def test_peripheral_jet_input_checks():
    samples = _path([0.0, 0.1, 0.2], lambda t: ALPHA * t, lambda t: BETA * t)
    with pytest.raises(InvalidSizeError):
        peripheral_jet(samples[:2], at=1)
    with pytest.raises(InvalidSizeError):
        peripheral_jet(samples, at=0)
    with pytest.raises(UsageError):
        peripheral_jet([samples[0], samples[2], samples[1]], at=1)


def test_borel_jet_branch_shift_accepted():
    jet = random_jet(2, 4)
    shifted = shifted_jet(jet, [1, 0], [0, -2])
    assert isinstance(shifted.a, BorelElement)
    assert shifted.a.branch_shifted


def test_peripheral_jet_tolerates_det_drift_within_gate():
    samples = []
    for t in (0.9, 1.0, 1.1):
        rho_l = np.diag([np.exp(0.3 * t) * (1 + 5e-9), np.exp(-0.3 * t)]).astype(complex)
        rho_m = np.diag([np.exp(BETA * t), np.exp(-BETA * t)])
        samples.append(PeripheralPathSample(t, rho_l, rho_m))
    jet = peripheral_jet(samples, at=1)
    assert abs(np.trace(jet.a.matrix)) < 1e-12
    expected = volume_rate([_diag_jet(0.3, BETA, 0.3, BETA)])
    assert volume_rate([jet]) == pytest.approx(expected, abs=1e-7)


def test_peripheral_jet_of_parabolic_path():
    frame = np.array([[1.0, 0.4 + 0.2j], [-0.3j, 1.0 + 0.1j]])
    frame = frame / np.sqrt(np.linalg.det(frame))
    frame_inv = np.linalg.inv(frame)
    samples = []
    for t in (0.9, 1.0, 1.1):
        rho_l = frame @ np.array([[1, ALPHA * t], [0, 1]]) @ frame_inv
        rho_m = frame @ np.array([[1, BETA * t], [0, 1]]) @ frame_inv
        samples.append(PeripheralPathSample(t, rho_l, rho_m))
    jet = peripheral_jet(samples, at=1)
    assert np.allclose(np.diag(jet.a.matrix), 0, atol=1e-7)
    assert abs(volume_rate([jet])) < 1e-6
