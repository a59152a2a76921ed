import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from volflow.errors import (
    BranchError,
    InvalidSizeError,
    MembershipError,
    NonCommutingError,
    SingularMatrixError,
    SizeMismatchError,
)
from volflow.services.lie_core import (
    BasisIndex,
    BorelElement,
    SlElement,
    SuElement,
    _flag_by_nullspaces,
    adjoint_action,
    basis_labels,
    borel_basis,
    bracket,
    branch_log_upper,
    commuting_triangularize,
    coordinates,
    corner_embed,
    e_element,
    f_element,
    h_element,
    h_pair,
    lower_residual,
    random_element,
    reorder_triangular,
    split_diagonal,
    split_hermitian,
    su_basis,
    torus_element,
)

seeds = st.integers(min_value=0, max_value=2**31 - 1)
sizes = st.integers(min_value=2, max_value=5)


# --------- Elementos e bases ---------
def test_h_element_entries():
    h = h_element(3, 1).matrix
    assert h[0, 0] == 0.5j
    assert h[2, 2] == -0.5j
    assert h[1, 1] == 0


def test_h_pair_is_literal_difference():
    assert np.allclose(h_pair(4, 1, 3).matrix, h_element(4, 1).matrix - h_element(4, 3).matrix)
    assert np.allclose(h_pair(4, 2, 4).matrix, h_element(4, 2).matrix)
    with pytest.raises(InvalidSizeError):
        h_pair(3, 2, 2)


def test_e_f_bracket_is_h_for_sl2():
    assert np.allclose(bracket(e_element(2, 1, 2), f_element(2, 1, 2)).matrix, h_element(2, 1).matrix)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_basis_dimensions(n):
    assert len(su_basis(n)) == n * n - 1
    assert len(borel_basis(n)) == (n - 1) * (n + 2)
    assert [str(lbl) for lbl in basis_labels("su", n)][: n - 1] == [f"h_{s}" for s in range(1, n)]


def test_basis_index_validation():
    with pytest.raises(ValueError):
        BasisIndex(kind="e", indices=(2, 1))
    with pytest.raises(InvalidSizeError):
        BasisIndex(kind="h", indices=(3,)).element(3)


def test_coordinates_of_basis_element_is_unit_vector():
    basis = su_basis(3)
    coords = coordinates(basis[4], basis)
    expected = np.zeros(len(basis))
    expected[4] = 1.0
    assert np.allclose(coords, expected)


def test_coordinates_outside_span():
    with pytest.raises(MembershipError):
        coordinates(np.diag([1.0, -1.0]).astype(complex), su_basis(2))


# --------- Pertinência ---------
def test_membership_checks():
    with pytest.raises(MembershipError):
        SlElement(np.eye(2))
    with pytest.raises(MembershipError):
        SuElement(np.diag([1.0, -1.0]))
    with pytest.raises(MembershipError):
        BorelElement(np.array([[0, 0], [1, 0]], dtype=complex))
    with pytest.raises(InvalidSizeError):
        SlElement(np.zeros((1, 1)))
    with pytest.raises(InvalidSizeError):
        SlElement(np.zeros((2, 3)))


def test_branch_shifted_borel_accepts_trace_in_2pi_i_z():
    m = np.diag([2j * np.pi, 0.0])
    assert BorelElement(m, branch_shifted=True).n == 2
    with pytest.raises(MembershipError):
        BorelElement(m)


def test_size_mismatch_in_bracket():
    with pytest.raises(SizeMismatchError):
        bracket(random_element("sl", 2, 0), random_element("sl", 3, 0))


def test_bracket_closure_types():
    assert isinstance(bracket(random_element("su", 3, 1), random_element("su", 3, 2)), SuElement)
    assert isinstance(bracket(random_element("borel", 3, 1), random_element("borel", 3, 2)), BorelElement)


def test_random_element_is_deterministic():
    a = random_element("sl", 4, 17).matrix
    b = random_element("sl", 4, 17).matrix
    assert np.array_equal(a, b)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(n=sizes, seed=seeds)
def test_bracket_antisymmetric_and_jacobi(n, seed):
    x, y, z = (random_element("sl", n, seed + k) for k in range(3))
    assert np.allclose(bracket(x, y).matrix, -bracket(y, x).matrix, atol=1e-12)
    jacobi = bracket(x, bracket(y, z)).matrix + bracket(y, bracket(z, x)).matrix + bracket(z, bracket(x, y)).matrix
    assert np.abs(jacobi).max() < 1e-11


@settings(max_examples=40, deadline=None, derandomize=True)
@given(n=sizes, seed=seeds)
def test_split_hermitian_parts(n, seed):
    x = random_element("sl", n, seed)
    su, isu = split_hermitian(x)
    assert np.allclose(su.matrix + isu.matrix, x.matrix)
    assert np.allclose(isu.matrix, isu.matrix.conj().T)


def test_split_diagonal():
    x = random_element("borel", 3, 5)
    re, im, unip = split_diagonal(x)
    assert np.allclose(re + 1j * im, np.diag(x.matrix))
    assert np.allclose(np.diag(unip.matrix), 0)


# --------- Ação adjunta, toro, mergulho ---------
def test_adjoint_action_of_unitary_keeps_su():
    k = expm(random_element("su", 3, 3).matrix)
    assert isinstance(adjoint_action(k, random_element("su", 3, 4)), SuElement)


def test_adjoint_action_singular():
    with pytest.raises(SingularMatrixError):
        adjoint_action(np.zeros((2, 2)), random_element("sl", 2, 0))


def test_torus_element_is_special_unitary():
    t = torus_element(4, [0.3, -1.2, 2.0])
    assert np.allclose(t @ t.conj().T, np.eye(4))
    assert np.isclose(np.linalg.det(t), 1.0)
    with pytest.raises(SizeMismatchError):
        torus_element(3, [0.1])


def test_corner_embed():
    x = random_element("su", 2, 8)
    big = corner_embed(x, 4)
    assert isinstance(big, SuElement)
    assert np.allclose(big.matrix[:2, :2], x.matrix)
    assert np.allclose(big.matrix[2:, :], 0)
    with pytest.raises(InvalidSizeError):
        corner_embed(big, 3)


# --------- Triangularização ---------
def _commuting_pair(rng, n):
    g = np.eye(n) + 0.4 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    d1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    d2 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    g_inv = np.linalg.inv(g)
    return g @ np.diag(d1) @ g_inv, g @ np.diag(d2) @ g_inv


@pytest.mark.parametrize("n", [2, 3, 4])
def test_commuting_triangularize(rng, n):
    a, b = _commuting_pair(rng, n)
    conj, uppers = commuting_triangularize([a, b])
    assert np.allclose(conj @ conj.conj().T, np.eye(n))
    for original, upper in zip((a, b), uppers):
        assert lower_residual(upper) == 0.0
        assert np.allclose(conj @ upper @ conj.conj().T, original, atol=1e-9)


def test_commuting_triangularize_rejects_non_commuting():
    a = np.array([[1, 1], [0, 1]], dtype=complex)
    b = np.array([[1, 0], [1, 1]], dtype=complex)
    with pytest.raises(NonCommutingError):
        commuting_triangularize([a, b])


def test_reorder_triangular_reverses_diagonal(rng):
    a, b = _commuting_pair(rng, 3)
    conj, uppers = commuting_triangularize([a, b])
    new_uppers, new_conj = reorder_triangular(uppers, conj, [2, 1, 0])
    assert np.allclose(np.diag(new_uppers[0]), np.diag(uppers[0])[::-1])
    assert np.allclose(np.diag(new_uppers[1]), np.diag(uppers[1])[::-1])
    assert np.allclose(new_conj @ new_uppers[0] @ new_conj.conj().T, a, atol=1e-9)


# --------- Logaritmo com ramo ---------
def test_branch_log_upper_inverts_exp(rng):
    x = random_element("borel", 3, 11)
    log = branch_log_upper(expm(x.matrix), reference=x)
    assert np.allclose(log.matrix, x.matrix, atol=1e-9)


def test_branch_log_upper_unipotent():
    log = branch_log_upper(np.array([[1, 1], [0, 1]], dtype=complex))
    assert np.allclose(log.matrix, [[0, 1], [0, 0]])


def test_branch_log_follows_reference_sheet():
    d = np.diag([0.1 + 0.2j, -0.1 - 0.2j])
    shifted = d + np.diag([2j * np.pi, -2j * np.pi])
    log = branch_log_upper(expm(d), reference=shifted)
    assert np.allclose(np.diag(log.matrix), np.diag(shifted))


def test_branch_log_on_cut_needs_reference():
    minus_one = -np.eye(2, dtype=complex)
    with pytest.raises(BranchError):
        branch_log_upper(minus_one)
    log = branch_log_upper(minus_one, reference=np.diag([1j * np.pi, 1j * np.pi]))
    assert np.allclose(expm(log.matrix), minus_one)
    assert log.branch_shifted


def test_branch_log_rejects_non_unimodular():
    with pytest.raises(SingularMatrixError):
        branch_log_upper(np.diag([2.0, 2.0]))


def test_branch_log_trace_lands_on_lattice_for_nearly_unimodular_input():
    u = np.diag([np.exp(0.3) * (1 + 5e-9), np.exp(-0.3)]).astype(complex)
    log = branch_log_upper(u)
    assert abs(np.trace(log.matrix)) < 1e-14
    assert np.allclose(expm(log.matrix), u, atol=1e-8)


def test_nullspace_flag_on_jordan_block_family(rng):
    jordan = np.array([[0.7, 1.0, 0.0], [0.0, 0.7, 1.0], [0.0, 0.0, 0.7]], dtype=complex)
    g = np.eye(3) + 0.3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    g_inv = np.linalg.inv(g)
    a = g @ jordan @ g_inv
    b = g @ (jordan @ jordan + 2 * jordan) @ g_inv
    q = _flag_by_nullspaces([a, b])
    assert np.allclose(q.conj().T @ q, np.eye(3), atol=1e-12)
    for m in (a, b):
        assert lower_residual(q.conj().T @ m @ q) < 1e-9 * np.abs(m).max()


def test_commuting_triangularize_parabolic_pair(rng):
    g = np.eye(2) + 0.3 * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    g_inv = np.linalg.inv(g)
    a = g @ np.array([[1, 0.8], [0, 1]], dtype=complex) @ g_inv
    b = g @ np.array([[1, -0.3 + 0.5j], [0, 1]], dtype=complex) @ g_inv
    conj, uppers = commuting_triangularize([a, b])
    for original, upper in zip((a, b), uppers):
        assert np.allclose(np.diag(upper), 1.0, atol=1e-7)
        assert np.allclose(conj @ upper @ conj.conj().T, original, atol=1e-9)
