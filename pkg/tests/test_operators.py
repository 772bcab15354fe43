import numpy as np
import pytest

from mwspec import exact as ex
from mwspec.errors import InvalidSizeError
from mwspec.golden import EXPECTED_D, expected_l, golden_instance
from mwspec.model import MatrixWeightedTree, PDWeight, random_instance, random_tree
from mwspec.operators import (
    build_distance_matrix,
    build_distance_matrix_exact,
    build_E,
    build_J,
    build_laplacian,
    build_laplacian_exact,
    build_U,
    distance_from_laplacian_pinv,
    distance_inverse_closed_form,
    distance_inverse_closed_form_exact,
    nullspace_basis_J,
    structural_vectors,
)


@pytest.fixture(scope="module")
def golden():
    return golden_instance()


def single_edge_tree(w, s=1):
    return MatrixWeightedTree(2, s, [(0, 1, PDWeight(np.atleast_2d(w)))])


def path_tree_3():
    return MatrixWeightedTree(3, 1, [
        (0, 1, PDWeight(np.array([[1.0]]))),
        (1, 2, PDWeight(np.array([[1.0]]))),
    ])


# --- Laplacian ---------------------------------------------------------------


def test_laplacian_single_edge():
    l = build_laplacian(single_edge_tree(2.0))
    assert np.allclose(l.array, [[0.5, -0.5], [-0.5, 0.5]])


def test_laplacian_golden_block11(golden):
    l = build_laplacian(golden.graph)
    assert np.allclose(l.block(1, 1), [[1.5, 2.0], [2.0, 5.5]])


def test_laplacian_golden_matches_paper_exactly(golden):
    assert ex.rat_equal(build_laplacian_exact(golden.graph), expected_l())


def test_laplacian_symmetric_and_annihilates_U():
    inst = random_instance(8, 3, seed=21, extra_edges=5)
    l = build_laplacian(inst.graph)
    assert np.array_equal(l.array, l.array.T)
    scale = np.abs(l.array).max()
    assert np.abs(l.array @ build_U(8, 3)).max() <= 1e-10 * scale


# --- distance matrix ---------------------------------------------------------


def test_distance_single_edge():
    w = np.array([[8.0, 6.0], [6.0, 5.0]])
    d = build_distance_matrix(single_edge_tree(w, s=2))
    assert np.allclose(d.block(1, 2), w)
    assert np.allclose(d.block(1, 1), 0)


def test_distance_path_tree():
    d = build_distance_matrix(path_tree_3())
    assert np.allclose(d.array, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_distance_golden_blocks(golden):
    d = build_distance_matrix(golden.tree)
    assert np.allclose(d.block(1, 3), [[9, 7], [7, 10]])   # W1 + W2
    assert np.allclose(d.block(1, 4), [[13, 6], [6, 10]])  # W1 + W3
    assert np.array_equal(d.array, np.array(EXPECTED_D, dtype=float))


def test_distance_exact_matches_float(golden):
    exact = ex.rat_to_float(build_distance_matrix_exact(golden.tree))
    assert np.array_equal(exact, build_distance_matrix(golden.tree).array)


# --- structural vectors ------------------------------------------------------


def test_structural_vectors_golden(golden):
    sv = structural_vectors(golden.tree)
    assert sv.tau.tolist() == [1, -1, 1, 1]
    assert np.allclose(sv.r_sum, [[14, 7], [7, 15]])


def test_structural_vectors_star():
    n = 6
    edges = [(0, i, PDWeight(np.eye(1))) for i in range(1, n)]
    sv = structural_vectors(MatrixWeightedTree(n, 1, edges))
    assert sv.tau[0] == 2 - (n - 1)
    assert all(sv.tau[1:] == 1)
    assert sv.tau.sum() == 2


def test_tau_sums_to_two_on_random_trees():
    for seed in range(5):
        t = random_tree(10, 2, seed=seed)
        assert structural_vectors(t).tau.sum() == 2


# --- closed-form inverse -----------------------------------------------------


def test_closed_form_single_edge():
    w = np.array([[8.0, 6.0], [6.0, 5.0]])
    x = distance_inverse_closed_form(single_edge_tree(w, s=2))
    w_inv = np.linalg.inv(w)
    assert np.allclose(x.block(1, 1), 0, atol=1e-12)
    assert np.allclose(x.block(1, 2), w_inv)


def test_closed_form_path_tree_vs_dense_oracle():
    x = distance_inverse_closed_form(path_tree_3()).array
    dense = np.linalg.inv(np.array([[0.0, 1, 2], [1, 0, 1], [2, 1, 0]]))
    assert np.allclose(x, dense, atol=1e-12)


def test_closed_form_inverts_golden_distance(golden):
    x = distance_inverse_closed_form(golden.tree).array
    d = build_distance_matrix(golden.tree).array
    assert np.abs(x @ d - np.eye(8)).max() <= 1e-10


def test_closed_form_exact_golden(golden):
    d_inv = distance_inverse_closed_form_exact(golden.tree)
    d = build_distance_matrix_exact(golden.tree)
    assert ex.rat_matmul(d_inv, d) == ex.rat_identity(8)


# --- pseudoinverse route -----------------------------------------------------


def test_pinv_route_single_scalar_edge():
    d = distance_from_laplacian_pinv(single_edge_tree(3.0))
    assert np.allclose(d.array, [[0, 3], [3, 0]], atol=1e-12)


def test_pinv_route_matches_golden(golden):
    d = distance_from_laplacian_pinv(golden.tree).array
    assert np.abs(d - np.array(EXPECTED_D, dtype=float)).max() <= 1e-8 * 13


def test_pinv_route_matches_path_sums_random():
    t = random_tree(6, 3, seed=17)
    a = distance_from_laplacian_pinv(t).array
    b = build_distance_matrix(t).array
    assert np.abs(a - b).max() <= 1e-8 * max(1.0, np.abs(b).max())


# --- J, U, E, null space -----------------------------------------------------


def test_J_small():
    j = build_J(2, 1)
    assert np.array_equal(j.array, [[1, 1], [1, 1]])


def test_JU_is_nU():
    j = build_J(5, 3).array
    u = build_U(5, 3)
    assert np.array_equal(j @ u, 5 * u)


def test_UtU():
    u = build_U(7, 2)
    assert np.array_equal(u.T @ u, 7 * np.eye(2))


def test_E_extracts_block(golden):
    d = build_distance_matrix(golden.tree)
    e1, e3 = build_E(1, 4, 2), build_E(3, 4, 2)
    assert np.array_equal(e1.T @ d.array @ e3, d.block(1, 3))


def test_nullspace_basis():
    b = nullspace_basis_J(4, 2).b
    j = build_J(4, 2).array
    assert b.shape == (8, 6)
    assert np.array_equal(j @ b, np.zeros((8, 6)))
    assert np.linalg.matrix_rank(b) == 6


def test_size_validation():
    with pytest.raises(InvalidSizeError):
        build_J(1, 1)
    with pytest.raises(InvalidSizeError):
        build_U(2, 0)
    with pytest.raises(InvalidSizeError):
        build_E(5, 4, 2)


# --- permutation equivariance ------------------------------------------------


def test_permutation_equivariance():
    rng = np.random.default_rng(31)
    t = random_tree(6, 2, seed=13)
    perm = rng.permutation(6)
    relabeled = MatrixWeightedTree(6, 2, [
        (min(perm[u], perm[v]), max(perm[u], perm[v]), w) for u, v, w in t.edges
    ])
    p_block = np.kron(np.eye(6)[perm], np.eye(2))
    d = build_distance_matrix(t).array
    d_perm = build_distance_matrix(relabeled).array
    assert np.allclose(p_block @ d_perm @ p_block.T, d)
