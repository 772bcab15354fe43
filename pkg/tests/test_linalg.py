import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwspec.errors import NonSquareError, NotPSDError, NotSymmetricError
from mwspec.linalg import (
    Tolerance,
    inertia_of,
    is_pd_quadratic_form,
    pinv_psd,
    rank_of,
    sym_eigen,
)


def test_sym_eigen_identity():
    w, v = sym_eigen(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    assert np.allclose(v @ v.T, np.eye(3))


def test_sym_eigen_swap():
    w, _ = sym_eigen(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1.0, 1.0])


def test_sym_eigen_rejects_non_square():
    with pytest.raises(NonSquareError):
        sym_eigen(np.zeros((2, 3)))


def test_sym_eigen_rejects_asymmetric():
    with pytest.raises(NotSymmetricError):
        sym_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_inertia_zero_matrix():
    assert inertia_of(np.zeros((4, 4))) == (0, 4, 0)


def test_inertia_counts_sum_to_dimension():
    rng = np.random.default_rng(3)
    for _ in range(20):
        dim = int(rng.integers(1, 15))
        a = rng.standard_normal((dim, dim))
        a = a + a.T
        assert sum(inertia_of(a)) == dim


def test_inertia_against_high_precision_oracle():
    # independent oracle: mpmath symmetric eigensolver at 50 digits
    import mpmath

    rng = np.random.default_rng(12345)
    a = rng.standard_normal((10, 10))
    a = (a + a.T) / 2.0
    with mpmath.workdps(50):
        eigs = mpmath.mp.eigsy(mpmath.matrix(a.tolist()), eigvals_only=True)
        n_minus = sum(1 for x in eigs if x < 0)
        n_plus = sum(1 for x in eigs if x > 0)
    assert inertia_of(a) == (n_minus, 10 - n_minus - n_plus, n_plus)


def test_sylvester_congruence_invariance():
    rng = np.random.default_rng(99)
    for _ in range(20):
        dim = int(rng.integers(2, 31))
        a = rng.standard_normal((dim, dim))
        a = (a + a.T) / 2.0
        # nonsingular congruence with bounded conditioning
        c = rng.standard_normal((dim, dim)) + 3.0 * np.eye(dim)
        assert abs(np.linalg.det(c)) > 1e-6
        assert inertia_of(c.T @ a @ c) == inertia_of(a)


def test_pinv_identity():
    assert np.allclose(pinv_psd(np.eye(4)), np.eye(4))


def test_pinv_diag_with_kernel():
    got = pinv_psd(np.diag([2.0, 0.0]))
    assert np.allclose(got, np.diag([0.5, 0.0]))


def test_pinv_rejects_indefinite():
    with pytest.raises(NotPSDError):
        pinv_psd(np.diag([1.0, -1.0]))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**32 - 1))
def test_pinv_moore_penrose_identities(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((dim, dim + 1))
    a = m @ m.T  # PSD, possibly rank-deficient in spirit
    ap = pinv_psd(a)
    scale = max(1.0, np.abs(a).max())
    assert np.abs(a @ ap @ a - a).max() <= 1e-8 * scale
    assert np.abs(ap @ a @ ap - ap).max() <= 1e-8 * max(1.0, np.abs(ap).max())
    assert np.abs((a @ ap) - (a @ ap).T).max() <= 1e-8 * scale
    assert np.abs((ap @ a) - (ap @ a).T).max() <= 1e-8 * scale


def test_quadratic_form_pd():
    assert is_pd_quadratic_form(np.diag([2.0, 3.0]))


def test_quadratic_form_skew_is_not_pd():
    assert not is_pd_quadratic_form(np.array([[0.0, 1.0], [-1.0, 0.0]]))


def test_quadratic_form_golden_offdiagonal_block():
    block = np.array([
        [3525525 / 612184, 2430433 / 612184],
        [2255293 / 612184, 935945 / 153046],
    ])
    assert is_pd_quadratic_form(block)


def test_rank_zero_matrix():
    assert rank_of(np.zeros((3, 3))) == 0


def test_rank_of_J():
    j = np.kron(np.ones((4, 4)), np.eye(2))
    assert rank_of(j) == 2


def test_tolerance_rejects_bad_values():
    with pytest.raises(ValueError):
        Tolerance(rel_residual=0.0)
    with pytest.raises(ValueError):
        Tolerance(eig_zero=1.5)
