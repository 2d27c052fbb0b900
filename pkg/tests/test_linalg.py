import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cornerdet import _kernels
from cornerdet.errors import DomainError, ShapeError, SingularMatrixError
from cornerdet.linalg import (
    PIVOT_TINY,
    as_matrix,
    counter_identity,
    determinant,
    flip,
    inverse,
    lu_factor,
    slogdet,
    solve,
)

# entries on a 1e-6 grid: no subnormal noise, but exact zeros and ties still occur
coord = st.floats(-10, 10).map(lambda x: round(x, 6))
finite = st.builds(complex, coord, coord)


def square(n_max=10):
    return st.integers(1, n_max).flatmap(lambda n: arrays(np.complex128, (n, n), elements=finite))


@settings(max_examples=60, deadline=None)
@given(square())
def test_determinant_matches_numpy(M):
    ref = np.linalg.det(M)
    hadamard = np.prod(np.linalg.norm(M, axis=1))
    assert abs(determinant(M) - ref) <= 1e-12 * hadamard


@settings(max_examples=40, deadline=None)
@given(square(8), st.data())
def test_both_backends_agree(M, data):
    n = M.shape[0]
    hadamard = np.prod(np.linalg.norm(M, axis=1))
    dets = []
    for b in _kernels.BACKENDS.values():
        f = lu_factor(M, b)
        L = np.tril(f.lu, -1) + np.eye(n)
        U = np.triu(f.lu)
        PM = M.copy()
        for k, p in enumerate(f.piv):
            PM[[k, p]] = PM[[p, k]]
        np.testing.assert_allclose(L @ U, PM, atol=1e-12 * max(1.0, np.abs(M).max()))
        assert np.all(np.abs(L) <= np.sqrt(2) + 1e-12)  # pivot chosen by |re| + |im|
        dets.append(f.det())
    assert all(abs(d - dets[0]) <= 1e-12 * hadamard for d in dets)


def test_backend_is_selected():
    assert _kernels.BACKEND in _kernels.BACKENDS
    assert "python" in _kernels.BACKENDS


def test_solve_and_inverse(backend):
    rng = np.random.default_rng(1)
    M = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30)) + 8 * np.eye(30)
    b = rng.standard_normal(30) + 0j
    f = lu_factor(M, backend)
    np.testing.assert_allclose(f.solve(b), np.linalg.solve(M, b), rtol=1e-12)
    np.testing.assert_allclose(inverse(M) @ M, np.eye(30), atol=1e-12)
    np.testing.assert_allclose(solve(M, np.eye(30)[:, :3]), np.linalg.inv(M)[:, :3], atol=1e-13)


def test_singular_matrix(backend):
    M = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=complex)
    f = lu_factor(M, backend)
    assert f.singular_at >= 0
    assert f.det() == 0
    assert f.slogdet() == (0j, -np.inf)
    with pytest.raises(SingularMatrixError) as info:
        f.solve(np.ones(3))
    assert info.value.pivot_index == f.singular_at


def test_zero_matrix_pivot_index():
    with pytest.raises(SingularMatrixError) as info:
        solve(np.zeros((3, 3)), np.ones(3))
    assert info.value.pivot_index == 0


def test_slogdet_survives_overflow():
    n = 400
    M = 10.0 * np.eye(n)
    M[0, 0] = -10.0
    phase, logabs = slogdet(M)
    assert logabs == pytest.approx(n * np.log(10))
    assert phase == pytest.approx(-1)
    assert determinant(M) == -np.inf or not np.isfinite(determinant(M))


def test_permutation_sign():
    P = np.eye(4)[[1, 0, 3, 2]]
    assert determinant(P) == pytest.approx(1)
    assert determinant(np.eye(3)[[1, 2, 0]]) == pytest.approx(1)
    assert determinant(np.eye(3)[[1, 0, 2]]) == pytest.approx(-1)


def test_complex_phase():
    M = np.diag([1j, 1j, 2])
    assert determinant(M) == pytest.approx(-2)


def test_input_validation():
    with pytest.raises(ShapeError):
        lu_factor(np.ones((2, 3)))
    with pytest.raises(ShapeError):
        as_matrix(np.ones(3))
    with pytest.raises(DomainError):
        determinant([[1, np.nan], [0, 1]])
    with pytest.raises(ShapeError):
        lu_factor(np.eye(3)).solve(np.ones(4))


def test_input_not_modified():
    M = np.array([[0.0, 1.0], [1.0, 0.0]])
    keep = M.copy()
    determinant(M)
    np.testing.assert_array_equal(M, keep)


def test_tiny_pivot_threshold():
    assert lu_factor([[PIVOT_TINY / 2]]).singular_at == 0
    assert lu_factor([[PIVOT_TINY * 4]]).singular_at == -1


def test_flip_and_counter_identity():
    B = np.arange(6).reshape(2, 3)
    W2, W3 = counter_identity(2), counter_identity(3)
    np.testing.assert_array_equal(flip(B), W2 @ B @ W3)
    np.testing.assert_array_equal(counter_identity(3) @ counter_identity(3), np.eye(3))
