import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from hkens.core import euclidean_distance
from hkens.linalg import (Basis, SymMatrix, covariance, eig_sym, least_spread_basis, projected_distance)


def random_orthonormal(rng, D, d):
    q, _ = np.linalg.qr(rng.normal(size=(D, d)))
    return q


def test_symmatrix_stores_one_triangle():
    a = np.array([[1.0, 2.0], [9.0, 3.0]])
    m = SymMatrix.from_dense(a)
    assert m.tril.size == 3
    assert np.array_equal(m.dense(), [[1.0, 9.0], [9.0, 3.0]])


def test_covariance_examples():
    assert np.array_equal(covariance([[4.0, 5.0]]).dense(), np.zeros((2, 2)))
    assert np.allclose(covariance([[-1, -1], [1, 1]]).dense(), [[1, 1], [1, 1]])
    with pytest.raises(ValueError):
        covariance(np.zeros((0, 2)))


def test_covariance_translation_invariant(rng):
    P = rng.normal(size=(20, 4))
    assert np.allclose(covariance(P).dense(), covariance(P + [3, -7, 100, 0.5]).dense(), atol=1e-10)


def test_eig_identity_and_diagonal():
    b = eig_sym(np.eye(4))
    assert np.allclose(b.eigenvalues, 1.0)
    b = eig_sym(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(b.eigenvalues, [1, 2, 3])
    assert np.allclose(np.abs(b.vectors), np.eye(3)[:, [1, 2, 0]])


def _check_eig(A, b):
    V, w = b.vectors, b.eigenvalues
    norm = np.abs(A).sum(axis=1).max()
    assert np.abs(A @ V - V * w).max() <= 1e-8 * (1 + norm)
    assert np.abs(V.T @ V - np.eye(len(A))).max() <= 1e-8
    assert abs(np.trace(A) - w.sum()) <= 1e-8 * max(1.0, abs(np.trace(A)))
    assert np.all(np.diff(w) >= 0)


def test_eig_random_9x9(rng):
    A = rng.normal(size=(9, 9))
    A = A + A.T
    _check_eig(A, eig_sym(A))


@given(arrays(float, (6, 6), elements=st.floats(-100, 100, allow_nan=False)))
def test_eig_property(M):
    A = (M + M.T) / 2
    _check_eig(A, eig_sym(A))


def test_covariance_is_psd(rng):
    for _ in range(20):
        P = rng.normal(size=(rng.integers(1, 15), 6)) * rng.uniform(0.1, 10, 6)
        assert eig_sym(covariance(P)).eigenvalues.min() >= -1e-10


def test_least_spread_examples():
    full = least_spread_basis(np.diag([2.0, 5.0, 1.0]), 3)
    assert np.allclose(full.eigenvalues, [1, 2, 5])
    one = least_spread_basis(np.diag([5.0, 1.0]), 1)
    assert np.allclose(np.abs(one.vectors[:, 0]), [0, 1])
    with pytest.raises(ValueError):
        least_spread_basis(np.eye(3), 4)
    with pytest.raises(ValueError):
        least_spread_basis(np.eye(3), 0)


def test_least_spread_beats_random_bases(rng):
    P = rng.normal(size=(40, 6)) * [5, 3, 2, 1, 0.5, 0.2]
    P = P @ random_orthonormal(rng, 6, 6)
    centered = P - P.mean(axis=0)
    for d in (1, 2, 4):
        best = np.sum((centered @ least_spread_basis(covariance(P), d).vectors) ** 2)
        for _ in range(50):
            assert best <= np.sum((centered @ random_orthonormal(rng, 6, d)) ** 2) + 1e-9


def test_projected_distance_examples(rng):
    x, c = rng.normal(size=5), rng.normal(size=5)
    assert projected_distance(x, c, Basis.canonical(5, 5)) == pytest.approx(euclidean_distance(x, c), rel=1e-14)
    assert projected_distance([3, 4], [0, 0], Basis.canonical(2, 1)) == 3.0
    B = random_orthonormal(rng, 5, 2)
    proj = [sum((x[i] - c[i]) * B[i, j] for i in range(5)) for j in range(2)]
    assert projected_distance(x, c, Basis(B, np.zeros(2))) == pytest.approx(np.hypot(*proj), rel=1e-12)
    with pytest.raises(ValueError):
        projected_distance([1, 2], [0, 0], Basis.canonical(3, 1))


def test_projection_contracts(rng):
    for _ in range(50):
        x, c = rng.normal(size=7), rng.normal(size=7)
        B = Basis(random_orthonormal(rng, 7, rng.integers(1, 8)), np.zeros(1))
        assert projected_distance(x, c, B) <= euclidean_distance(x, c) + 1e-9
