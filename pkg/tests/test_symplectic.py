import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isoproj.symplectic import (
    Subspace,
    is_isotropic,
    is_lagrangian,
    j_matrix,
    standard_form,
    symplectic_orthogonal,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def vec(n):
    return arrays(np.float64, 2 * n, elements=finite)


def test_standard_form_examples():
    assert standard_form([1, 0], [0, 1]) == -1
    assert standard_form([1, 2], [3, 4]) == 2
    x = np.arange(6.0)
    assert standard_form(x, x) == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        standard_form(np.ones(2), np.ones(4))
    with pytest.raises(ValueError):
        standard_form(np.ones(3), np.ones(3))


def test_j_matrix():
    assert np.array_equal(j_matrix(1), [[0, 1], [-1, 0]])
    for n in (1, 2, 3):
        J = j_matrix(n)
        assert np.array_equal(J @ J, -np.eye(2 * n))


def test_j_matrix_matches_form(rng):
    for n in (1, 2, 3, 4):
        J = j_matrix(n)
        for _ in range(25):
            x, y = rng.standard_normal((2, 2 * n))
            assert abs((J @ x) @ y - standard_form(x, y)) <= 1e-12


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(vec(n), vec(n))))
def test_antisymmetry(xy):
    x, y = xy
    assert abs(standard_form(x, y) + standard_form(y, x)) <= 1e-14 * max(1.0, np.abs(x).max() * np.abs(y).max())


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(vec(n), vec(n), vec(n))), finite, finite)
def test_bilinearity(xyz, a, b):
    x, y, z = xyz
    lhs = standard_form(a * x + b * y, z)
    rhs = a * standard_form(x, z) + b * standard_form(y, z)
    scale = max(1.0, abs(a) + abs(b)) * max(1.0, np.abs(x).max() + np.abs(y).max()) * max(1.0, np.abs(z).max())
    assert abs(lhs - rhs) <= 1e-12 * scale * 10


def test_non_degenerate():
    for n in (1, 2, 3):
        eye = np.eye(2 * n)
        for i in range(2 * n):
            assert max(abs(standard_form(eye[i], eye[j])) for j in range(2 * n)) == 1


def test_symplectic_orthogonal_examples(rng):
    e = np.eye(2)
    W = symplectic_orthogonal(Subspace.span(e[0]))
    assert W.m == 1 and abs(abs(W.frame[0, 0]) - 1) < 1e-12

    for n in (1, 2, 3):
        V = Subspace.coordinate(n, range(n))
        W = symplectic_orthogonal(V)
        assert W.m == n
        P = W.frame @ W.frame.T
        assert np.allclose(P, V.frame @ V.frame.T, atol=1e-12)

    V = Subspace(rng.standard_normal((6, 2)))
    W = symplectic_orthogonal(V)
    assert W.m == 4
    pair = W.frame.T @ j_matrix(3).T @ V.frame
    assert np.max(np.abs(pair)) <= 1e-12


def test_dimension_count(rng):
    for n in (1, 2, 3, 4):
        for k in range(1, 2 * n + 1):
            V = Subspace(rng.standard_normal((2 * n, k)))
            assert V.m + symplectic_orthogonal(V).m == 2 * n


def test_rank_deficient_rejected():
    with pytest.raises(ValueError):
        symplectic_orthogonal(Subspace(np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]])))


def test_isotropy_predicates():
    for n in (1, 2, 3):
        for m in range(1, n + 1):
            assert is_isotropic(Subspace.coordinate(n, range(m)))
        assert not is_isotropic(Subspace.coordinate(n, [0, n]))
        assert is_lagrangian(Subspace.coordinate(n, range(n)))
    assert not is_lagrangian(Subspace.coordinate(2, [0]))
    assert is_isotropic(Subspace.coordinate(2, [0]))
    # e_1, e_3 in R^4: omega(e_1, e_3) = -1
    assert not is_lagrangian(Subspace.coordinate(2, [0, 2]))
    with pytest.raises(ValueError):
        is_isotropic(Subspace.coordinate(1, [0]), tol=0)


def test_sub_frames_of_isotropic_are_isotropic(rng):
    from isoproj.grassmannian import haar_sample

    for seed in range(20):
        V = haar_sample(4, 3, seed)
        assert is_isotropic(V.subspace())
        mix = V.frame @ rng.standard_normal((3, 2))
        assert is_isotropic(Subspace(mix))
        assert is_isotropic(Subspace(mix[:, :1]))


def test_orthonormal_flag_is_checked():
    with pytest.raises(ValueError):
        Subspace(np.array([[2.0], [0.0]]), orthonormal=True)
