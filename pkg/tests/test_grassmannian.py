import numpy as np
import pytest
from scipy import stats

from isoproj.grassmannian import (
    ChartMatrix,
    IsotropicFrame,
    chart_embed,
    chart_free_count,
    constraint_residual,
    embed_free,
    free_indices,
    gram_schmidt,
    haar_sample,
    haar_samples,
    haar_symplectic_orthogonal,
    line_angle,
    plane_from_chart,
    span_vectors,
    symplectic_defect,
)
from isoproj.symplectic import j_matrix, pairing_matrix, standard_form

NM = [(n, m) for n in range(1, 6) for m in range(1, n + 1)]


def independent_count_by_rule(n, m):
    # 1-based indexing: column j in 1..m, row i in {1..n-m+j} U {n+1..2n-m}
    return sum(1 for j in range(1, m + 1) for i in range(1, 2 * n - m + 1) if i <= n - m + j or i >= n + 1)


def test_free_count_examples():
    assert chart_free_count(1, 1) == 1
    assert chart_free_count(2, 2) == 3
    assert chart_free_count(3, 2) == 7


@pytest.mark.parametrize("n", range(1, 7))
def test_free_count_matches_index_rule(n):
    for m in range(1, n + 1):
        assert independent_count_by_rule(n, m) == chart_free_count(n, m) == len(free_indices(n, m))


def test_free_count_rejects_bad_dims():
    for n, m in [(1, 2), (2, 0), (0, 0)]:
        with pytest.raises(ValueError):
            chart_free_count(n, m)


def test_column_major_order():
    cols = [c for _, c in free_indices(3, 2)]
    assert cols == sorted(cols)
    assert free_indices(3, 2) == ((0, 0), (1, 0), (3, 0), (0, 1), (1, 1), (2, 1), (3, 1))


def test_chart_embed_examples():
    assert np.array_equal(chart_embed(2, 2, [0, 0, 0]).entries, np.zeros((2, 2)))
    A = chart_embed(2, 2, [1.5, -2.0, 3.0]).entries
    assert np.array_equal(A, [[1.5, -2.0], [-2.0, 3.0]])
    assert np.array_equal(chart_embed(1, 1, [0.7]).entries, [[0.7]])
    with pytest.raises(ValueError):
        chart_embed(3, 2, np.zeros(6))


@pytest.mark.parametrize("n,m", NM)
def test_chart_residual_and_isotropy(n, m, rng):
    free = rng.standard_normal((1000, chart_free_count(n, m)))
    A = embed_free(n, m, free)
    assert constraint_residual(A) <= 1e-14
    E = span_vectors(A)
    pair = np.swapaxes(E, -1, -2) @ j_matrix(n).T @ E
    assert np.max(np.abs(pair)) <= 1e-12 * max(1.0, np.max(np.abs(free)) ** 2)


def test_generic_matrix_is_not_isotropic(rng):
    # perturb a dependent entry: span is no longer isotropic
    A = embed_free(3, 2, rng.standard_normal(7))
    A[2, 0] += 0.1
    assert constraint_residual(A) > 0.09
    assert np.max(np.abs(pairing_matrix(span_vectors(A)))) > 1e-3


def test_span_vectors_examples():
    assert np.array_equal(span_vectors(np.zeros((4, 2))), np.eye(6)[:, :2])
    assert np.array_equal(span_vectors(np.array([[0.3]]))[:, 0], [1.0, 0.3])


def test_plane_from_chart(rng):
    V0 = plane_from_chart(np.zeros((3, 1)))
    assert np.array_equal(V0.frame, np.eye(4)[:, :1])
    for n, m in NM:
        A = chart_embed(n, m, rng.standard_normal(chart_free_count(n, m)))
        V = plane_from_chart(A)
        assert np.allclose(V.frame.T @ V.frame, np.eye(m), atol=1e-12, rtol=0)
        E = span_vectors(A)
        P_span = E @ np.linalg.solve(E.T @ E, E.T)
        assert np.linalg.norm(P_span - V.projector(), 2) <= 1e-10
        again = gram_schmidt(V.frame)
        assert np.max(np.abs(again - V.frame)) <= 1e-12


def test_gram_schmidt_rejects_dependent():
    with pytest.raises(ValueError):
        gram_schmidt(np.array([[1.0, 2.0], [1.0, 2.0]]))


def test_isotropic_frame_validation():
    with pytest.raises(ValueError):
        IsotropicFrame(np.eye(2))  # e_1, e_2 in R^2 is not isotropic
    with pytest.raises(ValueError):
        IsotropicFrame(2 * np.eye(4)[:, :1])


def test_chart_matrix_roundtrip(rng):
    free = rng.standard_normal(chart_free_count(4, 3))
    A = chart_embed(4, 3, free)
    assert isinstance(A, ChartMatrix)
    assert np.array_equal(A.free, free)
    assert (A.n, A.m) == (4, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_haar_embedding_is_symplectic_and_orthogonal(n, rng):
    for k in range(50):
        g = haar_symplectic_orthogonal(n, 3, k)
        orth, symp = symplectic_defect(g)
        assert orth <= 1e-10 and symp <= 1e-10
        x, y = rng.standard_normal((2, 2 * n))
        assert abs(standard_form(g @ x, g @ y) - standard_form(x, y)) <= 1e-10


def test_haar_sample_isotropic_and_reproducible():
    for n, m in NM:
        V = haar_sample(n, m, seed=11)
        assert np.max(np.abs(pairing_matrix(V.frame))) <= 1e-10
        assert np.array_equal(V.frame, haar_sample(n, m, seed=11).frame)
    stack = haar_samples(3, 2, 5, seed=4)
    assert np.array_equal(stack[3], haar_sample(3, 2, seed=4, index=3).frame)
    assert not np.array_equal(stack[0], stack[1])


def test_line_angle_uniform():
    frames = haar_samples(1, 1, 10_000, seed=0)
    theta = line_angle(frames)
    assert np.all((0 <= theta) & (theta < np.pi))
    D = stats.kstest(theta / np.pi, "uniform").statistic
    assert D < stats.kstwo.ppf(0.99, 10_000)
