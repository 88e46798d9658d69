"""Chart projections, their Jacobians, and the transversality certificate.

Two projection families live here. ``chart_projection`` is the linear map
x -> ((e_1^A | x), ..., (e_m^A | x)) built from the non-orthonormal span
vectors; it has an analytic Jacobian in the chart coordinates. The
orthonormal-frame projection ``frame_coordinates`` uses the Gram-Schmidt
frame of V_A, and is only ever differentiated by central differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .grassmannian import (
    ISOTROPY_TOL,
    IsotropicFrame,
    _check_nm,
    _dims_from_chart,
    _entries,
    chart_free_count,
    embed_free,
    free_indices,
    gram_schmidt,
    span_vectors,
)

FD_STEP = 1e-5
CERTIFICATE_SLACK = 1e-12
LIPSCHITZ_SAFETY = 1.5


def _as_frame(V) -> np.ndarray:
    if isinstance(V, IsotropicFrame):
        return V.frame
    frame = np.asarray(V, dtype=float)
    m = frame.shape[-1]
    gram = np.swapaxes(frame, -1, -2) @ frame
    if not np.allclose(gram, np.eye(m), rtol=0, atol=ISOTROPY_TOL):
        raise ValueError("non-orthonormal frame")
    return frame


def chart_projection(A, x) -> np.ndarray:
    """pi_A(x)_j = x_j + sum_k a_{kj} x_{k+m}."""
    A = _entries(A)
    x = np.asarray(x, dtype=float)
    n, m = _dims_from_chart(A)
    if x.shape[-1] != 2 * n:
        raise ValueError(f"x must lie in R^{2 * n}, got length {x.shape[-1]}")
    return x[..., :m] + np.einsum("...km,...k->...m", A, x[..., m:])


def frame_coordinates(V, x) -> np.ndarray:
    """Coordinates ((v_1 | x), ..., (v_m | x)) of P_V x in the frame of V."""
    frame = _as_frame(V)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != frame.shape[-2]:
        raise ValueError("dimension mismatch between frame and vector")
    return x @ frame if frame.ndim == 2 else np.einsum("...pm,...p->...m", frame, x)


def orthogonal_projection(V, x) -> np.ndarray:
    """P_V x = sum_i (v_i | x) v_i, returned in R^{2n}."""
    frame = _as_frame(V)
    return frame_coordinates(frame, x) @ frame.T


def phi(A, x, y) -> np.ndarray:
    """Sliced map (pi_A(x) - pi_A(y)) / |x - y|, computed as pi_A(b)."""
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    dist = np.linalg.norm(diff)
    if dist == 0:
        raise ValueError("phi needs x != y")
    return chart_projection(A, diff / dist)


def jacobian_chart_projection(A, x) -> np.ndarray:
    """Analytic d pi_A(x) / d(free entries), shape (..., m, chart_free_count).

    Encodes the derivative table of the component functions, with the
    dependent entries of column j expanded through the isotropy constraint.
    """
    A = _entries(A)
    x = np.asarray(x, dtype=float)
    n, m = _dims_from_chart(A)
    k = n - m
    cols = free_indices(n, m)
    batch = np.broadcast_shapes(A.shape[:-2], x.shape[:-1])
    out = np.zeros(batch + (m, len(cols)))
    for col, (a, beta) in enumerate(cols):
        for j in range(m):
            if beta == j:
                val = x[..., m + a]
                if a < k:
                    val = val + np.sum(A[..., a + n, j + 1:] * x[..., n + j + 1:n + m], axis=-1)
                elif a >= n:
                    val = val - np.sum(A[..., a - n, j + 1:] * x[..., n + j + 1:n + m], axis=-1)
            elif beta > j:
                if a < k:
                    val = -A[..., a + n, j] * x[..., n + beta]
                elif a == k + j:
                    val = x[..., n + beta]
                elif a >= n:
                    val = A[..., a - n, j] * x[..., n + beta]
                else:
                    continue
            else:
                continue
            out[..., j, col] = val
    return out


def gram_matrix(A, x) -> np.ndarray:
    """B_{A,x} = D pi_A(x) (D pi_A(x))^T."""
    D = jacobian_chart_projection(A, x)
    return D @ np.swapaxes(D, -1, -2)


def lambda_sequences(m: int, i: int, n: int = 0) -> list[tuple[int, ...]]:
    """Strictly increasing i-tuples from {n+1, ..., n+m} (1-based), lexicographic."""
    if m < 2 or not 2 <= i <= m:
        raise ValueError(f"i must satisfy 2 <= i <= m, got i={i}, m={m}")
    return list(combinations(range(n + 1, n + m + 1), i))


def delta(x, n: int, m: int) -> np.ndarray | float:
    """Delta_x = sum_{k=1}^{2n-m} x_{m+k}^2, the common diagonal of B_{0,x}."""
    x = np.asarray(x, dtype=float)
    out = np.sum(x[..., m:2 * n] ** 2, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def _lambda_sum(x: np.ndarray, n: int, m: int, i: int) -> np.ndarray:
    idx = np.array(lambda_sequences(m, i, n)) - 1
    return np.sum(np.prod(x[..., idx] ** 2, axis=-1), axis=-1)


def det_closed_form(x, n: int, m: int):
    """det B_{0,x} = D^m + sum_{i=2}^m (-1)^{i-1} (i-1) D^{m-i} sum_{Lambda(m,i)} prod x^2."""
    _check_nm(n, m)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2 * n:
        raise ValueError(f"x must lie in R^{2 * n}")
    d = delta(x, n, m)
    out = d ** m
    for i in range(2, m + 1):
        out = out + (-1) ** (i - 1) * (i - 1) * d ** (m - i) * _lambda_sum(x, n, m, i)
    return float(out) if np.ndim(out) == 0 else out


def intermediate_bound(b, n: int, m: int):
    """Delta^m - Delta^{m-2} sum_{Lambda(m,2)} b^2 b^2, the middle term of the chain."""
    b = np.asarray(b, dtype=float)
    d = delta(b, n, m)
    if m < 2:
        return d ** m
    return d ** m - d ** (m - 2) * _lambda_sum(b, n, m, 2)


@dataclass(frozen=True)
class LowerBoundCheck:
    det: float
    delta: float
    bound: float
    ok: bool
    intermediate: float
    identity_gap: float  # |Delta_b - (1 - |Phi_b(0)|^2)|


def transversality_lower_bound(b, n: int, m: int) -> LowerBoundCheck:
    """Check det B_{0,b} >= Delta_b^m / 2 for a unit direction b."""
    _check_nm(n, m)
    b = np.asarray(b, dtype=float)
    if b.shape != (2 * n,):
        raise ValueError(f"b must lie in R^{2 * n}")
    if abs(np.linalg.norm(b) - 1.0) > 1e-12:
        raise ValueError("b must be a unit vector")
    det = det_closed_form(b, n, m)
    d = delta(b, n, m)
    phi0 = chart_projection(np.zeros((2 * n - m, m)), b)
    bound = 0.5 * d ** m
    return LowerBoundCheck(
        det=det,
        delta=d,
        bound=bound,
        ok=bool(det >= bound - CERTIFICATE_SLACK),
        intermediate=float(intermediate_bound(b, n, m)),
        identity_gap=abs(d - (1.0 - float(phi0 @ phi0))),
    )


def uniform_sphere(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def uniform_ball(rng: np.random.Generator, count: int, dim: int, radius: float = 1.0) -> np.ndarray:
    r = radius * rng.random(count) ** (1.0 / dim)
    return uniform_sphere(rng, count, dim) * r[:, None]


@dataclass(frozen=True)
class SweepResult:
    n: int
    m: int
    samples: int
    violations: int
    intermediate_violations: int
    min_slack: float  # min of det - Delta^m / 2


def transversality_sweep(n: int, m: int, samples: int, seed: int = 0, chunk: int = 100_000) -> SweepResult:
    """Monte Carlo check of det B_{0,b} >= Delta_b^m / 2 over uniform unit b."""
    _check_nm(n, m)
    rng = np.random.default_rng([seed, n, m])
    violations = inter_violations = 0
    min_slack = np.inf
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        b = uniform_sphere(rng, size, 2 * n)
        det = det_closed_form(b, n, m)
        d = delta(b, n, m)
        mid = intermediate_bound(b, n, m)
        half = 0.5 * d ** m
        violations += int(np.sum(det < half - CERTIFICATE_SLACK))
        inter_violations += int(np.sum((det < mid - CERTIFICATE_SLACK) | (mid < half - CERTIFICATE_SLACK)))
        min_slack = min(min_slack, float(np.min(det - half)))
        done += size
    return SweepResult(n, m, samples, violations, inter_violations, min_slack)


# -- orthonormal-frame projection, differentiated numerically -------------


def chart_frames(n: int, m: int, free) -> np.ndarray:
    """Gram-Schmidt frames of V_A for a stack of free vectors, shape (..., 2n, m)."""
    return gram_schmidt(span_vectors(embed_free(n, m, free)))


def frame_derivatives(n: int, m: int, free, step: float = FD_STEP) -> np.ndarray:
    """Central differences of the frame along each free coordinate, shape (..., l, 2n, m)."""
    free = np.asarray(free, dtype=float)
    l = free.shape[-1]
    shift = step * np.eye(l)
    plus = chart_frames(n, m, free[..., None, :] + shift)
    minus = chart_frames(n, m, free[..., None, :] - shift)
    return (plus - minus) / (2.0 * step)


def _direction_jacobian(dV: np.ndarray, b: np.ndarray) -> np.ndarray:
    # dV (..., l, 2n, m), b (..., 2n) -> D_A (V_A^T b), shape (..., m, l)
    return np.einsum("...lpm,...p->...ml", dV, b)


def _gram_det(D: np.ndarray) -> np.ndarray:
    return np.linalg.det(D @ np.swapaxes(D, -1, -2))


@dataclass(frozen=True)
class IdentityCheck:
    value_gap: float
    derivative_gap: float
    det_gap: float


def frame_derivative_identity_check(n: int, m: int, b, step: float = FD_STEP) -> IdentityCheck:
    """Compare the orthonormal-frame projection with pi_A at A = 0.

    Values agree exactly there, and so do first derivatives, so the two
    Gram determinants coincide.
    """
    _check_nm(n, m)
    b = np.asarray(b, dtype=float)
    if abs(np.linalg.norm(b) - 1.0) > 1e-12:
        raise ValueError("b must be a unit vector")
    l = chart_free_count(n, m)
    zero = np.zeros(l)
    V0 = chart_frames(n, m, zero)
    E0 = span_vectors(embed_free(n, m, zero))
    value_gap = float(np.max(np.abs(b @ V0 - b @ E0)))
    D_frame = _direction_jacobian(frame_derivatives(n, m, zero, step), b)
    D_chart = jacobian_chart_projection(np.zeros((2 * n - m, m)), b)
    det_fd = float(_gram_det(D_frame))
    return IdentityCheck(
        value_gap=value_gap,
        derivative_gap=float(np.max(np.abs(D_frame - D_chart))),
        det_gap=abs(det_closed_form(b, n, m) - det_fd),
    )


@dataclass(frozen=True)
class LipschitzEstimate:
    L1: float
    L2: float
    raw_L1: float  # largest sampled gradient norm, before inflation and clamping
    raw_L2: float


def _stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(seed), purpose, int(index)])


def estimate_lipschitz(
    n: int,
    m: int,
    grid: int = 32,
    directions: int = 256,
    seed: int = 0,
    step: float = FD_STEP,
    outer_step: float = 1e-4,
) -> LipschitzEstimate:
    """Sampled Lipschitz bounds for (A, b) -> P_{V_A} b and (A, b) -> det(D D^T).

    Chart points are the origin plus uniform draws from the unit ball of free
    coordinates; directions are uniform on the sphere. Gradients in b are
    taken in the ambient space, which bounds the tangential gradient.
    """
    _check_nm(n, m)
    if grid < 1 or directions < 1:
        raise ValueError("grid and directions must be positive")
    l = chart_free_count(n, m)
    rng = _stream(seed, 1)
    points = np.vstack([np.zeros((1, l)), uniform_ball(rng, grid - 1, l)])
    dirs = uniform_sphere(rng, directions, 2 * n)
    eye_b = np.eye(2 * n)
    eye_l = np.eye(l)
    raw1 = raw2 = 0.0
    for lam in points:
        V = chart_frames(n, m, lam)
        dV = frame_derivatives(n, m, lam, step)
        D = _direction_jacobian(dV[None], dirs)  # (dirs, m, l)
        # L1: joint Jacobian [d/dlambda, d/db] of V^T b
        joint = np.concatenate([D, np.broadcast_to(V.T, (directions, m, 2 * n))], axis=-1)
        raw1 = max(raw1, float(np.max(np.linalg.norm(joint, ord=2, axis=(-2, -1)))))
        # L2: gradient of det(D D^T); lambda-part by outer differences of the inner ones
        shifted = lam + outer_step * np.concatenate([eye_l, -eye_l])
        dV_shift = frame_derivatives(n, m, shifted, step)  # (2l, l, 2n, m)
        f_shift = _gram_det(_direction_jacobian(dV_shift[:, None], dirs[None]))  # (2l, dirs)
        grad_lam = (f_shift[:l] - f_shift[l:]) / (2.0 * outer_step)
        bp = dirs[:, None, :] + 1e-6 * eye_b[None]
        bm = dirs[:, None, :] - 1e-6 * eye_b[None]
        grad_b = (_gram_det(_direction_jacobian(dV[None, None], bp))
                  - _gram_det(_direction_jacobian(dV[None, None], bm))) / 2e-6
        norm2 = np.sqrt(np.sum(grad_lam ** 2, axis=0) + np.sum(grad_b ** 2, axis=1))
        raw2 = max(raw2, float(np.max(norm2)))
    return LipschitzEstimate(
        L1=max(1.0, LIPSCHITZ_SAFETY * raw1),
        L2=max(1.0, LIPSCHITZ_SAFETY * raw2),
        raw_L1=raw1,
        raw_L2=raw2,
    )


def max_ct(m: int) -> float:
    """Largest admissible threshold 2^{-(m+2)/2}."""
    return 2.0 ** (-(m + 2) / 2)


def chart_radius(C_T: float, m: int, L1: float, L2: float) -> float:
    """epsilon = min{C_T / L1, (1 - 4 C_T^2)^m / (4 L2)}."""
    return min(C_T / L1, (1.0 - 4.0 * C_T ** 2) ** m / (4.0 * L2))


@dataclass(frozen=True)
class TransversalityReport:
    n: int
    m: int
    C_T: float
    epsilon: float
    L1: float
    L2: float
    samples: int
    tested: int  # samples with |P_{V_A} b| <= C_T
    min_margin: float  # min of det - C_T^2 over tested samples
    violations: int
    table: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return self.violations == 0


def transversality_certificate(
    n: int,
    m: int,
    C_T: float,
    grid: int = 32,
    samples: int = 10_000,
    seed: int = 0,
    directions: int = 256,
    conditioned: bool = True,
    chunk: int = 2000,
) -> TransversalityReport:
    """Numerical certificate of the transversality inequality near V_0.

    Draws (A, b) with A uniform in the epsilon-ball of free coordinates and
    checks that |P_{V_A} b| <= C_T forces det(D_A Phi (D_A Phi)^T) >= C_T^2,
    with D_A taken by central differences. When ``conditioned`` is set, b is
    drawn uniformly among directions satisfying the hypothesis, so every
    sample is a test; otherwise b is uniform on the sphere.
    """
    _check_nm(n, m)
    if not 0 < C_T <= max_ct(m):
        raise ValueError(f"C_T must lie in (0, {max_ct(m):.6g}] for m={m}")
    if grid < 1 or samples < 1:
        raise ValueError("grid and samples must be positive")
    lip = estimate_lipschitz(n, m, grid=grid, directions=directions, seed=seed)
    eps = chart_radius(C_T, m, lip.L1, lip.L2)
    l = chart_free_count(n, m)

    lam = np.empty((samples, l))
    raw_b = np.empty((samples, 2 * n))
    t = np.empty(samples)
    for k in range(samples):
        rng = _stream(seed, 2, k)
        lam[k] = uniform_ball(rng, 1, l, eps)[0]
        raw_b[k] = uniform_sphere(rng, 1, 2 * n)[0]
        t[k] = rng.random()

    proj_norm = np.empty(samples)
    det = np.empty(samples)
    for lo in range(0, samples, chunk):
        sl = slice(lo, min(lo + chunk, samples))
        V = chart_frames(n, m, lam[sl])
        b = raw_b[sl]
        if conditioned:
            inside = np.einsum("kpm,kp->km", V, b)
            along = np.einsum("kpm,km->kp", V, inside)
            across = b - along
            along /= np.linalg.norm(along, axis=1, keepdims=True)
            across /= np.linalg.norm(across, axis=1, keepdims=True)
            s = C_T * t[sl][:, None]
            b = s * along + np.sqrt(1.0 - s ** 2) * across
            raw_b[sl] = b
        proj_norm[sl] = np.linalg.norm(np.einsum("kpm,kp->km", V, b), axis=1)
        dV = frame_derivatives(n, m, lam[sl])
        det[sl] = _gram_det(_direction_jacobian(dV, b))

    tested = proj_norm <= C_T
    margin = det - C_T ** 2
    tested_margin = margin[tested]
    violations = int(np.sum(tested_margin < -CERTIFICATE_SLACK))
    return TransversalityReport(
        n=n,
        m=m,
        C_T=C_T,
        epsilon=eps,
        L1=lip.L1,
        L2=lip.L2,
        samples=samples,
        tested=int(np.sum(tested)),
        min_margin=float(np.min(tested_margin)) if tested_margin.size else float("nan"),
        violations=violations,
        table={
            "free_norm": np.linalg.norm(lam, axis=1),
            "proj_norm": proj_norm,
            "det": det,
            "margin": margin,
            "tested": tested,
        },
    )
