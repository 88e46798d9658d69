"""Local coordinates on the isotropic Grassmannian G_h(n, m).

Index conventions are 0-based throughout. A chart matrix ``A`` has shape
(2n - m, m); its plane is spanned by the columns of ``[[I_m], [A]]``. The
independent entries of column ``c`` are rows ``0 .. n-m+c`` and
``n .. 2n-m-1``; rows ``n-m+c+1 .. n-1`` are determined by the isotropy
constraint. Free vectors list the independent entries column-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .symplectic import ISOTROPY_TOL, Subspace, j_matrix, pairing_matrix


def _check_nm(n: int, m: int) -> None:
    if not (isinstance(n, (int, np.integer)) and isinstance(m, (int, np.integer))):
        raise TypeError("n and m must be integers")
    if not 0 < m <= n:
        raise ValueError(f"(n, m) = ({n}, {m}): m must satisfy 0 < m <= n")


def chart_free_count(n: int, m: int) -> int:
    """Dimension 2nm - m(3m - 1)/2 of G_h(n, m)."""
    _check_nm(n, m)
    return 2 * n * m - m * (3 * m - 1) // 2


@lru_cache(maxsize=None)
def free_indices(n: int, m: int) -> tuple[tuple[int, int], ...]:
    """(row, col) of every independent chart entry in column-major order."""
    _check_nm(n, m)
    out = []
    for c in range(m):
        rows = list(range(n - m + c + 1)) + list(range(n, 2 * n - m))
        out.extend((r, c) for r in rows)
    return tuple(out)


@lru_cache(maxsize=None)
def _free_index_arrays(n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.array(free_indices(n, m), dtype=int).reshape(-1, 2)
    return idx[:, 0], idx[:, 1]


def _dims_from_chart(A: np.ndarray) -> tuple[int, int]:
    rows, m = A.shape[-2:]
    if (rows + m) % 2:
        raise ValueError(f"chart shape {A.shape[-2:]} is not (2n - m, m)")
    n = (rows + m) // 2
    _check_nm(n, m)
    return n, m


def _constraint_rhs(A: np.ndarray, n: int, m: int, c: int, ci: int) -> np.ndarray:
    k = n - m
    corr = np.sum(A[..., :k, c] * A[..., n:n + k, ci] - A[..., n:n + k, c] * A[..., :k, ci], axis=-1)
    return A[..., n - m + c, ci] + corr


@dataclass(frozen=True)
class ChartMatrix:
    """A matrix in M_h(n, m); build it with :func:`chart_embed`."""

    entries: np.ndarray
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        n, m = _dims_from_chart(entries)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)

    @property
    def free(self) -> np.ndarray:
        rows, cols = _free_index_arrays(self.n, self.m)
        return self.entries[rows, cols].copy()

    def residual(self) -> float:
        return constraint_residual(self.entries)


def _entries(A) -> np.ndarray:
    return A.entries if isinstance(A, ChartMatrix) else np.asarray(A, dtype=float)


def constraint_residual(A) -> float:
    """Largest violation of the isotropy constraint over dependent entries."""
    A = _entries(A)
    n, m = _dims_from_chart(A)
    worst = 0.0
    for c in range(m):
        for ci in range(c + 1, m):
            gap = np.abs(A[..., n - m + ci, c] - _constraint_rhs(A, n, m, c, ci))
            worst = max(worst, float(np.max(gap)))
    return worst


def embed_free(n: int, m: int, free) -> np.ndarray:
    """Vectorized :func:`chart_embed` returning raw arrays of shape (..., 2n-m, m)."""
    free = np.asarray(free, dtype=float)
    count = chart_free_count(n, m)
    if free.shape[-1] != count:
        raise ValueError(f"free vector for (n, m) = ({n}, {m}) needs {count} entries, got {free.shape[-1]}")
    A = np.zeros(free.shape[:-1] + (2 * n - m, m))
    rows, cols = _free_index_arrays(n, m)
    A[..., rows, cols] = free
    # the right-hand side only reads independent entries, so fill order is irrelevant
    for c in range(m):
        for ci in range(c + 1, m):
            A[..., n - m + ci, c] = _constraint_rhs(A, n, m, c, ci)
    return A


def chart_embed(n: int, m: int, free) -> ChartMatrix:
    """Build the chart matrix whose independent entries are ``free``."""
    free = np.asarray(free, dtype=float)
    if free.ndim != 1:
        raise ValueError("chart_embed takes a single free vector; use embed_free for batches")
    return ChartMatrix(embed_free(n, m, free))


def span_vectors(A) -> np.ndarray:
    """Columns e_i^A = e_i + sum_k a_{ki} e_{k+m}, as a (..., 2n, m) array."""
    A = _entries(A)
    m = A.shape[-1]
    eye = np.broadcast_to(np.eye(m), A.shape[:-2] + (m, m))
    return np.concatenate([eye, A], axis=-2)


def gram_schmidt(vectors, reorthogonalize: bool = True) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of a (..., d, m) stack.

    Processes columns in index order; with ``reorthogonalize`` each column
    gets a second projection pass.
    """
    Q = np.array(vectors, dtype=float)
    m = Q.shape[-1]
    passes = 2 if reorthogonalize else 1
    for i in range(m):
        v = Q[..., :, i]
        for _ in range(passes):
            for k in range(i):
                q = Q[..., :, k]
                v = v - np.sum(q * v, axis=-1, keepdims=True) * q
        norm = np.linalg.norm(v, axis=-1, keepdims=True)
        if np.any(norm < 1e-14):
            raise ValueError("numerically dependent input vectors")
        Q[..., :, i] = v / norm
    return Q


@dataclass(frozen=True)
class IsotropicFrame:
    """Orthonormal frame (2n x m) of an isotropic m-plane."""

    frame: np.ndarray
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        frame = np.array(self.frame, dtype=float)
        if frame.ndim != 2 or frame.shape[0] % 2:
            raise ValueError(f"frame must be (2n, m), got shape {frame.shape}")
        n, m = frame.shape[0] // 2, frame.shape[1]
        _check_nm(n, m)
        if not np.allclose(frame.T @ frame, np.eye(m), rtol=0, atol=ISOTROPY_TOL):
            raise ValueError("frame is not orthonormal")
        if np.max(np.abs(pairing_matrix(frame))) > ISOTROPY_TOL:
            raise ValueError("frame does not span an isotropic subspace")
        frame.setflags(write=False)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)

    @classmethod
    def standard(cls, n: int, m: int) -> "IsotropicFrame":
        """V_0 = span{e_1, ..., e_m}."""
        _check_nm(n, m)
        return cls(np.eye(2 * n)[:, :m])

    def subspace(self) -> Subspace:
        return Subspace(self.frame, orthonormal=True)

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T


def plane_from_chart(A) -> IsotropicFrame:
    """Orthonormal frame v_1^A, ..., v_m^A of V_A by Gram-Schmidt."""
    return IsotropicFrame(gram_schmidt(span_vectors(A)))


def unitary_embedding(U: np.ndarray) -> np.ndarray:
    """Real 2n x 2n form of a complex n x n matrix X + iY: [[X, -Y], [Y, X]].

    With z = (p, q) read as p + iq this is complex multiplication, which
    commutes with J (multiplication by -i), so unitary U gives g^T J g = J.
    """
    X, Y = U.real, U.imag
    return np.block([[X, -Y], [Y, X]])


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of U(n): QR of a complex Ginibre matrix with phase fix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sample ``index`` of a run seeded by ``seed``."""
    return np.random.default_rng([int(seed), int(index)])


def haar_symplectic_orthogonal(n: int, seed: int, index: int = 0) -> np.ndarray:
    return unitary_embedding(haar_unitary(n, sample_stream(seed, index)))


def haar_sample(n: int, m: int, seed: int, index: int = 0) -> IsotropicFrame:
    """Isotropic m-plane distributed by the U(n)-invariant measure.

    The plane is g(span{e_1, ..., e_m}) for a Haar-random unitary g.
    """
    _check_nm(n, m)
    g = haar_symplectic_orthogonal(n, seed, index)
    return IsotropicFrame(g[:, :m])


def haar_samples(n: int, m: int, count: int, seed: int) -> np.ndarray:
    """Stack of ``count`` frames, shape (count, 2n, m); entry k equals haar_sample(n, m, seed, k)."""
    _check_nm(n, m)
    out = np.empty((count, 2 * n, m))
    for k in range(count):
        out[k] = haar_symplectic_orthogonal(n, seed, k)[:, :m]
    return out


def line_angle(frame) -> float | np.ndarray:
    """Angle in [0, pi) of a line in R^2 given by its (2, 1) frame(s)."""
    frame = np.asarray(frame, dtype=float)
    theta = np.arctan2(frame[..., 1, 0], frame[..., 0, 0])
    return np.mod(theta, np.pi)


def symplectic_defect(g: np.ndarray) -> tuple[float, float]:
    """(max |g^T g - I|, max |g^T J g - J|) for a real 2n x 2n matrix."""
    n = g.shape[0] // 2
    J = j_matrix(n)
    eye = np.eye(2 * n)
    return float(np.max(np.abs(g.T @ g - eye))), float(np.max(np.abs(g.T @ J @ g - J)))
