"""Standard symplectic form on R^{2n} and predicates on subspaces."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ISOTROPY_TOL = 1e-10
NULLSPACE_RCOND = 1e-12


def _half_dim(length: int) -> int:
    if length % 2 or length == 0:
        raise ValueError(f"ambient vectors must have even positive length, got {length}")
    return length // 2


def as_vector(x, n: int | None = None) -> np.ndarray:
    """Coerce to a float vector of length 2n, checking ``n`` when given."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-d vector, got shape {x.shape}")
    k = _half_dim(x.shape[0])
    if n is not None and k != n:
        raise ValueError(f"expected a vector in R^{2 * n}, got length {x.shape[0]}")
    return x


def standard_form(x, y) -> float | np.ndarray:
    """omega(x, y) = sum_i x_{i+n} y_i - x_i y_{i+n}.

    Works on single vectors or on stacks along the leading axes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    n = _half_dim(x.shape[-1])
    out = np.sum(x[..., n:] * y[..., :n] - x[..., :n] * y[..., n:], axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def j_matrix(n: int) -> np.ndarray:
    """The 2n x 2n matrix J with omega(x, y) = (Jx | y)."""
    if n < 1:
        raise ValueError("n must be positive")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def pairing_matrix(frame) -> np.ndarray:
    """Matrix of omega(v_i, v_j) over the columns of ``frame``."""
    frame = np.asarray(frame, dtype=float)
    n = _half_dim(frame.shape[0])
    return frame.T @ j_matrix(n).T @ frame


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of R^{2n} held as an explicit column frame.

    ``orthonormal`` is set by constructors that guarantee it; it is never
    inferred.
    """

    frame: np.ndarray
    orthonormal: bool = False
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        frame = np.array(self.frame, dtype=float)
        if frame.ndim == 1:
            frame = frame[:, None]
        if frame.ndim != 2:
            raise ValueError("frame must be a 2-d array of column vectors")
        n = _half_dim(frame.shape[0])
        if frame.shape[1] > 2 * n:
            raise ValueError("more frame vectors than the ambient dimension")
        frame.setflags(write=False)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", frame.shape[1])
        if self.orthonormal:
            gram = frame.T @ frame
            if not np.allclose(gram, np.eye(self.m), rtol=0, atol=ISOTROPY_TOL):
                raise ValueError("frame flagged orthonormal but Gram matrix is not the identity")

    @classmethod
    def span(cls, *vectors) -> "Subspace":
        return cls(np.column_stack([np.asarray(v, dtype=float) for v in vectors]))

    @classmethod
    def coordinate(cls, n: int, indices) -> "Subspace":
        """span{e_i : i in indices}, indices 0-based."""
        eye = np.eye(2 * n)
        return cls(eye[:, list(indices)], orthonormal=True)

    def rank(self) -> int:
        if self.m == 0:
            return 0
        s = np.linalg.svd(self.frame, compute_uv=False)
        return int(np.sum(s > NULLSPACE_RCOND * s[0]))


def symplectic_orthogonal(V: Subspace) -> Subspace:
    """Frame for V^omega = {w : omega(w, v) = 0 for all v in V}.

    omega(w, v) = (Jw | v) = -(w | Jv), so V^omega is the null space of
    (JV)^T. The returned frame is orthonormal.
    """
    if V.rank() != V.m:
        raise ValueError("rank-deficient frame")
    constraints = (j_matrix(V.n) @ V.frame).T
    _, s, vt = np.linalg.svd(constraints, full_matrices=True)
    cutoff = NULLSPACE_RCOND * (s[0] if s.size else 1.0)
    r = int(np.sum(s > cutoff))
    return Subspace(vt[r:].T.copy(), orthonormal=True)


def _unit_columns(frame: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(frame, axis=0)
    if np.any(norms == 0):
        raise ValueError("zero vector in frame")
    return frame / norms


def is_isotropic(V: Subspace, tol: float = ISOTROPY_TOL) -> bool:
    """Max |omega(v_i, v_j)| over unit-normalized frame vectors is <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if V.m == 0:
        return True
    pairing = pairing_matrix(_unit_columns(V.frame))
    return bool(np.max(np.abs(pairing)) <= tol)


def is_lagrangian(V: Subspace, tol: float = ISOTROPY_TOL) -> bool:
    return V.m == V.n and V.rank() == V.n and is_isotropic(V, tol)
