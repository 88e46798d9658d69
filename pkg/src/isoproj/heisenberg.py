"""The Heisenberg group H^n = R^{2n} x R and its horizontal/vertical projections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grassmannian import IsotropicFrame
from .symplectic import ISOTROPY_TOL, as_vector, pairing_matrix, standard_form
from .transversality import frame_coordinates


@dataclass(frozen=True, eq=False)
class HeisenbergPoint:
    z: np.ndarray
    t: float

    def __post_init__(self):
        z = as_vector(self.z).copy()
        z.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return self.z.shape[0] // 2

    @classmethod
    def identity(cls, n: int) -> "HeisenbergPoint":
        return cls(np.zeros(2 * n), 0.0)

    @classmethod
    def from_array(cls, p) -> "HeisenbergPoint":
        p = np.asarray(p, dtype=float)
        return cls(p[:-1], p[-1])

    def to_array(self) -> np.ndarray:
        return np.append(self.z, self.t)

    def __eq__(self, other):
        if not isinstance(other, HeisenbergPoint):
            return NotImplemented
        return self.t == other.t and np.array_equal(self.z, other.z)

    __hash__ = None

    def inverse(self) -> "HeisenbergPoint":
        return HeisenbergPoint(-self.z, -self.t)

    def __mul__(self, other: "HeisenbergPoint") -> "HeisenbergPoint":
        return group_op(self, other)


def group_op(p: HeisenbergPoint, q: HeisenbergPoint) -> HeisenbergPoint:
    """(z, t) * (z', t') = (z + z', t + t' + 2 omega(z, z'))."""
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: H^{p.n} vs H^{q.n}")
    return HeisenbergPoint(p.z + q.z, p.t + q.t + 2.0 * standard_form(p.z, q.z))


def dilation(s: float, p: HeisenbergPoint) -> HeisenbergPoint:
    """delta_s(z, t) = (s z, s^2 t)."""
    if not s > 0:
        raise ValueError("dilation factor must be positive")
    return HeisenbergPoint(s * p.z, s * s * p.t)


def heis_norm(p: HeisenbergPoint) -> float:
    """(|z|^4 + t^2)^{1/4}."""
    r2 = float(p.z @ p.z)
    return (r2 * r2 + p.t * p.t) ** 0.25


def heis_dist(p: HeisenbergPoint, q: HeisenbergPoint) -> float:
    """Left-invariant metric d_H(p, q) = |p^{-1} * q|_H."""
    return heis_norm(group_op(p.inverse(), q))


def _require_isotropic(V) -> np.ndarray:
    if isinstance(V, IsotropicFrame):
        return V.frame
    frame = np.asarray(V, dtype=float)
    if np.max(np.abs(pairing_matrix(frame))) > ISOTROPY_TOL:
        raise ValueError("V is not isotropic; only isotropic planes give horizontal subgroups")
    return IsotropicFrame(frame).frame


def coordinate_projection(p):
    """pi(z, t) = z. Accepts a HeisenbergPoint or an (..., 2n+1) array."""
    if isinstance(p, HeisenbergPoint):
        return p.z.copy()
    return np.ascontiguousarray(np.asarray(p, dtype=float)[..., :-1])


def horizontal_projection(V, p: HeisenbergPoint) -> HeisenbergPoint:
    """P_V(z, t) = (P_V z, 0)."""
    frame = _require_isotropic(V)
    z = coordinate_projection(p)
    return HeisenbergPoint((z @ frame) @ frame.T, 0.0)


def vertical_projection(V, p: HeisenbergPoint) -> HeisenbergPoint:
    """P_{V-perp}(z, t) = (P_{V-perp} z, t - 2 omega(P_{V-perp} z, P_V z))."""
    frame = _require_isotropic(V)
    along = (p.z @ frame) @ frame.T
    across = p.z - along
    return HeisenbergPoint(across, p.t - 2.0 * standard_form(across, along))


def decompose(V, p: HeisenbergPoint) -> tuple[HeisenbergPoint, HeisenbergPoint]:
    """(vertical, horizontal) parts with vertical * horizontal == p."""
    return vertical_projection(V, p), horizontal_projection(V, p)


def horizontal_coordinates(V, points) -> np.ndarray:
    """Frame coordinates of P_V(p) for an (N, 2n+1) array of points.

    Routed as P_V composed with pi, so a lift with t = 0 gives bit-identical
    coordinates to projecting the underlying planar points.
    """
    frame = _require_isotropic(V)
    return frame_coordinates(frame, coordinate_projection(points))


def lift(points, t=None) -> np.ndarray:
    """Lift (N, 2n) points to H^n. ``t`` is None (t = 0), an array, or a callable of z."""
    points = np.asarray(points, dtype=float)
    if t is None:
        tt = np.zeros(points.shape[0])
    elif callable(t):
        tt = np.asarray(t(points), dtype=float)
    else:
        tt = np.broadcast_to(np.asarray(t, dtype=float), points.shape[:1])
    return np.column_stack([points, tt])
