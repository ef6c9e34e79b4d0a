"""Fields with exact directional derivatives and the three geometric backends.

A field is a pair of callables: its value at a point and its ambient
directional derivative ``D_w`` there.  Backends turn those into covariant
derivatives, brackets and curvature.  Points on a Lie frame are ignored
(every field there is left-invariant), so any placeholder works.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import null_space

from .lie import InvariantStructure, LieFrame, koszul_connection
from .multilinear import Metric


@dataclass(frozen=True)
class VectorField:
    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray, np.ndarray], np.ndarray]
    # D_u D_w Y; only needed for curvature through the connection
    deriv2: Callable | None = None

    @classmethod
    def constant(cls, v) -> "VectorField":
        v = np.asarray(v, dtype=float)
        zero = np.zeros_like(v)
        return cls(lambda p: v, lambda p, w: zero, lambda p, u, w: zero)


@dataclass(frozen=True)
class EndoField:
    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray, np.ndarray], np.ndarray]

    @classmethod
    def constant(cls, M) -> "EndoField":
        M = np.asarray(M, dtype=float)
        zero = np.zeros_like(M)
        return cls(lambda p: M, lambda p, w: zero)

    def __matmul__(self, other: "EndoField") -> "EndoField":
        a, b = self, other
        return EndoField(
            lambda p: a.value(p) @ b.value(p),
            lambda p, w: a.deriv(p, w) @ b.value(p) + a.value(p) @ b.deriv(p, w),
        )

    def __add__(self, other: "EndoField") -> "EndoField":
        a, b = self, other
        return EndoField(lambda p: a.value(p) + b.value(p), lambda p, w: a.deriv(p, w) + b.deriv(p, w))

    def __neg__(self) -> "EndoField":
        a = self
        return EndoField(lambda p: -a.value(p), lambda p, w: -a.deriv(p, w))

    def __sub__(self, other: "EndoField") -> "EndoField":
        return self + (-other)

    def __rmul__(self, s: float) -> "EndoField":
        a, s = self, float(s)
        return EndoField(lambda p: s * a.value(p), lambda p, w: s * a.deriv(p, w))

    @property
    def T(self) -> "EndoField":
        a = self
        return EndoField(lambda p: a.value(p).T, lambda p, w: a.deriv(p, w).T)

    def inverse(self) -> "EndoField":
        """Pointwise inverse with ``D(A^-1) = -A^-1 (DA) A^-1``."""
        a = self
        inv = lambda p: np.linalg.inv(a.value(p))  # noqa: E731

        def deriv(p, w):
            B = inv(p)
            return -B @ a.deriv(p, w) @ B

        return EndoField(inv, deriv)

    def apply(self, Y: VectorField) -> VectorField:
        """The vector field ``q -> A(q) Y(q)``."""
        a = self
        return VectorField(
            lambda p: a.value(p) @ Y.value(p),
            lambda p, w: a.deriv(p, w) @ Y.value(p) + a.value(p) @ Y.deriv(p, w),
        )


class Backend:
    """Geometry on which the twist engine runs."""

    name = "backend"
    kappa = 0.0

    dim: int
    ambient_dim: int

    # -- points and frames ------------------------------------------------------

    def sample_point(self, rng) -> np.ndarray:
        raise NotImplementedError

    def metric(self, p) -> np.ndarray:
        """Gram matrix in ambient coordinates (valid on tangent vectors)."""
        return np.eye(self.ambient_dim)

    def tangent_basis(self, p) -> np.ndarray:
        """Columns form a ``g``-orthonormal basis of ``T_p``."""
        return np.eye(self.ambient_dim)

    def project(self, p, v) -> np.ndarray:
        return np.asarray(v, dtype=float)

    def projector(self, p) -> np.ndarray:
        return np.eye(self.ambient_dim)

    def random_tangent(self, p, rng) -> np.ndarray:
        return self.tangent_basis(p) @ rng.standard_normal(self.dim)

    def inner(self, p, X, Y) -> float:
        return float(X @ self.metric(p) @ Y)

    # -- calculus ---------------------------------------------------------------

    def extend(self, p, X) -> VectorField:
        return VectorField.constant(X)

    def connection_matrix(self, X):
        """Matrix ``Gamma(X)`` added to the projected derivative, or ``None``."""
        return None

    def bracket_constant(self, X, Y) -> np.ndarray:
        return np.zeros(self.ambient_dim)

    def nabla(self, p, X, Yf: VectorField) -> np.ndarray:
        out = self.project(p, Yf.deriv(p, X))
        G = self.connection_matrix(X)
        if G is not None:
            out = out + G @ Yf.value(p)
        return out

    def nabla_endo(self, p, X, Af: EndoField) -> np.ndarray:
        """Matrix of ``nabla_X A``, acting on tangent vectors."""
        P = self.projector(p)
        out = P @ Af.deriv(p, X) @ P
        G = self.connection_matrix(X)
        if G is not None:
            A = Af.value(p)
            out = out + G @ A - A @ G
        return out

    def bracket(self, p, Xf: VectorField, Yf: VectorField) -> np.ndarray:
        X, Y = Xf.value(p), Yf.value(p)
        return Yf.deriv(p, X) - Xf.deriv(p, Y) + self.bracket_constant(X, Y)

    def curvature(self, p, X, Y) -> np.ndarray:
        """Matrix of ``R^g(X, Y)``."""
        raise NotImplementedError


class SphereBackend(Backend):
    """Unit sphere ``S^n`` in ``R^(n+1)`` with the round metric."""

    name = "sphere"
    kappa = 1.0

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("sphere dimension must be at least 2")
        self.dim = n
        self.ambient_dim = n + 1

    def __repr__(self):
        return f"SphereBackend({self.dim})"

    def sample_point(self, rng) -> np.ndarray:
        v = rng.standard_normal(self.ambient_dim)
        return v / np.linalg.norm(v)

    def tangent_basis(self, p) -> np.ndarray:
        return null_space(np.asarray(p, dtype=float)[None, :])

    def project(self, p, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return v - (v @ p) * p

    def projector(self, p) -> np.ndarray:
        return np.eye(self.ambient_dim) - np.outer(p, p)

    def extend(self, p, X) -> VectorField:
        """Canonical extension ``q -> X - (X.q) q``."""
        X = np.asarray(X, dtype=float)
        return VectorField(
            lambda q: X - (X @ q) * q,
            lambda q, w: -(X @ w) * q - (X @ q) * w,
            lambda q, u, w: -(X @ u) * w - (X @ w) * u,
        )

    def curvature(self, p, X, Y) -> np.ndarray:
        # R(X,Y)Z = g(Y,Z) X - g(X,Z) Y
        return np.outer(X, Y) - np.outer(Y, X)


class FlatBackend(Backend):
    """Euclidean ``R^n`` with coordinate fields; points sampled in a box."""

    name = "flat"
    kappa = 0.0

    def __init__(self, n: int, box: float = np.pi):
        self.dim = self.ambient_dim = n
        self.box = float(box)

    def __repr__(self):
        return f"FlatBackend({self.dim})"

    def sample_point(self, rng) -> np.ndarray:
        return rng.uniform(-self.box, self.box, self.dim)

    def curvature(self, p, X, Y) -> np.ndarray:
        return np.zeros((self.dim, self.dim))


class LieBackend(Backend):
    """Left-invariant geometry of a Lie frame with an invariant metric."""

    name = "lie"

    def __init__(self, frame: LieFrame, g):
        self.frame = frame
        self.g = g if isinstance(g, Metric) else Metric(np.asarray(g, dtype=float))
        self.conn = koszul_connection(frame, self.g)
        self.dim = self.ambient_dim = frame.dim
        self._basis = self.g.orthonormal_basis()

    @classmethod
    def of(cls, structure: InvariantStructure) -> "LieBackend":
        return cls(structure.frame, structure.g)

    def __repr__(self):
        return f"LieBackend(dim={self.dim})"

    def sample_point(self, rng) -> np.ndarray:
        return np.zeros(0)

    def metric(self, p) -> np.ndarray:
        return self.g.entries

    def tangent_basis(self, p) -> np.ndarray:
        return self._basis

    def connection_matrix(self, X):
        return self.conn.operator(X)

    def bracket_constant(self, X, Y) -> np.ndarray:
        return self.frame.bracket(X, Y)

    def curvature(self, p, X, Y) -> np.ndarray:
        GX, GY = self.conn.operator(X), self.conn.operator(Y)
        return GX @ GY - GY @ GX - self.conn.operator(self.frame.bracket(X, Y))


def covariant_second(backend: Backend, p, X, Y, Zf: VectorField) -> np.ndarray:
    """``nabla_X nabla_Y Z`` at ``p`` for fields with second derivatives, ``Y`` extended canonically.

    Only implemented for the sphere, where ``nabla_Y Z = P D_Y Z``.
    """
    if not isinstance(backend, SphereBackend):
        raise NotImplementedError("second covariant derivatives are only needed on spheres")
    if Zf.deriv2 is None:
        raise ValueError("field has no second derivative")
    Yf = backend.extend(p, Y)
    P = backend.projector(p)
    DZ_Y = Zf.deriv(p, Yf.value(p))
    # derivative of q -> P(q) DZ(q)[Y(q)] in direction X
    dP = -(np.outer(X, p) + np.outer(p, X))
    term = dP @ DZ_Y + P @ (Zf.deriv2(p, X, Yf.value(p)) + Zf.deriv(p, Yf.deriv(p, X)))
    return P @ term


def nijenhuis_at(backend: Backend, Kf: EndoField, p, X, Y) -> np.ndarray:
    """``N_K(X, Y) = K[KX, Y] + K[X, KY] + [X, Y] - [KX, KY]`` from brackets of extensions."""
    K = Kf.value(p)
    Xf, Yf = backend.extend(p, X), backend.extend(p, Y)
    KX, KY = Kf.apply(Xf), Kf.apply(Yf)
    br = lambda A, B: backend.bracket(p, A, B)  # noqa: E731
    return K @ br(KX, Yf) + K @ br(Xf, KY) + br(Xf, Yf) - br(KX, KY)
