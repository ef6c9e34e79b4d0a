"""Pointwise multilinear algebra on a single inner-product space.

Vectors are 1-d arrays, endomorphisms act on column vectors, bilinear
forms are square matrices ``B`` with ``B(x, y) = x @ B @ y``.  The second
exterior power uses the lexicographic basis of pairs ``(i, j)``, ``i < j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

SYMMETRY_TOL = 1e-12
ROUNDTRIP_TOL = 1e-12
IDENTITY_TOL = 1e-10


class DimensionError(ValueError):
    pass


class SingularError(ValueError):
    pass


@dataclass(frozen=True)
class Metric:
    """Symmetric positive definite Gram matrix of an inner product."""

    entries: np.ndarray

    def __post_init__(self):
        g = np.array(self.entries, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise DimensionError(f"metric must be a non-empty square matrix, got shape {g.shape}")
        scale = max(1.0, np.abs(g).max())
        if np.abs(g - g.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("metric is not symmetric")
        if np.linalg.eigvalsh(g).min() <= 0:
            raise ValueError("metric is not positive definite")
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.entries)

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.entries @ np.asarray(y))

    def orthonormal_basis(self) -> np.ndarray:
        """Columns form a basis orthonormal for this metric."""
        L = np.linalg.cholesky(self.entries)
        return np.linalg.inv(L).T

    @classmethod
    def identity(cls, n: int) -> "Metric":
        return cls(np.eye(n))


def _as_metric(g) -> Metric:
    return g if isinstance(g, Metric) else Metric(np.asarray(g, dtype=float))


def _check_square(F, n: int, name: str = "endomorphism") -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if F.shape != (n, n):
        raise DimensionError(f"{name} has shape {F.shape}, expected {(n, n)}")
    return F


def _check_vector(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise DimensionError(f"vector has shape {v.shape}, expected {(n,)}")
    return v


def is_two_form(b, tol: float = SYMMETRY_TOL) -> bool:
    b = np.asarray(b)
    return b.ndim == 2 and b.shape[0] == b.shape[1] and np.abs(b + b.T).max() <= tol * max(1.0, np.abs(b).max())


def check_invertible(F, tol: float = 1e-12) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if abs(np.linalg.det(F)) <= tol:
        raise SingularError("endomorphism is singular")
    return F


# -- musical isomorphisms ---------------------------------------------------


def flat(g, v) -> np.ndarray:
    """The covector ``g(v, .)``."""
    g = _as_metric(g)
    return g.entries @ _check_vector(v, g.dim)


def sharp(g, a) -> np.ndarray:
    """Inverse of :func:`flat`."""
    g = _as_metric(g)
    return np.linalg.solve(g.entries, _check_vector(a, g.dim))


def twisted_metric(g, psi) -> Metric:
    """``h = g(psi^-1 ., psi^-1 .)``."""
    g = _as_metric(g)
    inv = np.linalg.inv(check_invertible(_check_square(psi, g.dim)))
    h = inv.T @ g.entries @ inv
    return Metric(0.5 * (h + h.T))


def sharp_twisted(g, psi, a) -> np.ndarray:
    """Sharp of the twisted metric, computed as ``psi(sharp_g(psi^* a))``."""
    g = _as_metric(g)
    psi = check_invertible(_check_square(psi, g.dim))
    a = _check_vector(a, g.dim)
    # pullback of a covector: (psi^* a)(x) = a(psi x)
    return psi @ sharp(g, psi.T @ a)


def adjoint(g, F) -> np.ndarray:
    """The ``g``-adjoint: ``g(F x, y) = g(x, adjoint(F) y)``."""
    g = _as_metric(g)
    F = _check_square(F, g.dim)
    return np.linalg.solve(g.entries, F.T @ g.entries)


# -- second exterior power ----------------------------------------------------


@lru_cache(maxsize=None)
def pair_index(n: int) -> tuple[tuple[int, int], ...]:
    """Ordered pairs ``(i, j)``, ``i < j``, in lexicographic order."""
    if n < 2:
        raise DimensionError("the second exterior power needs dim >= 2")
    return tuple(combinations(range(n), 2))


def _pair_arrays(n: int):
    pairs = np.array(pair_index(n))
    return pairs[:, 0], pairs[:, 1]


def compound2(F) -> np.ndarray:
    """Matrix of ``F_2(u ^ v) = Fu ^ Fv`` in the basis ``e_i ^ e_j``."""
    F = np.asarray(F)
    n = F.shape[0]
    i, j = _pair_arrays(n)
    # column (k,l), row (i,j): F_ik F_jl - F_il F_jk
    return F[np.ix_(i, i)] * F[np.ix_(j, j)] - F[np.ix_(i, j)] * F[np.ix_(j, i)]


def wedge_metric(g) -> np.ndarray:
    """Gram matrix induced by ``g`` on bivectors ``e_i ^ e_j``."""
    return compound2(_as_metric(g).entries)


def wedge_form_metric(g) -> np.ndarray:
    """Gram matrix induced by ``g^-1`` on 2-forms ``theta_i ^ theta_j``."""
    return compound2(_as_metric(g).inverse)


def form_to_vector(b) -> np.ndarray:
    """Coefficients of a 2-form on ``theta_i ^ theta_j`` (``i < j``)."""
    b = np.asarray(b)
    i, j = _pair_arrays(b.shape[0])
    return b[i, j]


def vector_to_form(c, n: int) -> np.ndarray:
    c = np.asarray(c)
    i, j = _pair_arrays(n)
    b = np.zeros((n, n), dtype=c.dtype)
    b[i, j] = c
    b[j, i] = -c
    return b


def wedge_pullback(psi, b) -> np.ndarray:
    """``(psi^* b)(x, y) = b(psi x, psi y)``."""
    b = np.asarray(b, dtype=float)
    psi = _check_square(psi, b.shape[0])
    return psi.T @ b @ psi


def wedge_operator(psi) -> np.ndarray:
    """Matrix of the pullback ``psi^*`` on 2-form coefficient vectors."""
    return compound2(np.asarray(psi, dtype=float)).T


def bivector_operator_adjoint(gram: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Adjoint of a linear map ``M`` with respect to the Gram matrix ``gram``."""
    return np.linalg.solve(gram, M.T @ gram)


# -- self/skew classification -------------------------------------------------


class Adjointness(enum.Enum):
    SELF_ADJOINT = "self-adjoint"
    SKEW_ADJOINT = "skew-adjoint"
    NOT_APPLICABLE = "not-applicable"


def classify_adjointness(g, F, tol: float = IDENTITY_TOL) -> Adjointness:
    """Classify an isomorphism whose pulled-back action on 2-forms is self-adjoint.

    If ``(F^dagger)_2`` is self-adjoint for the induced metric on bivectors
    then ``F`` must be self- or skew-adjoint (requires ``dim >= 3``), and the
    matching class is returned.  Otherwise ``NOT_APPLICABLE``.
    """
    g = _as_metric(g)
    n = g.dim
    if n < 3:
        raise DimensionError("classification requires dim >= 3")
    F = check_invertible(_check_square(F, n))
    Fd = adjoint(g, F)
    G2 = wedge_metric(g)
    M = compound2(Fd)
    # self-adjoint on bivectors <=> G2 M symmetric
    S = G2 @ M
    scale = max(1.0, np.abs(S).max())
    if np.abs(S - S.T).max() > tol * scale:
        return Adjointness.NOT_APPLICABLE
    # compare in a g-orthonormal frame so Frobenius norms are intrinsic
    E = g.orthonormal_basis()
    Einv = np.linalg.inv(E)
    sym = np.linalg.norm(Einv @ (F - Fd) @ E)
    skew = np.linalg.norm(Einv @ (F + Fd) @ E)
    norm = np.linalg.norm(Einv @ F @ E)
    if min(sym, skew) > np.sqrt(tol) * norm:
        raise ArithmeticError(
            f"F_2 is self-adjoint yet F is neither self- nor skew-adjoint (residuals {sym:.3e}, {skew:.3e})"
        )
    if sym <= skew:
        if skew <= np.sqrt(tol) * norm:
            raise SingularError("F is both self- and skew-adjoint, hence zero")
        return Adjointness.SELF_ADJOINT
    return Adjointness.SKEW_ADJOINT


def adjointness_residual(g, F, kind: Adjointness) -> float:
    """``||F - F^dagger||`` or ``||F + F^dagger||`` in a ``g``-orthonormal frame."""
    g = _as_metric(g)
    E = g.orthonormal_basis()
    Fo = np.linalg.inv(E) @ np.asarray(F, dtype=float) @ E
    if kind is Adjointness.SELF_ADJOINT:
        return float(np.linalg.norm(Fo - Fo.T))
    if kind is Adjointness.SKEW_ADJOINT:
        return float(np.linalg.norm(Fo + Fo.T))
    raise ValueError("no residual for NOT_APPLICABLE")
