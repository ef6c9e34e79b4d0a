"""Calculus on round spheres and the Codazzi family ``A_{f,c}``.

Points are unit vectors of ``R^(n+1)``; tangent vectors are ambient vectors
orthogonal to the base point.  Endomorphism fields are extended to the
whole ambient space by fixing the normal line, which keeps inverses and
derivatives plain matrix algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import subspace_angles
from scipy.stats import norm, qmc

from .fields import Backend, EndoField, FlatBackend, SphereBackend, VectorField, covariant_second, nijenhuis_at
from .multilinear import pair_index
from .scalarfield import Const, Coord, ScalarField, cos, parse, sin

UNIT_TOL = 1e-12
TANGENT_TOL = 1e-10


class DegenerateError(ValueError):
    """``A_{f,c}`` fails to be nondegenerate; ``witness`` is the offending point."""

    def __init__(self, message: str, witness=None, eigenvalue: float | None = None):
        super().__init__(message)
        self.witness = None if witness is None else np.asarray(witness)
        self.eigenvalue = eigenvalue


# -- points and tangent vectors --------------------------------------------------------


@dataclass(frozen=True)
class SpherePoint:
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if abs(np.linalg.norm(p) - 1.0) > UNIT_TOL:
            raise ValueError(f"point is not on the unit sphere (|p| = {np.linalg.norm(p)!r})")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class TangentVector:
    base: SpherePoint
    v: np.ndarray

    def __post_init__(self):
        v = np.array(self.v, dtype=float)
        if abs(v @ self.base.p) > TANGENT_TOL * max(1.0, np.linalg.norm(v)):
            raise ValueError("vector is not tangent at the base point")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)


def project(p, w) -> np.ndarray:
    """Orthogonal projection ``w - (w.p) p`` onto ``T_p``."""
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    return w - (w @ p) * p


def levi_civita(p, X, Yfield: VectorField) -> np.ndarray:
    """``nabla_X Y = P_p (D_X Y)`` for a tangent field with exact derivative."""
    p = np.asarray(p, dtype=float)
    if abs(Yfield.value(p) @ p) > TANGENT_TOL:
        raise ValueError("field is not tangent at the base point")
    return project(p, Yfield.deriv(p, np.asarray(X, dtype=float)))


def riemann_from_connection(p, X, Y, Z, W) -> float:
    """``Rm(X,Y,Z,W) = <R(X,Y)Z, W>`` by differentiating the projection connection twice."""
    S = SphereBackend(len(p) - 1)
    Zf = S.extend(p, Z)
    # canonical extensions of X and Y commute at p
    RZ = covariant_second(S, p, X, Y, Zf) - covariant_second(S, p, Y, X, Zf)
    return float(RZ @ W)


def round_riemann(X, Y, Z, W) -> float:
    return float((Y @ Z) * (X @ W) - (X @ Z) * (Y @ W))


# -- Hessians -----------------------------------------------------------------------------


def hessian_g(f: ScalarField, p, X, Y) -> float:
    """Intrinsic Hessian ``Hess f(X,Y) = D^2 f(X,Y) - (p . grad f) <X,Y>``."""
    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    for v in (X, Y):
        if abs(v @ p) > TANGENT_TOL * max(1.0, np.linalg.norm(v)):
            raise ValueError("Hessian arguments must be tangent at p")
    grad, H = f.gradient(p), f.hessian(p)
    return float(X @ H @ Y - (p @ grad) * (X @ Y))


def geodesic_second_derivative(f: ScalarField, p, v) -> float:
    """``d^2/dt^2 f(cos t p + sin t v)`` at ``t = 0``, differentiated symbolically in ``t``."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    n = len(p)
    t = Coord(n + 1)
    curve = {i + 1: Const(float(p[i])) * cos(t) + Const(float(v[i])) * sin(t) for i in range(n)}
    g = f.substitute(curve).diff(n + 1).diff(n + 1)
    return float(g.evaluate(np.append(np.zeros(n), 0.0)))


# -- the Codazzi family ---------------------------------------------------------------


def _as_field(f) -> ScalarField:
    return parse(f) if isinstance(f, str) else f


@dataclass(frozen=True)
class CodazziTensor:
    """``A_{f,c} = Hess f + (kappa f + c) g`` on a sphere (``kappa = 1``) or flat space (``kappa = 0``).

    ``matrix(q)`` is the symmetric matrix ``M`` with ``A(X,Y) = X.M.Y`` on
    tangent vectors and ``deriv(q, w)`` its ambient derivative.
    """

    f: ScalarField
    c: float
    backend: Backend

    def _jet(self, q, order):
        return [self.f.derivatives(q, k) for k in range(order + 1)]

    def matrix(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        f0, grad, H = self._jet(q, 2)
        n = len(q)
        if self.backend.kappa:
            return H + (f0 + self.c - q @ grad) * np.eye(n)
        return H + self.c * np.eye(n)

    def deriv(self, q, w) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        w = np.asarray(w, dtype=float)
        _, _, H, T = self._jet(q, 3)
        DH = np.einsum("ijk,k->ij", T, w)
        if self.backend.kappa:
            # D_w (f + c - q.grad f) = -q.H.w
            return DH - (q @ H @ w) * np.eye(len(q))
        return DH

    def __call__(self, q, X, Y) -> float:
        return float(X @ self.matrix(q) @ Y)

    def covariant_derivative(self, p, X, Y, Z) -> float:
        """``(nabla_X A)(Y, Z)`` using the backend's extensions of ``Y`` and ``Z``."""
        B = self.backend
        Yf, Zf = B.extend(p, Y), B.extend(p, Z)
        M = self.matrix(p)
        d = Y @ self.deriv(p, X) @ Z + Yf.deriv(p, X) @ M @ Z + Y @ M @ Zf.deriv(p, X)
        return float(d - B.nabla(p, X, Yf) @ M @ Z - Y @ M @ B.nabla(p, X, Zf))

    def codazzi_residual(self, p, X, Y, Z) -> float:
        return self.covariant_derivative(p, X, Y, Z) - self.covariant_derivative(p, Y, X, Z)


def codazzi_tensor(f, c: float, backend: Backend | None = None) -> CodazziTensor:
    f = _as_field(f)
    backend = backend or SphereBackend(6)
    if not isinstance(backend, (SphereBackend, FlatBackend)):
        raise TypeError("Codazzi tensors are built on sphere or flat backends")
    if f.max_coordinate() > backend.ambient_dim:
        raise ValueError(f"{f} uses coordinates beyond x{backend.ambient_dim}")
    return CodazziTensor(f, float(c), backend)


def tangent_spectrum(A: CodazziTensor, points) -> np.ndarray:
    """Eigenvalues of ``A`` on ``T_q`` for a batch of points, ascending, shape ``(m, n)``."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    f0 = A.f.derivatives(points, 0) * np.ones(len(points))
    grad = A.f.derivatives(points, 1)
    H = A.f.derivatives(points, 2)
    N = points.shape[1]
    eye = np.eye(N)
    if A.backend.kappa:
        shift = f0 + A.c - np.einsum("mi,mi->m", points, grad)
        M = H + shift[:, None, None] * eye
        P = eye - np.einsum("mi,mj->mij", points, points)
        vals, vecs = np.linalg.eigh(P @ M @ P)
        # drop the eigenvalue belonging to the normal direction
        normal = np.argmax(np.abs(np.einsum("mij,mi->mj", vecs, points)), axis=1)
        keep = np.ones_like(vals, dtype=bool)
        keep[np.arange(len(points)), normal] = False
        return vals[keep].reshape(len(points), N - 1)
    return np.linalg.eigvalsh(H + A.c * eye)


def sobol_points(backend: Backend, count: int, seed: int = 0) -> np.ndarray:
    """Quasi-random points: Sobol normals pushed to the sphere, or uniform in the flat box."""
    d = backend.ambient_dim
    sampler = qmc.Sobol(d, scramble=True, seed=seed)
    u = sampler.random_base2(max(0, math.ceil(math.log2(count))))[:count]
    if isinstance(backend, SphereBackend):
        z = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    return qmc.scale(u, -backend.box, backend.box)


def x1x2_spectrum_bound(c: float) -> tuple[float, float]:
    """Global eigenvalue range ``c -/+ 3/2`` of ``A_{x1 x2, c}`` on ``S^n``, ``n >= 3``."""
    return c - 1.5, c + 1.5


def x1x2_extreme_eigenvalues(p, c: float) -> tuple[float, float]:
    """Pointwise extremes ``-2 p1 p2 + c -/+ sqrt((1-p1^2)(1-p2^2))``."""
    p1, p2 = float(p[0]), float(p[1])
    r = math.sqrt(max(0.0, (1 - p1 * p1) * (1 - p2 * p2)))
    return -2 * p1 * p2 + c - r, -2 * p1 * p2 + c + r


def is_x1x2(f: ScalarField) -> bool:
    return str(f) == "x1*x2"


@dataclass(frozen=True)
class NondegeneracyReport:
    samples: int
    min_abs_eigenvalue: float
    witness: np.ndarray
    signature_changes: bool
    bound: tuple[float, float] | None = None

    @property
    def nondegenerate(self) -> bool:
        if self.bound is not None and self.bound[0] <= 0.0 <= self.bound[1]:
            return False
        return not self.signature_changes and self.min_abs_eigenvalue > 1e-9


def screen_nondegeneracy(A: CodazziTensor, samples: int = 10_000, seed: int = 0) -> NondegeneracyReport:
    pts = sobol_points(A.backend, samples, seed)
    vals = tangent_spectrum(A, pts)
    negatives = (vals < 0).sum(axis=1)
    absmin = np.abs(vals).min(axis=1)
    k = int(np.argmin(absmin))
    bound = None
    if is_x1x2(A.f) and isinstance(A.backend, SphereBackend) and A.backend.dim >= 3:
        bound = x1x2_spectrum_bound(A.c)
    return NondegeneracyReport(
        samples=samples,
        min_abs_eigenvalue=float(absmin[k]),
        witness=pts[k],
        signature_changes=bool(negatives.min() != negatives.max()),
        bound=bound,
    )


# -- g-Codazzi maps --------------------------------------------------------------------


@dataclass(frozen=True)
class CodazziMap:
    """The ``g``-Codazzi map ``psi`` with ``A(X, Y) = g(psi^-1 X, Y)``."""

    tensor: CodazziTensor
    psi_inv: EndoField
    psi: EndoField
    screen: NondegeneracyReport | None = field(default=None, compare=False)

    @property
    def backend(self) -> Backend:
        return self.tensor.backend

    @property
    def f(self) -> ScalarField:
        return self.tensor.f

    @property
    def c(self) -> float:
        return self.tensor.c


def _psi_inverse_field(A: CodazziTensor) -> EndoField:
    if isinstance(A.backend, FlatBackend):
        return EndoField(A.matrix, A.deriv)

    def value(q):
        P = np.eye(len(q)) - np.outer(q, q)
        return P @ A.matrix(q) @ P + np.outer(q, q)

    def deriv(q, w):
        P = np.eye(len(q)) - np.outer(q, q)
        dP = -(np.outer(w, q) + np.outer(q, w))
        M = A.matrix(q)
        return dP @ M @ P + P @ A.deriv(q, w) @ P + P @ M @ dP - dP

    return EndoField(value, deriv)


def codazzi_map(
    f, c: float, backend: Backend | None = None, *, samples: int = 10_000, seed: int = 0, screen: bool = True
) -> CodazziMap:
    """Build ``psi`` from ``A_{f,c}``, rejecting degenerate tensors with a witness point."""
    A = codazzi_tensor(f, c, backend)
    report = None
    if screen:
        report = screen_nondegeneracy(A, samples, seed)
        if not report.nondegenerate:
            raise DegenerateError(
                f"A_(f,c) is degenerate for f = {A.f}, c = {A.c:g} "
                f"(min |eigenvalue| {report.min_abs_eigenvalue:.3e} at the witness point)",
                report.witness,
                report.min_abs_eigenvalue,
            )
    inv = _psi_inverse_field(A)
    return CodazziMap(A, inv, inv.inverse(), report)


def codazzi_map_residual(m: CodazziMap, p, X, Y) -> float:
    """``|(nabla_X psi^-1) Y - (nabla_Y psi^-1) X|``."""
    B = m.backend
    d = B.nabla_endo(p, X, m.psi_inv) @ Y - B.nabla_endo(p, Y, m.psi_inv) @ X
    return float(np.linalg.norm(d))


def symmetry_residual(m: CodazziMap, p) -> float:
    """``|psi - psi^T|`` on ``T_p`` in an orthonormal tangent frame."""
    E = m.backend.tangent_basis(p)
    S = E.T @ m.psi.value(p) @ E
    return float(np.abs(S - S.T).max())


# -- the 7-dimensional cross product and S^6 -----------------------------------------------

# e_a x e_b = e_c for each (a, b, c) and its cyclic shifts; 1-based
CROSS_TRIPLES = ((1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5))


def _cross_tensor() -> np.ndarray:
    C = np.zeros((7, 7, 7))
    for a, b, c in CROSS_TRIPLES:
        for i, j, k in ((a, b, c), (b, c, a), (c, a, b)):
            C[i - 1, j - 1, k - 1] = 1.0
            C[j - 1, i - 1, k - 1] = -1.0
    return C


CROSS = _cross_tensor()
CROSS.setflags(write=False)


def cross7(u, v) -> np.ndarray:
    return np.einsum("ijk,i,j->k", CROSS, u, v)


def cross_matrix(u) -> np.ndarray:
    """Matrix of ``v -> u x v``."""
    return np.einsum("ijk,i->kj", CROSS, u)


def standard_J6() -> EndoField:
    """``J_q v = q x v`` on ``S^6``, with ``D_w J = w x .``."""
    return EndoField(cross_matrix, lambda q, w: cross_matrix(w))


def nabla_J6(p, X) -> np.ndarray:
    """Matrix of ``nabla_X J`` on ``T_p S^6``: ``Y -> P(X x Y)``."""
    P = np.eye(7) - np.outer(p, p)
    return P @ cross_matrix(X) @ P


def nijenhuis_J6(p, X, Y) -> np.ndarray:
    return nijenhuis_at(SphereBackend(6), standard_J6(), np.asarray(p, float), X, Y)


def nijenhuis_kernel_check(p, X, angle_tol: float = 1e-8) -> bool:
    """Whether ``Y -> N_J(X, Y)`` on ``T_p S^6`` has rank 4 with kernel ``span{X, JX}``."""
    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    if np.linalg.norm(X) < 1e-10:
        raise ValueError("X must be nonzero")
    S = SphereBackend(6)
    E = S.tangent_basis(p)
    J = standard_J6()
    cols = [E.T @ nijenhuis_at(S, J, p, X, E[:, k]) for k in range(6)]
    N = np.column_stack(cols)
    _, sv, Vt = np.linalg.svd(N)
    rank = int((sv > 1e-8 * sv[0]).sum())
    if rank != 4:
        return False
    kernel = Vt[4:].T
    expected = E.T @ np.column_stack([X, J.value(p) @ X])
    return bool(subspace_angles(kernel, expected).max() < angle_tol)


def g2_membership(F, tol: float = 1e-10) -> bool:
    """Whether ``F(u x v) = Fu x Fv`` on all basis pairs; members are checked to lie in ``SO(7)``."""
    F = np.asarray(F, dtype=float)
    if F.shape != (7, 7):
        raise ValueError("G2 membership is defined for 7x7 matrices")
    if abs(np.linalg.det(F)) <= 1e-12:
        raise ValueError("F is singular")
    lhs = np.einsum("ak,ijk->ija", F, CROSS)
    rhs = np.einsum("abk,ai,bj->ijk", CROSS, F, F)
    if np.abs(lhs - rhs).max() > tol * max(1.0, np.abs(F).max() ** 2):
        return False
    if np.abs(F.T @ F - np.eye(7)).max() > 1e-8 or np.linalg.det(F) < 0:
        raise ArithmeticError("F preserves the cross product but is not in SO(7)")
    return True


# -- curvature operators -------------------------------------------------------------------


def riemann_pairs(Rm) -> np.ndarray:
    """``Rm[(ij), (kl)] = Rm(e_i, e_j, e_k, e_l)`` on ordered pairs."""
    Rm = np.asarray(Rm)
    idx = np.array(pair_index(Rm.shape[0]))
    i, j = idx[:, 0], idx[:, 1]
    return Rm[i[:, None], j[:, None], i[None, :], j[None, :]]


def curvature_operator(Rm, g) -> np.ndarray:
    """Matrix of the curvature operator on 2-form coefficients.

    Defined by ``g^-1(beta, R gamma) = -Rm(beta^sharp, gamma^sharp)``.
    """
    from .multilinear import wedge_form_metric

    return -riemann_pairs(Rm) @ wedge_form_metric(g)


def round_riemann_tensor(n: int) -> np.ndarray:
    I = np.eye(n)
    return np.einsum("jk,il->ijkl", I, I) - np.einsum("ik,jl->ijkl", I, I)


def round_curvature_operator(n: int) -> np.ndarray:
    """The curvature operator of the unit ``S^n``: the identity on ``Lambda^2``."""
    return np.eye(n * (n - 1) // 2)
