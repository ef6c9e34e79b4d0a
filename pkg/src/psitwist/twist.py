"""Twisting almost Hermitian structures by tangent bundle automorphisms.

For an automorphism ``psi`` the twisted structure is

    g^psi = g(psi^-1 ., psi^-1 .),   J^psi = psi J psi^-1,   omega^psi = omega(psi^-1 ., psi^-1 .).

Everything here is backend generic: the same code runs on Lie frames
(constant matrices), round spheres and flat space.  Functions take a point
``p`` and ambient tangent vectors and return numbers, vectors or matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .fields import Backend, EndoField, FlatBackend, LieBackend, SphereBackend, VectorField, nijenhuis_at
from .lie import InvariantStructure, koszul_connection, nearly_kahler_check
from .multilinear import Metric, check_invertible, wedge_form_metric, wedge_operator
from .sphere import CodazziMap, curvature_operator, standard_J6

CODAZZI_TOL = 1e-8
INTEGRABLE_TOL = 1e-9


class PreconditionError(ValueError):
    """A hypothesis of an identity fails; ``witness`` locates the failure."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# -- base structures ---------------------------------------------------------------------


@dataclass(frozen=True)
class HermitianStructure:
    """An almost Hermitian structure ``(g, J, omega)`` on a backend; ``g`` is the backend metric."""

    backend: Backend
    J: EndoField
    nearly_kahler: bool = False
    kahler: bool = False
    label: str = ""

    def metric(self, p) -> np.ndarray:
        return self.backend.metric(p)

    def J_at(self, p) -> np.ndarray:
        return self.J.value(p)

    def omega(self, p) -> np.ndarray:
        """``omega(X, Y) = g(JX, Y)``."""
        return self.J.value(p).T @ self.metric(p)

    def omega_field(self) -> EndoField:
        G = EndoField.constant(self.metric(None))
        return self.J.T @ G

    def nabla_J(self, p, X) -> np.ndarray:
        return self.backend.nabla_endo(p, X, self.J)

    def nabla_omega(self, p, X, Y, Z):
        """``(nabla_X omega)(Y, Z) = g((nabla_X J) Y, Z)``."""
        return (self.nabla_J(p, X) @ Y) @ self.metric(p) @ Z

    def nijenhuis(self, p, X, Y) -> np.ndarray:
        return nijenhuis_at(self.backend, self.J, p, X, Y)

    def validation_residual(self, p) -> float:
        """``max(|J^2 + 1|, |g(J., J.) - g|)`` on ``T_p``."""
        E = self.backend.tangent_basis(p)
        G = self.metric(p)
        J = self.J.value(p)
        JE = J @ E
        a = np.abs(E.T @ G @ (J @ JE) + E.T @ G @ E).max()
        b = np.abs(JE.T @ G @ JE - E.T @ G @ E).max()
        return float(max(a, b))


def s6_structure() -> HermitianStructure:
    """``S^6`` with ``J_p v = p x v``."""
    return HermitianStructure(SphereBackend(6), standard_J6(), nearly_kahler=True, label="S6")


def standard_complex_structure(n: int) -> np.ndarray:
    """``J d_(2k-1) = d_(2k)``, ``J d_(2k) = -d_(2k-1)``."""
    if n % 2:
        raise ValueError("complex structures need even dimension")
    J = np.zeros((n, n))
    for k in range(0, n, 2):
        J[k + 1, k] = 1.0
        J[k, k + 1] = -1.0
    return J


def flat_kahler(n: int = 4) -> HermitianStructure:
    return HermitianStructure(
        FlatBackend(n), EndoField.constant(standard_complex_structure(n)), nearly_kahler=True, kahler=True, label=f"R{n}"
    )


def lie_structure(s: InvariantStructure, label: str = "lie") -> HermitianStructure:
    return HermitianStructure(LieBackend.of(s), EndoField.constant(s.J), nearly_kahler=nearly_kahler_check(s), label=label)


# -- twisting ------------------------------------------------------------------------------


def _identity_field(backend: Backend) -> EndoField:
    return EndoField.constant(np.eye(backend.ambient_dim))


@dataclass(frozen=True)
class TwistedStructure:
    """``parent`` twisted by ``psi``; ``codazzi`` records a construction-time guarantee."""

    parent: "HermitianStructure | TwistedStructure"
    psi: EndoField
    psi_inv: EndoField
    codazzi: bool = False

    @property
    def base(self) -> HermitianStructure:
        s = self.parent
        while isinstance(s, TwistedStructure):
            s = s.parent
        return s

    @property
    def backend(self) -> Backend:
        return self.base.backend

    @property
    def J(self) -> EndoField:
        return self.psi @ self.parent.J @ self.psi_inv

    def J_at(self, p) -> np.ndarray:
        return self.psi.value(p) @ self.parent.J_at(p) @ self.psi_inv.value(p)

    def metric(self, p) -> np.ndarray:
        F = self.psi_inv.value(p)
        return F.T @ self.parent.metric(p) @ F

    def omega(self, p) -> np.ndarray:
        F = self.psi_inv.value(p)
        return F.T @ self.parent.omega(p) @ F

    def omega_field(self) -> EndoField:
        return self.psi_inv.T @ self.parent.omega_field() @ self.psi_inv

    def total(self) -> tuple[EndoField, EndoField]:
        """Composite ``(psi, psi^-1)`` relative to the base structure."""
        if isinstance(self.parent, TwistedStructure):
            outer, outer_inv = self.parent.total()
            return self.psi @ outer, outer_inv @ self.psi_inv
        return self.psi, self.psi_inv

    def flatten(self) -> "TwistedStructure":
        psi, inv = self.total()
        return TwistedStructure(self.base, psi, inv, self.codazzi and not isinstance(self.parent, TwistedStructure))

    def invariant_residual(self, p) -> float:
        """Largest defect of ``(J^psi)^2 = -1`` and ``omega^psi = g^psi(J^psi ., .)`` on ``T_p``."""
        E = self.backend.tangent_basis(p)
        I = self.J_at(p)
        h = self.metric(p)
        sq = E.T @ (I @ I @ E + E)
        om = E.T @ (self.omega(p) - I.T @ h) @ E
        return float(max(np.abs(sq).max(), np.abs(om).max()))


def twist(structure, psi, psi_inv=None, *, codazzi: bool | None = None) -> TwistedStructure:
    """The ``psi``-twist of ``structure``.

    ``psi`` may be a constant matrix, an :class:`EndoField` or a
    :class:`CodazziMap` (which carries its own inverse and Codazzi guarantee).
    """
    if isinstance(psi, CodazziMap):
        return TwistedStructure(structure, psi.psi, psi.psi_inv, True if codazzi is None else codazzi)
    if isinstance(psi, EndoField):
        inv = psi_inv if psi_inv is not None else psi.inverse()
    else:
        M = check_invertible(np.asarray(psi, dtype=float))
        inv = EndoField.constant(np.linalg.inv(M) if psi_inv is None else psi_inv)
        psi = EndoField.constant(M)
    return TwistedStructure(structure, psi, inv, bool(codazzi))


def _single(t: TwistedStructure) -> TwistedStructure:
    return t.flatten() if isinstance(t.parent, TwistedStructure) else t


def codazzi_defect(t: TwistedStructure, p) -> tuple[float, tuple[int, int]]:
    """``max |(nabla_i psi^-1) e_j - (nabla_j psi^-1) e_i|`` over a tangent frame at ``p``."""
    B = t.backend
    E = B.tangent_basis(p)
    D = [B.nabla_endo(p, E[:, i], t.psi_inv) for i in range(E.shape[1])]
    worst, where = 0.0, (0, 0)
    for i, j in product(range(E.shape[1]), repeat=2):
        r = float(np.linalg.norm(D[i] @ E[:, j] - D[j] @ E[:, i]))
        if r > worst:
            worst, where = r, (i, j)
    return worst, where


def require_codazzi(t: TwistedStructure, p, tol: float = CODAZZI_TOL) -> None:
    if t.codazzi:
        return
    worst, (i, j) = codazzi_defect(t, p)
    scale = max(1.0, float(np.abs(t.psi_inv.value(p)).max()))
    if worst > tol * scale:
        raise PreconditionError(
            f"psi is not g-Codazzi at the sampled point (defect {worst:.3e} on frame pair {i + 1},{j + 1})",
            witness={"point": np.asarray(p).tolist(), "pair": [i + 1, j + 1], "defect": worst},
        )


# -- Levi-Civita connection of the twisted metric ---------------------------------------------


def lc_twisted_general(t: TwistedStructure, p, X, Y, Z) -> float:
    """``2h(nabla^h_X Y, Z)`` from ``nabla^g`` and ``nabla^g psi^-1`` (no Codazzi assumption).

    ``Y`` is extended with the backend's canonical extension.
    """
    t = _single(t)
    B = t.backend
    h = t.metric(p)
    psi = t.psi.value(p)
    D = {k: psi @ B.nabla_endo(p, V, t.psi_inv) for k, V in (("X", X), ("Y", Y), ("Z", Z))}
    hh = lambda a, b: float(a @ h @ b)  # noqa: E731
    nabla_g = B.nabla(p, X, B.extend(p, Y))
    return (
        2 * hh(nabla_g, Z)
        + hh(D["X"] @ Y, Z)
        + hh(D["Y"] @ X, Z)
        + hh(D["X"] @ Z, Y)
        - hh(D["Z"] @ X, Y)
        + hh(D["Y"] @ Z, X)
        - hh(D["Z"] @ Y, X)
    )


def koszul_twisted(t: TwistedStructure, X, Y, Z) -> float:
    """``2h(nabla^h_X Y, Z)`` from the Koszul formula of ``h`` alone (Lie frames, constant ``psi``)."""
    t = _single(t)
    B = t.backend
    if not isinstance(B, LieBackend):
        raise TypeError("the Koszul oracle needs a Lie frame backend")
    h = Metric(0.5 * (t.metric(None) + t.metric(None).T))
    conn = koszul_connection(B.frame, h)
    return float(2 * conn.nabla(X, Y) @ h.entries @ Z)


def lc_twisted_codazzi(t: TwistedStructure, p, X, Y) -> np.ndarray:
    """``nabla^h_X Y = psi nabla^g_X (psi^-1 Y)`` for a ``g``-Codazzi ``psi``.

    ``Y`` is a vector (extended canonically) or a :class:`VectorField`.
    """
    t = _single(t)
    require_codazzi(t, p)
    B = t.backend
    Yf = Y if isinstance(Y, VectorField) else B.extend(p, Y)
    return t.psi.value(p) @ B.nabla(p, X, t.psi_inv.apply(Yf))


def twisted_torsion_residual(t: TwistedStructure, p, X, Y) -> float:
    B = t.backend
    Xf, Yf = B.extend(p, X), B.extend(p, Y)
    T = lc_twisted_codazzi(t, p, X, Yf) - lc_twisted_codazzi(t, p, Y, Xf) - B.bracket(p, Xf, Yf)
    return float(np.linalg.norm(T))


def _directional_form(B: Backend, Hf: EndoField, p, X, Yf: VectorField, Zf: VectorField) -> float:
    """``X(b(Y, Z))`` for the bilinear field ``b(Y, Z) = Y . H . Z``."""
    Y, Z = Yf.value(p), Zf.value(p)
    H = Hf.value(p)
    return float(Y @ Hf.deriv(p, X) @ Z + Yf.deriv(p, X) @ H @ Z + Y @ H @ Zf.deriv(p, X))


def _metric_field(t: TwistedStructure) -> EndoField:
    G = EndoField.constant(t.backend.metric(None))
    return t.psi_inv.T @ G @ t.psi_inv


def twisted_metric_compatibility_residual(t: TwistedStructure, p, X, Y, Z) -> float:
    """``X h(Y, Z) - h(nabla^h_X Y, Z) - h(Y, nabla^h_X Z)``."""
    t = _single(t)
    B = t.backend
    Yf, Zf = B.extend(p, Y), B.extend(p, Z)
    h = t.metric(p)
    lhs = _directional_form(B, _metric_field(t), p, X, Yf, Zf)
    return lhs - float(lc_twisted_codazzi(t, p, X, Yf) @ h @ Z) - float(Y @ h @ lc_twisted_codazzi(t, p, X, Zf))


# -- curvature ---------------------------------------------------------------------------------


def _frame_curvature(B: Backend, p, E) -> np.ndarray:
    """``R[l, i, j, k]`` of ``g`` in the frame ``E``: ``R(E_i, E_j) E_k = R[l, i, j, k] E_l``."""
    n = E.shape[1]
    Einv = np.linalg.pinv(E)
    R = np.zeros((n, n, n, n))
    for i, j in product(range(n), repeat=2):
        R[:, i, j, :] = Einv @ B.curvature(p, E[:, i], E[:, j]) @ E
    return R


def frame_psi(t: TwistedStructure, p, E=None) -> np.ndarray:
    """Matrix of ``psi`` on ``T_p`` in the orthonormal frame ``E``."""
    E = t.backend.tangent_basis(p) if E is None else E
    return np.linalg.pinv(E) @ t.psi.value(p) @ E


def curvature_endo_twisted(t: TwistedStructure, p, E=None) -> np.ndarray:
    """``R^h(E_i, E_j) = psi R^g(E_i, E_j) psi^-1`` in frame coordinates, shape ``(n, n, n, n)``."""
    t = _single(t)
    require_codazzi(t, p)
    B = t.backend
    E = B.tangent_basis(p) if E is None else E
    Psi = frame_psi(t, p, E)
    return np.einsum("ab,bijc,cd->aijd", Psi, _frame_curvature(B, p, E), np.linalg.inv(Psi))


def curvature_endo_twisted_residual(t: TwistedStructure, p, oracle) -> float:
    """``max |R^h - psi R^g psi^-1|`` with ``R^h`` from the chart oracle."""
    E = t.backend.tangent_basis(p)
    _, _, R = oracle.at(p, E)
    return float(np.abs(R - curvature_endo_twisted(t, p, E)).max())


def curvature_op_twisted(t: TwistedStructure, p, gamma=None) -> np.ndarray:
    """``R^h = R^g o psi^*`` on 2-form coefficients in the orthonormal tangent frame.

    Returns the operator matrix, or its value on ``gamma`` when given.
    """
    t = _single(t)
    require_codazzi(t, p)
    B = t.backend
    E = B.tangent_basis(p)
    R = _frame_curvature(B, p, E)
    Rm = np.einsum("lijk->ijkl", R)
    op = curvature_operator(Rm, np.eye(E.shape[1])) @ wedge_operator(frame_psi(t, p, E))
    return op if gamma is None else op @ np.asarray(gamma)


def curvature_op_from_oracle(t: TwistedStructure, p, oracle) -> tuple[np.ndarray, np.ndarray]:
    """``(R^h, h)`` assembled from the oracle's ``Rm^h`` in the same frame."""
    E = t.backend.tangent_basis(p)
    h, _, R = oracle.at(p, E)
    Rm = np.einsum("mijk,ml->ijkl", R, h)
    return curvature_operator(Rm, h), h


def curvature_op_self_adjointness(op: np.ndarray, h: np.ndarray) -> float:
    """Asymmetry of ``op`` with respect to the form metric induced by ``h``."""
    S = wedge_form_metric(h) @ op
    return float(np.abs(S - S.T).max())


# -- exterior derivatives -------------------------------------------------------------------------


def exterior_d(B: Backend, form: EndoField, p, X, Y, Z) -> float:
    """``d beta(X, Y, Z)`` for ``beta(U, V) = U . form . V`` by the invariant formula with brackets."""
    Xf, Yf, Zf = B.extend(p, X), B.extend(p, Y), B.extend(p, Z)
    b = form.value(p)
    bf = lambda U, V: float(U @ b @ V)  # noqa: E731
    br = lambda U, V: B.bracket(p, U, V)  # noqa: E731
    return (
        _directional_form(B, form, p, X, Yf, Zf)
        - _directional_form(B, form, p, Y, Xf, Zf)
        + _directional_form(B, form, p, Z, Xf, Yf)
        - bf(br(Xf, Yf), Z)
        + bf(br(Xf, Zf), Y)
        - bf(br(Yf, Zf), X)
    )


def d_omega_twisted(t: TwistedStructure, p, X, Y, Z) -> float:
    """``d omega^psi(X,Y,Z)`` as the cyclic sum of ``(nabla_X omega)(psi^-1 Y, psi^-1 Z)``."""
    t = _single(t)
    require_codazzi(t, p)
    F = t.psi_inv.value(p)
    nw = t.base.nabla_omega
    return float(nw(p, X, F @ Y, F @ Z) + nw(p, Y, F @ Z, F @ X) + nw(p, Z, F @ X, F @ Y))


def d_omega_twisted_direct(t: TwistedStructure, p, X, Y, Z) -> float:
    """``d omega^psi`` by differentiating ``omega^psi`` itself."""
    return exterior_d(t.backend, t.omega_field(), p, X, Y, Z)


def nabla_twisted_J(t: TwistedStructure, p, X, Y) -> np.ndarray:
    """``(nabla^h_X J^psi) Y`` through the twisted connection."""
    t = _single(t)
    B = t.backend
    Yf = B.extend(p, Y)
    I = t.J
    return lc_twisted_codazzi(t, p, X, I.apply(Yf)) - I.value(p) @ lc_twisted_codazzi(t, p, X, Yf)


# -- the forms eta and eta_a ------------------------------------------------------------------------


@dataclass(frozen=True)
class EtaForms:
    """``eta(X, Y) = g(psi^-1 X, Y)`` and its antisymmetric part at a point."""

    eta: np.ndarray
    eta_a: np.ndarray


def eta_forms(t: TwistedStructure, p) -> EtaForms:
    t = _single(t)
    eta = t.psi_inv.value(p).T @ t.base.metric(p)
    return EtaForms(eta, 0.5 * (eta - eta.T))


def _eta_a_field(t: TwistedStructure) -> EndoField:
    G = EndoField.constant(t.backend.metric(None))
    eta = t.psi_inv.T @ G
    return 0.5 * (eta - eta.T)


def d_eta_a(t: TwistedStructure, p, X, Y, Z) -> float:
    t = _single(t)
    return exterior_d(t.backend, _eta_a_field(t), p, X, Y, Z)


def eta_coclosed_residual(t: TwistedStructure, p, X) -> float:
    """``Tr(nabla_X psi^-1) - sum_j g((nabla_(e_j) psi^-1) e_j, X)`` in an orthonormal frame."""
    t = _single(t)
    B = t.backend
    E = B.tangent_basis(p)
    G = B.metric(p)
    tr = float(np.trace(E.T @ G @ B.nabla_endo(p, X, t.psi_inv) @ E))
    s = sum(float((B.nabla_endo(p, E[:, j], t.psi_inv) @ E[:, j]) @ G @ X) for j in range(E.shape[1]))
    return tr - s


# -- rho, S and the Nijenhuis twist identity ----------------------------------------------------------


def rho(t: TwistedStructure, p, Xf: VectorField, Yf: VectorField) -> np.ndarray:
    """``psi^-1 [psi X, psi Y] - [X, Y]`` for vector fields ``X, Y``."""
    t = _single(t)
    B = t.backend
    psi = t.psi
    return t.psi_inv.value(p) @ B.bracket(p, psi.apply(Xf), psi.apply(Yf)) - B.bracket(p, Xf, Yf)


def rho_codazzi(t: TwistedStructure, p, Xf: VectorField, Yf: VectorField) -> np.ndarray:
    """``nabla_(psi X) Y - nabla_(psi Y) X - [X, Y]``, valid for ``g``-Codazzi ``psi``."""
    t = _single(t)
    require_codazzi(t, p)
    B = t.backend
    psi = t.psi.value(p)
    return B.nabla(p, psi @ Xf.value(p), Yf) - B.nabla(p, psi @ Yf.value(p), Xf) - B.bracket(p, Xf, Yf)


def S_tensor(t: TwistedStructure, p, U, V, extension=None, fast: bool = False) -> np.ndarray:
    """``S(U,V) = J rho(JU, V) + J rho(U, JV) + rho(U, V) - rho(JU, JV)``.

    ``extension(p, X)`` chooses how vectors become fields (default: the
    backend's canonical extension); ``fast`` uses the Codazzi form of ``rho``.
    """
    t = _single(t)
    B = t.backend
    ext = extension or B.extend
    J = t.base.J
    Uf, Vf = ext(p, U), ext(p, V)
    JU, JV = J.apply(Uf), J.apply(Vf)
    r = (lambda a, b: rho_codazzi(t, p, a, b)) if fast else (lambda a, b: rho(t, p, a, b))
    Jp = J.value(p)
    return Jp @ r(JU, Vf) + Jp @ r(Uf, JV) + r(Uf, Vf) - r(JU, JV)


def twisted_nijenhuis(t: TwistedStructure, p, X, Y) -> np.ndarray:
    return nijenhuis_at(t.backend, t.J, p, X, Y)


def nijenhuis_twist_identity_residual(t: TwistedStructure, p, X, Y) -> float:
    """``|psi^-1 N_(J^psi)(X,Y) - N_J(U,V) - S(U,V)|`` with ``U = psi^-1 X``, ``V = psi^-1 Y``."""
    t = _single(t)
    F = t.psi_inv.value(p)
    lhs = F @ twisted_nijenhuis(t, p, X, Y)
    U, V = F @ X, F @ Y
    rhs = t.base.nijenhuis(p, U, V) + S_tensor(t, p, U, V)
    return float(np.linalg.norm(lhs - rhs))


# -- integrability criteria --------------------------------------------------------------------------


def integrability_tensor_codazzi(t: TwistedStructure, p, X, Y) -> np.ndarray:
    """``J(nabla_(psi X) J)Y - J(nabla_(psi Y) J)X - (nabla_(psi JX) J)Y + (nabla_(psi JY) J)X``."""
    t = _single(t)
    require_codazzi(t, p)
    psi = t.psi.value(p)
    J = t.base.J.value(p)
    nJ = lambda V: t.base.nabla_J(p, V)  # noqa: E731
    return J @ nJ(psi @ X) @ Y - J @ nJ(psi @ Y) @ X - nJ(psi @ J @ X) @ Y + nJ(psi @ J @ Y) @ X


def _require_nearly_kahler(t: TwistedStructure) -> None:
    if not t.base.nearly_kahler:
        raise PreconditionError(f"base structure {t.base.label or t.base.backend!r} is not nearly Kaehler")


def K_matrix(t: TwistedStructure, p) -> np.ndarray:
    """``K = J psi + psi J``."""
    J = t.base.J.value(p)
    psi = t.psi.value(p)
    return J @ psi + psi @ J


def nk_criterion(t: TwistedStructure, p, X, Y) -> np.ndarray:
    """``(nabla_X J) K Y - (nabla_Y J) K X`` with ``K = J psi + psi J``."""
    t = _single(t)
    _require_nearly_kahler(t)
    require_codazzi(t, p)
    K = K_matrix(t, p)
    return t.base.nabla_J(p, X) @ K @ Y - t.base.nabla_J(p, Y) @ K @ X


def commutator_obstruction(t: TwistedStructure, p, Z, tol: float = 1e-9) -> np.ndarray:
    """``(nabla_Z J) K - K (nabla_Z J)`` on ``T_p`` for self-adjoint ``g``-Codazzi ``psi``."""
    t = _single(t)
    _require_nearly_kahler(t)
    require_codazzi(t, p)
    B = t.backend
    E = B.tangent_basis(p)
    Psi = frame_psi(t, p, E)
    if np.abs(Psi - Psi.T).max() > tol * max(1.0, np.abs(Psi).max()):
        raise PreconditionError("psi is not self-adjoint at the sampled point", witness=np.asarray(p).tolist())
    P = B.projector(p)
    nZ = t.base.nabla_J(p, Z)
    K = K_matrix(t, p)
    return P @ (nZ @ K - K @ nZ) @ P


# -- (1,0) identities -------------------------------------------------------------------------------


def to_10(I, v) -> np.ndarray:
    """The ``(1,0)`` part ``(v - i I v) / 2`` of a real vector."""
    v = np.asarray(v)
    return 0.5 * (v - 1j * (I @ v))


def _nabla_omega_complex(t: TwistedStructure, p, A, Bv, C) -> complex:
    nJ = t.base.nabla_J(p, A.real) + 1j * t.base.nabla_J(p, A.imag)
    return complex((nJ @ Bv) @ t.base.metric(p) @ C)


def complexify3(fn, X, Y, Z) -> complex:
    """Complex-trilinear extension of a real trilinear ``fn``."""
    total = 0j
    for parts in product((0, 1), repeat=3):
        args = [(v.imag if k else v.real) for v, k in zip((X, Y, Z), parts)]
        total += (1j ** sum(parts)) * fn(*args)
    return total


def _require_integrable(t: TwistedStructure, p, tol: float = INTEGRABLE_TOL) -> None:
    E = t.backend.tangent_basis(p)
    n = E.shape[1]
    worst = max(
        float(np.linalg.norm(twisted_nijenhuis(t, p, E[:, i], E[:, j]))) for i in range(n) for j in range(i + 1, n)
    )
    if worst > tol:
        raise PreconditionError(f"J^psi is not integrable at the sampled point (|N| = {worst:.3e})", witness=np.asarray(p).tolist())


def nk_10_identity(t: TwistedStructure, p, X, Y, Z) -> complex:
    """``(nabla_X omega)(FY, FZ) + (nabla_Y omega)(FZ, FX)`` with ``F = psi^-1`` on complex vectors."""
    t = _single(t)
    _require_nearly_kahler(t)
    require_codazzi(t, p)
    _require_integrable(t, p)
    F = t.psi_inv.value(p)
    X, Y, Z = (np.asarray(v, dtype=complex) for v in (X, Y, Z))
    return _nabla_omega_complex(t, p, X, F @ Y, F @ Z) + _nabla_omega_complex(t, p, Y, F @ Z, F @ X)


def nk_10_cyclic_residual(t: TwistedStructure, p, X, Y, Z) -> complex:
    """Cyclic sum of the ``(1,0)`` terms minus ``d omega^psi`` on the same complex arguments."""
    t = _single(t)
    F = t.psi_inv.value(p)
    X, Y, Z = (np.asarray(v, dtype=complex) for v in (X, Y, Z))
    cyc = (
        _nabla_omega_complex(t, p, X, F @ Y, F @ Z)
        + _nabla_omega_complex(t, p, Y, F @ Z, F @ X)
        + _nabla_omega_complex(t, p, Z, F @ X, F @ Y)
    )
    return cyc - complexify3(lambda a, b, c: d_omega_twisted(t, p, a, b, c), X, Y, Z)
