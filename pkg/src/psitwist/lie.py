"""Left-invariant geometry computed from structure constants.

Everything lives at the Lie-algebra level: vectors are coefficient arrays
in a fixed frame ``e_1 .. e_n`` and invariant tensors are constant arrays.
Indices are 0-based in code and 1-based in the JSON bracket format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product
from os import PathLike

import numpy as np

from .multilinear import Metric, check_invertible

JACOBI_TOL = 1e-12
CHECK_TOL = 1e-10


class JacobiError(ValueError):
    pass


@dataclass(frozen=True)
class LieFrame:
    """Structure constants ``c[k, i, j]`` with ``[e_i, e_j] = sum_k c[k, i, j] e_k``."""

    constants: np.ndarray

    def __post_init__(self):
        c = np.array(self.constants, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise ValueError(f"structure constants must have shape (n, n, n), got {c.shape}")
        if np.abs(c + c.transpose(0, 2, 1)).max(initial=0.0) > JACOBI_TOL:
            raise ValueError("structure constants are not antisymmetric in the lower indices")
        c.setflags(write=False)
        object.__setattr__(self, "constants", c)
        defect = self.jacobi_defect()
        if defect > JACOBI_TOL * max(1.0, np.abs(c).max(initial=0.0)) ** 2:
            raise JacobiError(f"Jacobi identity fails (max defect {defect:.3e})")

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    def bracket(self, X, Y) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.constants, X, Y)

    def ad(self, X) -> np.ndarray:
        """Matrix of ``Y -> [X, Y]``."""
        return np.einsum("kij,i->kj", self.constants, X)

    def jacobi_defect(self) -> float:
        c = self.constants
        # [[e_i,e_j],e_l] + cyclic, component m
        t = np.einsum("kij,mkl->ijlm", c, c)
        cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
        return float(np.abs(cyc).max(initial=0.0))

    @classmethod
    def from_brackets(cls, dim: int, brackets) -> "LieFrame":
        """Build from ``[(i, j, coeffs), ...]`` with 1-based ``i, j``; missing brackets are zero."""
        c = np.zeros((dim, dim, dim))
        for entry in brackets:
            i, j, coeffs = entry
            i, j = int(i) - 1, int(j) - 1
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"bracket index out of range: {entry!r}")
            coeffs = np.asarray(coeffs, dtype=float)
            if coeffs.shape != (dim,):
                raise ValueError(f"bracket [e{i + 1}, e{j + 1}] needs {dim} coefficients")
            if i == j:
                if np.any(coeffs):
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            c[:, i, j] = coeffs
            c[:, j, i] = -coeffs
        return cls(c)

    @classmethod
    def from_json(cls, source) -> "LieFrame":
        """Load ``{"dim": n, "brackets": [[i, j, [coeffs...]], ...]}`` from a dict, string or path."""
        if isinstance(source, dict):
            doc = source
        elif isinstance(source, (str, PathLike)) and not str(source).lstrip().startswith("{"):
            with open(source) as fh:
                doc = json.load(fh)
        else:
            doc = json.loads(source)
        return cls.from_brackets(int(doc["dim"]), doc.get("brackets", []))

    def to_json(self) -> dict:
        n = self.dim
        brackets = [
            [i + 1, j + 1, self.constants[:, i, j].tolist()]
            for i in range(n)
            for j in range(i + 1, n)
            if np.any(self.constants[:, i, j])
        ]
        return {"dim": n, "brackets": brackets}

    def change_frame(self, B) -> "LieFrame":
        """Structure constants in the frame whose vectors are the columns of ``B``."""
        B = check_invertible(B)
        Binv = np.linalg.inv(B)
        return LieFrame(np.einsum("ak,kij,ip,jq->apq", Binv, self.constants, B, B))


def abelian(n: int) -> LieFrame:
    return LieFrame(np.zeros((n, n, n)))


def su2() -> LieFrame:
    """``[e1, e2] = e3`` and cyclic."""
    return LieFrame.from_brackets(3, [(1, 2, [0, 0, 1]), (2, 3, [1, 0, 0]), (3, 1, [0, 1, 0])])


def direct_sum(a: LieFrame, b: LieFrame) -> LieFrame:
    n, m = a.dim, b.dim
    c = np.zeros((n + m,) * 3)
    c[:n, :n, :n] = a.constants
    c[n:, n:, n:] = b.constants
    return LieFrame(c)


@dataclass(frozen=True)
class Connection:
    """Invariant connection ``nabla_{e_i} e_j = sum_k gamma[k, i, j] e_k``."""

    gamma: np.ndarray

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def operator(self, X) -> np.ndarray:
        """Matrix of ``Y -> nabla_X Y`` on invariant fields."""
        return np.einsum("kij,i->kj", self.gamma, X)

    def nabla(self, X, Y) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.gamma, X, Y)

    def metric_defect(self, g) -> float:
        g = g.entries if isinstance(g, Metric) else np.asarray(g)
        # g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)
        t = np.einsum("mij,mk->ijk", self.gamma, g)
        return float(np.abs(t + t.transpose(0, 2, 1)).max(initial=0.0))

    def torsion_defect(self, frame: LieFrame) -> float:
        T = self.gamma - self.gamma.transpose(0, 2, 1) - frame.constants
        return float(np.abs(T).max(initial=0.0))


def koszul_connection(frame: LieFrame, g) -> Connection:
    """Levi-Civita connection of an invariant metric.

    Solves ``2 g(nabla_X Y, Z) = g([X,Y],Z) - g([X,Z],Y) - g([Y,Z],X)`` on
    frame vectors; the derivative terms of the Koszul formula vanish.
    """
    g = g if isinstance(g, Metric) else Metric(np.asarray(g, dtype=float))
    if g.dim != frame.dim:
        raise ValueError("metric and frame dimensions differ")
    c = frame.constants
    G = g.entries
    # lowered constants: cl[l, i, j] = g([e_i, e_j], e_l)
    cl = np.einsum("kij,kl->lij", c, G)
    rhs = 0.5 * (cl - cl.transpose(2, 1, 0) - cl.transpose(2, 0, 1))
    # rhs[l, i, j] = g(nabla_i e_j, e_l)
    return Connection(np.einsum("kl,lij->kij", g.inverse, rhs))


def covariant_derivative_endo(conn: Connection, A, i) -> np.ndarray:
    """Matrix of ``nabla_{e_i} A`` for an invariant endomorphism ``A``.

    ``i`` may be a frame index or a coefficient vector.
    """
    A = np.asarray(A, dtype=float)
    if np.ndim(i) == 0:
        if not 0 <= int(i) < conn.dim:
            raise IndexError(f"frame index {i} out of range for dimension {conn.dim}")
        X = np.eye(conn.dim)[int(i)]
    else:
        X = np.asarray(i, dtype=float)
    G = conn.operator(X)
    return G @ A - A @ G


def covariant_derivative_form(conn: Connection, form) -> np.ndarray:
    """``(nabla_i alpha)(j1, ..., jk)`` for an invariant ``k``-form, as a ``k+1`` array."""
    form = np.asarray(form, dtype=float)
    k = form.ndim
    out = np.zeros((conn.dim,) + form.shape)
    letters = "abcdefgh"[:k]
    for slot in range(k):
        # replace slot index by nabla_i e_j: sum_m gamma[m, i, j] alpha(.., m, ..)
        src = letters[:slot] + "m" + letters[slot + 1 :]
        dst = "i" + letters
        out -= np.einsum(f"m i {letters[slot]},{src}->{dst}".replace(" ", ""), conn.gamma, form)
    return out


def invariant_d(conn: Connection, form) -> np.ndarray:
    """Exterior derivative of an invariant 2- or 3-form via a torsion-free connection.

    ``d alpha(X_0, .., X_k) = sum_i (-1)^i (nabla_{X_i} alpha)(.., X_i omitted, ..)``.
    Forms are dense alternating arrays.
    """
    form = np.asarray(form, dtype=float)
    k = form.ndim
    if k not in (2, 3):
        raise ValueError(f"invariant_d supports 2- and 3-forms, got a {k}-form")
    nab = covariant_derivative_form(conn, form)
    letters = "abcd"[: k + 1]
    out = np.zeros((conn.dim,) * (k + 1))
    for i in range(k + 1):
        # move the differentiating slot to position i
        src = letters[i] + letters[:i] + letters[i + 1 :]
        out += (-1) ** i * np.einsum(f"{src}->{letters}", nab)
    return out


def chevalley_eilenberg_d(frame: LieFrame, form) -> np.ndarray:
    """Exterior derivative of an invariant form from the brackets alone.

    ``d alpha(X_0..X_k) = sum_{i<j} (-1)^{i+j} alpha([X_i, X_j], X_0.. omitted ..)``.
    """
    form = np.asarray(form, dtype=float)
    k = form.ndim
    n = frame.dim
    c = frame.constants
    letters = "abcdefg"[: k + 1]
    out = np.zeros((n,) * (k + 1))
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            rest = [letters[m] for m in range(k + 1) if m not in (i, j)]
            spec = f"z{letters[i]}{letters[j]},z{''.join(rest)}->{letters}"
            out += (-1) ** (i + j) * np.einsum(spec, c, form)
    return out


def nijenhuis(frame: LieFrame, J) -> np.ndarray:
    """``N[i, j] = J[Je_i, e_j] + J[e_i, Je_j] + [e_i, e_j] - [Je_i, Je_j]``."""
    J = np.asarray(J, dtype=float)
    n = frame.dim
    if np.abs(J @ J + np.eye(n)).max() > CHECK_TOL:
        raise ValueError("J is not an almost complex structure")
    c = frame.constants
    B = lambda X, Y: np.einsum("kij,ia,jb->abk", c, X, Y)  # noqa: E731
    I = np.eye(n)
    return (
        np.einsum("kl,abl->abk", J, B(J, I))
        + np.einsum("kl,abl->abk", J, B(I, J))
        + B(I, I)
        - B(J, J)
    )


def nijenhuis_vectors(frame: LieFrame, J, X, Y) -> np.ndarray:
    N = nijenhuis(frame, J)
    return np.einsum("abk,a,b->k", N, X, Y)


@dataclass(frozen=True)
class InvariantStructure:
    """Invariant almost Hermitian structure ``(g, J, omega = g(J., .))``."""

    frame: LieFrame
    g: Metric
    J: np.ndarray

    def __post_init__(self):
        g = self.g if isinstance(self.g, Metric) else Metric(np.asarray(self.g, dtype=float))
        object.__setattr__(self, "g", g)
        J = np.array(self.J, dtype=float)
        n = self.frame.dim
        if g.dim != n or J.shape != (n, n):
            raise ValueError("frame, metric and J dimensions differ")
        if np.abs(J @ J + np.eye(n)).max() > 1e-12:
            raise ValueError("J^2 != -id")
        if np.abs(J.T @ g.entries @ J - g.entries).max() > 1e-12:
            raise ValueError("g is not J-invariant")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @property
    def omega(self) -> np.ndarray:
        """``omega(X, Y) = g(JX, Y)`` as an antisymmetric matrix."""
        return self.J.T @ self.g.entries

    @property
    def connection(self) -> Connection:
        return koszul_connection(self.frame, self.g)


def nabla_J(structure: InvariantStructure) -> np.ndarray:
    """``DJ[i] = nabla_{e_i} J`` stacked along the first axis."""
    conn = structure.connection
    return np.stack([covariant_derivative_endo(conn, structure.J, i) for i in range(structure.frame.dim)])


def nearly_kahler_defect(structure: InvariantStructure) -> float:
    """``max |(nabla_i J) e_j + (nabla_j J) e_i|``."""
    DJ = nabla_J(structure)
    # T[i, j] = (nabla_i J) e_j
    T = DJ.transpose(0, 2, 1)
    return float(np.abs(T + T.transpose(1, 0, 2)).max())


def nearly_kahler_check(structure: InvariantStructure, tol: float = CHECK_TOL) -> bool:
    return nearly_kahler_defect(structure) <= tol


def curvature_endo(conn: Connection, frame: LieFrame, i, j) -> np.ndarray:
    """Matrix of ``R(e_i, e_j) = [nabla_i, nabla_j] - nabla_{[e_i, e_j]}`` on invariant fields."""
    n = conn.dim
    for idx in (i, j):
        if not 0 <= int(idx) < n:
            raise IndexError(f"frame index {idx} out of range for dimension {n}")
    E = np.eye(n)
    Gi, Gj = conn.operator(E[i]), conn.operator(E[j])
    return Gi @ Gj - Gj @ Gi - conn.operator(frame.bracket(E[i], E[j]))


def curvature_tensor(conn: Connection, frame: LieFrame) -> np.ndarray:
    """``R[i, j]`` for all frame pairs, shape ``(n, n, n, n)``."""
    n = conn.dim
    G = conn.gamma.transpose(1, 0, 2)  # G[i] = operator(e_i)
    comm = np.einsum("iab,jbc->ijac", G, G)
    comm = comm - comm.transpose(1, 0, 2, 3)
    return comm - np.einsum("kij,kab->ijab", frame.constants, G)


def riemann_tensor(conn: Connection, frame: LieFrame, g) -> np.ndarray:
    """``Rm[i, j, k, l] = g(R(e_i, e_j) e_k, e_l)``."""
    g = g.entries if isinstance(g, Metric) else np.asarray(g)
    R = curvature_tensor(conn, frame)
    return np.einsum("ijmk,ml->ijkl", R, g)


# -- the nearly Kaehler structure on S^3 x S^3 ----------------------------------------


def s3xs3_frame() -> LieFrame:
    """``su(2) + su(2)`` in the basis ``e1, e2, e3, f1, f2, f3``."""
    return direct_sum(su2(), su2())


def s3xs3_structure() -> InvariantStructure:
    """The left-invariant strictly nearly Kaehler structure on ``S^3 x S^3``."""
    g = np.zeros((6, 6))
    J = np.zeros((6, 6))
    s = 1 / math.sqrt(3)
    for i in range(3):
        e, f = i, i + 3
        g[e, e] = g[f, f] = 4 / 3
        g[e, f] = g[f, e] = -2 / 3
        # J e_i = -(e_i + 2 f_i)/sqrt3, J f_i = (2 e_i + f_i)/sqrt3
        J[e, e], J[f, e] = -s, -2 * s
        J[e, f], J[f, f] = 2 * s, s
    return InvariantStructure(s3xs3_frame(), Metric(g), J)


def s3xs3_skt_twist() -> np.ndarray:
    """Constant automorphism turning the ``S^3 x S^3`` structure into an SKT Hermitian one."""
    E = np.eye(6)
    e1, e2, e3, f1, f2, f3 = E
    r = math.sqrt(3) / 2
    columns = [e1, f1, e3, -0.5 * e1 - r * e2, -0.5 * f1 - r * f2, -0.5 * e3 - r * f3]
    return np.column_stack(columns)


def lie_algebra_automorphism_defect(frame: LieFrame, F) -> float:
    """``max |F[X, Y] - [FX, FY]|`` over frame pairs."""
    F = np.asarray(F, dtype=float)
    lhs = np.einsum("ak,kij->aij", F, frame.constants)
    rhs = np.einsum("kab,ai,bj->kij", frame.constants, F, F)
    return float(np.abs(lhs - rhs).max())


def frame_pairs(n: int):
    return product(range(n), repeat=2)
