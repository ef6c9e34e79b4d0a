"""Curvature of a metric in a local chart, by automatic differentiation.

This is the independent oracle for twisted metrics: the metric
``h(X, Y) = |psi^-1 X|^2`` is pulled back to a chart around ``p`` and its
Christoffel symbols and curvature are differentiated by jax.  Nothing here
reuses the hand-written derivative code of the other modules.
"""

from __future__ import annotations

from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from .scalarfield import ScalarField

jax.config.update("jax_enable_x64", True)


def sphere_chart(p, T):
    """``u -> normalize(p + T u)``; its differential at ``u = 0`` is ``T``."""

    def q(u):
        x = p + T @ u
        return x / jnp.linalg.norm(x)

    return q


def flat_chart(p, T):
    return lambda u: p + T @ u


def chart_metric(q: Callable, M: Callable) -> Callable:
    """``h_ij(u) = d_i q . M(q(u)) . d_j q``."""

    def h(u):
        Dq = jax.jacfwd(q)(u)
        return Dq.T @ M(q(u)) @ Dq

    return h


def christoffel(h: Callable) -> Callable:
    """``Gamma[k, i, j]`` with ``nabla_i d_j = Gamma[k, i, j] d_k``."""
    dh = jax.jacfwd(h)  # dh[a, b, c] = d_c h_ab

    def gamma(u):
        hinv = jnp.linalg.inv(h(u))
        d = dh(u)
        t = jnp.einsum("jli->ijl", d) + jnp.einsum("ilj->ijl", d) - d
        return 0.5 * jnp.einsum("kl,ijl->kij", hinv, t)

    return gamma


def riemann(h: Callable) -> Callable:
    """``R[l, i, j, k]`` with ``R(d_i, d_j) d_k = R[l, i, j, k] d_l``."""
    gamma = christoffel(h)
    dgamma = jax.jacfwd(gamma)  # dgamma[l, j, k, i] = d_i Gamma[l, j, k]

    def R(u):
        G = gamma(u)
        dG = dgamma(u)
        quad = jnp.einsum("lim,mjk->lijk", G, G)
        return jnp.einsum("ljki->lijk", dG) - jnp.einsum("likj->lijk", dG) + quad - jnp.einsum("ljik->lijk", quad)

    return R


def _field_jet(f: ScalarField):
    fun = lambda x: f.evaluate(x, jnp)  # noqa: E731
    return fun, jax.grad(fun), jax.hessian(fun)


def codazzi_psi_inverse(f: ScalarField, c: float, kind: str) -> Callable:
    """``psi^-1(q)`` on tangent vectors, with ``f``'s derivatives taken by jax."""
    fun, grad, hess = _field_jet(f)

    if kind == "sphere":

        def M(q):
            P = jnp.eye(q.shape[0]) - jnp.outer(q, q)
            return P @ (hess(q) + (fun(q) + c - q @ grad(q)) * jnp.eye(q.shape[0])) @ P

    elif kind == "flat":

        def M(q):
            return hess(q) + c * jnp.eye(q.shape[0])

    else:
        raise ValueError(f"unknown chart kind {kind!r}")
    return M


class ChartOracle:
    """Metric, Christoffel symbols and curvature of ``h = g(psi^-1 ., psi^-1 .)`` at ``p``.

    All quantities are in the chart frame ``d_i = T e_i`` at ``u = 0``.
    """

    def __init__(self, psi_inverse: Callable, kind: str):
        self.kind = kind
        chart = sphere_chart if kind == "sphere" else flat_chart
        Mh = lambda q: psi_inverse(q).T @ psi_inverse(q)  # noqa: E731

        def compute(p, T):
            q = chart(p, T)
            h = chart_metric(q, Mh)
            u0 = jnp.zeros(T.shape[1])
            return h(u0), christoffel(h)(u0), riemann(h)(u0)

        self._compute = jax.jit(compute)

    @classmethod
    def codazzi(cls, f: ScalarField, c: float, kind: str = "sphere") -> "ChartOracle":
        return cls(codazzi_psi_inverse(f, float(c), kind), kind)

    def at(self, p, T):
        """``(h, Gamma, R)`` as numpy arrays."""
        h, G, R = self._compute(jnp.asarray(p, dtype=jnp.float64), jnp.asarray(T, dtype=jnp.float64))
        return np.asarray(h), np.asarray(G), np.asarray(R)

    def riemann_tensor(self, p, T) -> np.ndarray:
        """``Rm[i, j, k, l] = h(R(d_i, d_j) d_k, d_l)``."""
        h, _, R = self.at(p, T)
        return np.einsum("mijk,ml->ijkl", R, h)


def identity_oracle(kind: str) -> ChartOracle:
    return ChartOracle(lambda q: jnp.eye(q.shape[0]), kind)
