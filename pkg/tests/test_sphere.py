import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psitwist.chart import ChartOracle, identity_oracle
from psitwist.fields import EndoField, FlatBackend, SphereBackend, VectorField
from psitwist.sampling import max_residual, rng_for
from psitwist.scalarfield import parse
from psitwist.sphere import (
    CodazziTensor,
    DegenerateError,
    SpherePoint,
    TangentVector,
    codazzi_map,
    codazzi_map_residual,
    codazzi_tensor,
    cross7,
    curvature_operator,
    g2_membership,
    geodesic_second_derivative,
    hessian_g,
    levi_civita,
    nabla_J6,
    nijenhuis_J6,
    nijenhuis_kernel_check,
    riemann_from_connection,
    round_curvature_operator,
    round_riemann,
    round_riemann_tensor,
    screen_nondegeneracy,
    sobol_points,
    standard_J6,
    symmetry_residual,
    tangent_spectrum,
    x1x2_extreme_eigenvalues,
)

S6 = SphereBackend(6)
seeds = st.integers(0, 2**31 - 1)


def point_and_tangents(seed, n=6, k=2):
    rng = np.random.default_rng(seed)
    B = SphereBackend(n)
    p = B.sample_point(rng)
    return p, [B.random_tangent(p, rng) for _ in range(k)]


class TestPoints:
    def test_validation(self):
        with pytest.raises(ValueError):
            SpherePoint([1.0, 1.0])
        p = SpherePoint([1.0, 0.0, 0.0])
        TangentVector(p, [0.0, 2.0, 0.0])
        with pytest.raises(ValueError):
            TangentVector(p, [1.0, 0.0, 0.0])

    def test_backend_needs_dimension_two(self):
        with pytest.raises(ValueError):
            SphereBackend(1)

    def test_tangent_basis_is_orthonormal(self):
        p, _ = point_and_tangents(0)
        E = S6.tangent_basis(p)
        assert np.allclose(E.T @ E, np.eye(6))
        assert np.abs(E.T @ p).max() < 1e-14

    def test_levi_civita_requires_tangent_field(self):
        p = np.eye(3)[0]
        with pytest.raises(ValueError):
            levi_civita(p, np.eye(3)[1], VectorField.constant(np.eye(3)[0]))


class TestCurvature:
    @settings(max_examples=30, deadline=None)
    @given(seeds, st.integers(2, 6))
    def test_projection_connection_gives_round_curvature(self, seed, n):
        p, (X, Y, Z, W) = point_and_tangents(seed, n, 4)
        assert riemann_from_connection(p, X, Y, Z, W) == pytest.approx(round_riemann(X, Y, Z, W), abs=1e-12 * 50)

    def test_round_operator_is_identity(self):
        for n in (3, 4, 6):
            assert np.allclose(curvature_operator(round_riemann_tensor(n), np.eye(n)), round_curvature_operator(n))

    def test_chart_oracle_recovers_round_sphere(self):
        p, _ = point_and_tangents(4)
        T = S6.tangent_basis(p)
        h, G, _ = identity_oracle("sphere").at(p, T)
        assert np.allclose(h, np.eye(6), atol=1e-12)
        assert np.abs(G).max() < 1e-12
        Rm = identity_oracle("sphere").riemann_tensor(p, T)
        assert np.abs(Rm - round_riemann_tensor(6)).max() < 1e-10

    def test_flat_oracle_is_flat(self):
        h, G, R = identity_oracle("flat").at(np.ones(4), np.eye(4))
        assert np.allclose(h, np.eye(4)) and np.abs(G).max() == 0 and np.abs(R).max() == 0


class TestHessian:
    @settings(max_examples=40, deadline=None)
    @given(seeds, st.sampled_from(["x1*x2", "x1", "x1^2*x3", "x2*x3 - x4^2 + 2*x5", "sin(x1)*x4"]))
    def test_matches_geodesic_second_derivative(self, seed, text):
        p, (v,) = point_and_tangents(seed, 6, 1)
        v /= np.linalg.norm(v)
        f = parse(text)
        assert hessian_g(f, p, v, v) == pytest.approx(geodesic_second_derivative(f, p, v), abs=1e-12)

    def test_rejects_normal_arguments(self):
        p = np.eye(3)[0]
        with pytest.raises(ValueError):
            hessian_g(parse("x1"), p, p, p)


class TestCodazzi:
    @pytest.mark.parametrize("text", ["x1*x2", "x1", "x1^2*x3", "x2*x3 - x4^2 + 2*x5"])
    def test_codazzi_identity_on_s6(self, text):
        A = codazzi_tensor(text, 5.0)
        for seed in range(10):
            p, (X, Y, Z) = point_and_tangents(seed, 6, 3)
            assert abs(A.codazzi_residual(p, X, Y, Z)) < 1e-10

    def test_codazzi_on_flat_space(self):
        B = FlatBackend(4)
        A = codazzi_tensor("x1^2*x3 + x2*x4", 3.0, B)
        rng = np.random.default_rng(0)
        p = B.sample_point(rng)
        X, Y, Z = rng.standard_normal((3, 4))
        assert abs(A.codazzi_residual(p, X, Y, Z)) < 1e-12

    def test_dropping_the_f_term_breaks_codazzi(self):
        class HessianOnly(CodazziTensor):
            # Hess f + c g without the f g term
            def matrix(self, q):
                return super().matrix(q) - self.f(q) * np.eye(len(q))

            def deriv(self, q, w):
                return super().deriv(q, w) - (self.f.gradient(q) @ w) * np.eye(len(q))

        good = codazzi_tensor("x1^2*x3", 3.0)
        bad = HessianOnly(good.f, 3.0, S6)
        p, (X, Y, Z) = point_and_tangents(2, 6, 3)
        assert abs(good.codazzi_residual(p, X, Y, Z)) < 1e-10
        assert abs(bad.codazzi_residual(p, X, Y, Z)) > 1e-3

    def test_rejects_wrong_backend_and_coordinates(self):
        with pytest.raises(ValueError):
            codazzi_tensor("x8", 1.0)
        with pytest.raises(TypeError):
            codazzi_tensor("x1", 1.0, backend=object())

    @settings(max_examples=50, deadline=None)
    @given(seeds, st.floats(2.0, 20.0))
    def test_x1x2_pointwise_extremes(self, seed, c):
        p, _ = point_and_tangents(seed)
        vals = tangent_spectrum(codazzi_tensor("x1*x2", c), p)[0]
        lo, hi = x1x2_extreme_eigenvalues(p, c)
        assert vals[0] == pytest.approx(lo, abs=1e-12 * c)
        assert vals[-1] == pytest.approx(hi, abs=1e-12 * c)

    def test_spectrum_matches_tangent_restriction(self):
        A = codazzi_tensor("x1^2*x3", 4.0)
        p, _ = point_and_tangents(7)
        E = S6.tangent_basis(p)
        assert np.allclose(tangent_spectrum(A, p)[0], np.linalg.eigvalsh(E.T @ A.matrix(p) @ E))

    def test_codazzi_map_properties(self):
        m = codazzi_map("x1*x2", 5.0, samples=512)
        for seed in range(5):
            p, (X, Y) = point_and_tangents(seed)
            assert codazzi_map_residual(m, p, X, Y) < 1e-10
            assert symmetry_residual(m, p) < 1e-12

    def test_degenerate_tensor_is_rejected_with_witness(self):
        with pytest.raises(DegenerateError) as info:
            codazzi_map("x1*x2", 1.0, samples=512)
        assert info.value.witness is not None and info.value.witness.shape == (7,)

    def test_screen_reports_sign_change(self):
        report = screen_nondegeneracy(codazzi_tensor("x1^2*x3", 0.0), samples=1024)
        assert report.signature_changes and not report.nondegenerate

    def test_sobol_points_are_on_sphere(self):
        pts = sobol_points(S6, 100, seed=3)
        assert pts.shape == (100, 7)
        assert np.allclose(np.linalg.norm(pts, axis=1), 1)


class TestS6:
    def test_cross_product_identities(self):
        rng = np.random.default_rng(0)
        u, v = rng.standard_normal((2, 7))
        w = cross7(u, v)
        assert abs(w @ u) < 1e-12 and abs(w @ v) < 1e-12
        assert np.linalg.norm(w) ** 2 == pytest.approx((u @ u) * (v @ v) - (u @ v) ** 2)

    def test_J_is_orthogonal_complex_structure(self):
        p, _ = point_and_tangents(1)
        E = S6.tangent_basis(p)
        J = E.T @ standard_J6().value(p) @ E
        assert np.allclose(J @ J, -np.eye(6))
        assert np.allclose(J.T @ J, np.eye(6))

    def test_nearly_kahler(self):
        p, (X, Y) = point_and_tangents(5)
        assert np.allclose(nabla_J6(p, X) @ X, 0, atol=1e-14)
        assert np.allclose(nabla_J6(p, X) @ Y, -nabla_J6(p, Y) @ X)
        J = EndoField(standard_J6().value, standard_J6().deriv)
        assert np.allclose(S6.nabla_endo(p, X, J) @ Y, nabla_J6(p, X) @ Y)

    def test_nijenhuis_kernel(self):
        for seed in range(5):
            p, (X, Y) = point_and_tangents(seed)
            assert nijenhuis_kernel_check(p, X)
            assert np.linalg.norm(nijenhuis_J6(p, X, Y)) > 1e-3

    def test_nijenhuis_kernel_rejects_zero(self):
        p, _ = point_and_tangents(0)
        with pytest.raises(ValueError):
            nijenhuis_kernel_check(p, np.zeros(7))

    def test_g2_membership(self):
        assert g2_membership(np.eye(7))
        P = np.eye(7)[[1, 0, 2, 3, 4, 5, 6]]
        assert not g2_membership(P)
        with pytest.raises(ValueError):
            g2_membership(np.zeros((7, 7)))


class TestSampling:
    def test_streams_are_counter_keyed(self):
        a = rng_for(1, 5, 2).standard_normal(3)
        b = rng_for(1, 5, 2).standard_normal(3)
        c = rng_for(1, 6, 2).standard_normal(3)
        assert np.array_equal(a, b) and not np.array_equal(a, c)

    def test_max_residual(self):
        r = max_residual(lambda g: (g.uniform(), None), 50, seed=0)
        assert r.samples == 50 and 0 <= r.index < 50
        with pytest.raises(ValueError):
            max_residual(lambda g: (0.0, None), 0, seed=0)

    def test_nan_stops_search(self):
        r = max_residual(lambda g: (np.nan, "bad"), 10, seed=0)
        assert r.index == 0 and r.witness == "bad"


def test_chart_oracle_agrees_with_codazzi_metric():
    f = parse("x1*x2")
    oracle = ChartOracle.codazzi(f, 5.0)
    m = codazzi_map(f, 5.0, samples=256)
    p, _ = point_and_tangents(9)
    T = S6.tangent_basis(p)
    h, _, _ = oracle.at(p, T)
    Pinv = m.psi_inv.value(p)
    assert np.allclose(h, T.T @ Pinv.T @ Pinv @ T, atol=1e-12)
