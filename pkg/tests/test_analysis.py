import json
import math

import numpy as np
import pytest

from psitwist import analysis
from psitwist.analysis import (
    BH_RATIO,
    CaseReport,
    Certificate,
    Check,
    Inconclusive,
    bh_transition,
    case_r4_kahler,
    case_s3s3,
    dumps_json,
    eigen_scan,
    flat_complex_twist_asymmetry,
    nonintegrability_certificate,
    parse_c_range,
    projected_ascent,
    r4_closed_forms,
    reference_christoffel_array,
    reports_to_csv,
    reports_to_json,
    sample_sphere,
    skew_codazzi_scan,
)
from psitwist.lie import s3xs3_structure
from psitwist.sphere import DegenerateError


class TestReports:
    def test_check_comparators(self):
        assert Check("a", 1e-12, 1e-10).passed
        assert not Check("a", 1.0, 1e-10).passed
        assert Check("a", 1.0, 0.5, "ge").passed
        assert Check("a", math.nan, None, "info").passed
        assert not Check("a", math.nan, 1.0).passed

    def test_duplicate_names_rejected(self):
        r = CaseReport("x")
        r.add("a", 0.0, 1.0)
        with pytest.raises(ValueError):
            r.add("a", 0.0, 1.0)

    def test_serialization(self):
        r = CaseReport("x", 3, {"points": 2})
        r.add("ok", 0.1, 1.0)
        r.add("bad", 2.0, 1.0, witness=np.array([1.0, 2.0]))
        r.wall_time = 1.5
        doc = json.loads(reports_to_json([r]))
        assert doc["passed"] is False
        assert "wall_time" not in doc["reports"][0]
        assert json.loads(reports_to_json([r], timing=True))["reports"][0]["wall_time"] == 1.5
        bad = doc["reports"][0]["checks"][1]
        assert bad["pass"] is False and bad["witness"] == [1.0, 2.0]
        lines = reports_to_csv([r]).splitlines()
        assert lines[0] == "case,check,residual,tolerance,pass"
        assert lines[2].endswith(",false")

    def test_json_uses_seventeen_digits(self):
        assert dumps_json({"v": 0.1}).strip() == '{\n  "v": 0.10000000000000001\n}'
        assert dumps_json([math.inf]).strip() == "[null]"


class TestS3S3:
    def test_reference_table_matches_connection(self):
        G = s3xs3_structure().connection.gamma
        assert np.abs(G - reference_christoffel_array()).max() < 1e-14
        assert len(analysis.REFERENCE_CHRISTOFFEL) == 36

    def test_case_passes(self):
        rep = case_s3s3(0)
        assert rep.passed, rep.failures()
        assert rep.check("gamma_12_3").value == pytest.approx(0.5)


class TestR4:
    def test_closed_forms_are_consistent(self):
        x = np.array([0.3, -1.0, 2.0, 0.5])
        ref = r4_closed_forms(x, 3.0)
        J, g, w = ref["J"], ref["g"], ref["omega"]
        assert np.allclose(J @ J, -np.eye(4))
        assert np.allclose(g @ J, w.T) or np.allclose(J.T @ g, w)

    def test_case_passes(self):
        rep = case_r4_kahler(3.0, samples=5)
        assert rep.passed, rep.failures()

    def test_c_must_exceed_one(self):
        with pytest.raises(ValueError):
            case_r4_kahler(1.0, samples=1)


class TestEigenScan:
    def test_refined_extremes_reach_analytic_range(self):
        (r,) = eigen_scan("x1*x2", [5.0], samples=2000, seed=0)
        assert r.F_min == pytest.approx(3.5, abs=1e-6)
        assert r.F_max == pytest.approx(6.5, abs=1e-6)
        assert r.F_min_sampled >= r.F_min - 1e-12
        assert r.lambda_min == pytest.approx(r.bound_min, rel=1e-5)
        assert r.lambda_max == pytest.approx(r.bound_max, rel=1e-5)
        assert r.pointwise_error < 1e-12

    def test_degenerate_c(self):
        with pytest.raises(DegenerateError):
            eigen_scan("x1*x2", [1.0], samples=100)
        (row,) = eigen_scan("x1*x2", [1.0], samples=100, strict=False)
        assert not row.valid

    def test_flag_transition_for_squared_bounds(self):
        rows = eigen_scan("x1*x2", [17.5, 18.0], samples=500, seed=0)
        assert [r.bh_flag for r in rows] == [False, True]
        assert bh_transition(rows) == (17.5, 18.0)
        assert analysis.BH_THRESHOLD == pytest.approx(9 + 1.5 * math.sqrt(35))
        ratio = lambda c: ((c + 1.5) / (c - 1.5)) ** 2  # noqa: E731
        assert ratio(analysis.BH_THRESHOLD) == pytest.approx(BH_RATIO)

    def test_parse_c_range(self):
        assert parse_c_range("2:3:0.5") == [2.0, 2.5, 3.0]
        assert parse_c_range("2:2:1") == [2.0]
        for bad in ("3:2:1", "1:2:0", "a:b", "1:2"):
            with pytest.raises(ValueError):
                parse_c_range(bad)

    def test_sample_sphere_is_reproducible(self):
        a = sample_sphere(6, 10, 4)
        assert np.array_equal(a, sample_sphere(6, 10, 4))
        assert np.allclose(np.linalg.norm(a, axis=1), 1)
        assert np.array_equal(a[:5], sample_sphere(6, 5, 4))


class TestCertificates:
    def test_certificate_found(self):
        cert = nonintegrability_certificate("x1*x2", 5.0, budget=10)
        assert isinstance(cert, Certificate)
        assert cert.residual >= cert.raw_residual > 1e-4
        assert cert.tensor_residual == pytest.approx(cert.residual, rel=1e-10)
        assert np.linalg.norm(cert.X) == pytest.approx(1) and abs(cert.X @ cert.point) < 1e-12
        assert cert.to_dict()["status"] == "certificate"

    def test_inconclusive(self):
        res = nonintegrability_certificate("x1*x2", 5.0, budget=1, threshold=1e6)
        assert isinstance(res, Inconclusive)
        assert res.to_dict()["status"] == "inconclusive"

    def test_degenerate(self):
        with pytest.raises(DegenerateError):
            nonintegrability_certificate("x1*x2", 1.0, budget=1)

    def test_deterministic(self):
        a = nonintegrability_certificate("x1", 3.0, budget=5, seed=7)
        b = nonintegrability_certificate("x1", 3.0, budget=5, seed=7)
        assert dumps_json(a.to_dict()) == dumps_json(b.to_dict())


def test_projected_ascent_on_circle():
    fun = lambda x: x[0]  # noqa: E731
    grad = lambda x: np.array([1.0, 0.0]) - x[0] * x  # noqa: E731
    x, fx = projected_ascent(fun, grad, np.array([0.0, 1.0]), lambda v: v / np.linalg.norm(v), iters=100)
    assert fx == pytest.approx(1.0, abs=1e-10)


def test_complex_twist_asymmetry():
    assert flat_complex_twist_asymmetry(2.0, -0.3) == pytest.approx(0.6)


def test_skew_candidates_fail_codazzi():
    defects = skew_codazzi_scan(6, 2, samples=10)
    assert set(defects) >= {"PKP_0", "PKP_1", "J", "(2+x1)J"}
    assert min(defects.values()) > 1e-3


def test_run_suite_rejects_unknown():
    with pytest.raises(KeyError):
        analysis.run_suite("nope")
