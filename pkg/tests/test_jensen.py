"""Unit tests for the Jensen-gap envelope and its equality diagnosis."""

import math

import numpy as np
import pytest

from amgm import (
    CONVEX_FUNCTIONS,
    ConvexFunction,
    DataVector,
    DomainError,
    WeightVector,
    gap_comparison,
    jensen_equality_diagnosis,
    jensen_gap,
    jensen_gap_comparison,
)

GAP_UNIF_149 = 1.36473941777204  # 14/3 - 36**(1/3), frozen oracle value

ALPHA = WeightVector([2 / 3, 1 / 6, 1 / 6])
UNIF3 = WeightVector.uniform(3)


class TestJensenGap:
    def test_square_variance_identity(self):
        gap = jensen_gap(WeightVector([0.5, 0.5]), DataVector([0.0, 2.0]),
                         CONVEX_FUNCTIONS["square"])
        assert gap == pytest.approx(1.0, rel=1e-14)

    def test_exp_on_logs_reduces_to_amgm_gap(self):
        logs = DataVector([0.0, math.log(4.0), math.log(9.0)])
        gap = jensen_gap(UNIF3, logs, CONVEX_FUNCTIONS["exp"])
        assert gap == pytest.approx(GAP_UNIF_149, rel=1e-12)

    def test_constant_data_zero(self):
        for name, f in CONVEX_FUNCTIONS.items():
            x = DataVector([2.5, 2.5, 2.5])
            assert jensen_gap(UNIF3, x, f) == 0.0, name

    def test_affine_function_has_zero_gap(self):
        affine = ConvexFunction(lambda t: 3.0 * t + 1.0, strictly_convex=False,
                                name="affine")
        rng = np.random.default_rng(5)
        for _ in range(50):
            n = int(rng.integers(2, 10))
            w = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            x = DataVector(rng.uniform(0, 100, n))
            assert abs(jensen_gap(w, x, affine)) <= 1e-12 * 300.0

    def test_nonnegative_for_catalog(self):
        rng = np.random.default_rng(6)
        for _ in range(500):
            n = int(rng.integers(2, 16))
            w = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            for name, f in CONVEX_FUNCTIONS.items():
                if name == "exp":
                    x = DataVector(rng.uniform(0.0, 20.0, n))
                elif name == "neg-log":
                    x = DataVector(10.0 ** rng.uniform(-8, 8, n))
                else:
                    x = DataVector(10.0 ** rng.uniform(-4, 3, n))
                assert jensen_gap(w, x, f) >= 0.0, name

    def test_domain_error_outside_interval(self):
        with pytest.raises(DomainError):
            jensen_gap(UNIF3, DataVector([0.0, 1.0, 2.0]), CONVEX_FUNCTIONS["neg-log"])

    def test_domain_error_on_overflow(self):
        with pytest.raises(DomainError):
            jensen_gap(UNIF3, DataVector([1.0, 2.0, 1e9]), CONVEX_FUNCTIONS["exp"])

    def test_probe_rejects_concave_evaluator(self):
        bumpy = ConvexFunction(lambda t: -(t**2), name="concave")
        with pytest.raises(DomainError):
            jensen_gap(UNIF3, DataVector([0.0, 1.0, 2.0]), bumpy, probe=True)

    def test_catalog_functions_pass_probe(self):
        x = DataVector([0.5, 1.5, 4.0])
        for f in CONVEX_FUNCTIONS.values():
            jensen_gap(UNIF3, x, f, probe=True)


class TestJensenGapComparison:
    def test_exp_matches_gap_comparison_on_logs(self):
        x = DataVector([1.0, 4.0, 9.0])
        logs = DataVector(np.log(x.values))
        jc = jensen_gap_comparison(ALPHA, UNIF3, logs, CONVEX_FUNCTIONS["exp"])
        gc = gap_comparison(ALPHA, UNIF3, x)
        for got, want in [(jc.gap_alpha, gc.gap_alpha), (jc.gap_beta, gc.gap_beta),
                          (jc.lower, gc.lower), (jc.upper, gc.upper)]:
            assert got == pytest.approx(want, rel=1e-10)

    def test_exp_equivalence_randomized(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(2, 32))
            a = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            b = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            x = DataVector(10.0 ** rng.uniform(0.0, 8.0, n))
            logs = DataVector(np.log(x.values))
            jc = jensen_gap_comparison(a, b, logs, CONVEX_FUNCTIONS["exp"], probe=False)
            gc = gap_comparison(a, b, x)
            scale = max(1.0, gc.gap_alpha, gc.upper)
            assert abs(jc.gap_alpha - gc.gap_alpha) <= 1e-10 * scale
            assert abs(jc.gap_beta - gc.gap_beta) <= 1e-10 * scale
            assert abs(jc.lower - gc.lower) <= 1e-10 * scale
            assert abs(jc.upper - gc.upper) <= 1e-10 * scale

    def test_identical_weights_collapse(self):
        x = DataVector([1.0, 4.0, 9.0])
        jc = jensen_gap_comparison(UNIF3, UNIF3, x, CONVEX_FUNCTIONS["square"])
        assert jc.lower == jc.gap_alpha == jc.upper

    def test_affine_all_gaps_zero(self):
        affine = ConvexFunction(lambda t: t, strictly_convex=False, name="identity")
        jc = jensen_gap_comparison(ALPHA, UNIF3, DataVector([1.0, 4.0, 9.0]), affine)
        assert jc.gap_alpha == pytest.approx(0.0, abs=1e-14)
        assert jc.gap_beta == pytest.approx(0.0, abs=1e-14)

    def test_envelope_holds_for_catalog(self):
        rng = np.random.default_rng(8)
        for _ in range(500):
            n = int(rng.integers(2, 12))
            a = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            b = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            x = DataVector(rng.uniform(0.0, 10.0, n))
            for f in CONVEX_FUNCTIONS.values():
                if f.name == "neg-log":
                    continue
                jc = jensen_gap_comparison(a, b, x, f, probe=False)
                scale = max(1.0, jc.upper, jc.gap_alpha)
                assert jc.lower - jc.gap_alpha <= 1e-10 * scale
                assert jc.gap_alpha - jc.upper <= 1e-10 * scale


class TestJensenEqualityDiagnosis:
    def test_constant_data(self):
        diag = jensen_equality_diagnosis(ALPHA, UNIF3, DataVector([3.0, 3.0, 3.0]))
        assert diag.left_equal and diag.right_equal

    def test_solved_left_equality(self):
        # off the minimal-quotient set {1, 2} the data must equal the mean:
        # (0.5 + 1.5)/2 pins the weighted mean at 1, matching x_0
        diag = jensen_equality_diagnosis(ALPHA, UNIF3, DataVector([1.0, 0.5, 1.5]))
        assert diag.left_equal is True
        assert diag.right_equal is False
        assert diag.forced_value_left == pytest.approx(1.0, rel=1e-12)

    def test_identical_weights_unconditional(self):
        diag = jensen_equality_diagnosis(UNIF3, UNIF3, DataVector([1.0, 4.0, 9.0]))
        assert diag.left_equal and diag.right_equal

    def test_affine_invariance_of_flags(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            n = int(rng.integers(2, 10))
            a = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            b = WeightVector(rng.dirichlet(np.ones(n)) + 1e-12, renormalize=True)
            x = rng.uniform(0.0, 10.0, n)
            ref = jensen_equality_diagnosis(a, b, DataVector(x))
            for scale, shift in [(2.0, 0.0), (0.25, 5.0), (1e4, 1e2), (1e-4, 1.0)]:
                diag = jensen_equality_diagnosis(a, b, DataVector(scale * x + shift))
                assert diag.left_equal == ref.left_equal
                assert diag.right_equal == ref.right_equal

    def test_rejects_nonpositive_tol(self):
        with pytest.raises(DomainError):
            jensen_equality_diagnosis(ALPHA, UNIF3, DataVector([1.0, 2.0, 3.0]), tol=-1.0)
