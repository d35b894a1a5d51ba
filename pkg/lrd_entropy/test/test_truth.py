import math
import unittest

import mpmath
import numpy as np

from lrd_entropy.estimator import FixedRule, PaperDefault, PowerRule
from lrd_entropy.exceptions import (
    NotCoveredError,
    UnsupportedBandwidthRuleError,
    ValidationError,
)
from lrd_entropy.linproc import CoefficientSpec, alpha_norm_sum
from lrd_entropy.truth import (
    BandwidthPurpose,
    CaseId,
    c_f_closed,
    c_f_constants,
    classify_limit,
    limit_theorem_report,
    sigma_tilde,
    true_qf_closed,
    true_qf_quadrature,
    true_renyi,
    validate_bandwidth,
)

# (alpha, beta) -> published true value of int f^2
TABLE_TRUTHS = {
    (0.5, 2.5): 0.0051,
    (0.5, 3.5): 0.0181,
    (0.5, 3.9): 0.0219,
    (1.5, 0.9): 0.0668,
    (1.5, 1.1): 0.0840,
    (1.5, 1.3): 0.0935,
}


def norm_sum(alpha, beta, c0=1.0):
    return alpha_norm_sum(CoefficientSpec(beta, c0), alpha)


class TestQuadraticFunctional(unittest.TestCase):

    def test_table_truths(self):
        for (alpha, beta), expected in TABLE_TRUTHS.items():
            with self.subTest(alpha=alpha, beta=beta):
                self.assertAlmostEqual(true_qf_closed(alpha, norm_sum(alpha, beta)), expected, delta=5e-5)

    def test_closed_forms(self):
        self.assertAlmostEqual(true_qf_closed(2.0, 1.0), 1.0 / (2.0 * math.sqrt(2.0 * math.pi)), places=14)
        self.assertAlmostEqual(true_qf_closed(1.0, 2.0), 1.0 / (4.0 * math.pi), places=14)
        self.assertAlmostEqual(true_qf_closed(1.0, 3.0), 1.0 / (2.0 * math.pi * 3.0), places=14)

    def test_quadrature_agrees_with_closed_form(self):
        for alpha in (0.5, 1.0, 1.5, 2.0):
            for S in (1.0, 2.0, 5.6):
                with self.subTest(alpha=alpha, S=S):
                    closed = true_qf_closed(alpha, S)
                    self.assertTrue(math.isclose(true_qf_quadrature(alpha, S), closed, rel_tol=1e-8))

    def test_decreasing_in_norm_sum(self):
        values = [true_qf_closed(1.5, S) for S in (1.0, 1.5, 2.0, 4.0, 10.0)]
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_renyi(self):
        S = norm_sum(0.5, 2.5)
        self.assertAlmostEqual(true_renyi(0.5, S), -math.log(true_qf_closed(0.5, S)), places=14)

    def test_invalid_arguments(self):
        with self.assertRaises(ValidationError):
            true_qf_closed(2.5, 1.0)
        with self.assertRaises(ValidationError):
            true_qf_closed(1.5, 0.5)
        with self.assertRaises(ValidationError):
            true_qf_quadrature(0.0, 1.0)


class TestClassifyLimit(unittest.TestCase):

    def test_cases(self):
        case = classify_limit(1.5, 0.9)
        self.assertIs(case.case_id, CaseId.CASE1)
        self.assertAlmostEqual(case.rate_exponent, 0.9 - 2.0 / 3.0, places=14)
        self.assertEqual(case.limit_index, 1.5)

        case = classify_limit(1.5, 1.2)
        self.assertIs(case.case_id, CaseId.CASE2)
        self.assertAlmostEqual(case.rate_exponent, 1.0 - 1.0 / 1.8, places=14)
        self.assertAlmostEqual(case.limit_index, 1.8, places=14)

        case = classify_limit(0.5, 3.0)
        self.assertIs(case.case_id, CaseId.CASE3)
        self.assertAlmostEqual(case.rate_exponent, 1.0 / 3.0, places=14)
        self.assertAlmostEqual(case.limit_index, 1.5, places=14)

    def test_boundaries_not_covered(self):
        for alpha, beta in ((1.5, 1.0), (1.5, 2.0 / 1.5), (0.5, 4.0), (1.0, 1.5), (2.0, 0.75), (0.5, 1.9)):
            with self.subTest(alpha=alpha, beta=beta):
                with self.assertRaises(NotCoveredError):
                    classify_limit(alpha, beta)

    def test_random_grid_rate_positive(self):
        rng = np.random.default_rng(7)
        covered = 0
        for _ in range(1000):
            alpha = float(rng.uniform(0.05, 1.95))
            beta = float(rng.uniform(1.0, 2.0)) / alpha
            try:
                case = classify_limit(alpha, beta)
            except NotCoveredError:
                continue
            covered += 1
            self.assertGreater(case.rate_exponent, 0.0)
            self.assertTrue(1.0 < case.limit_index < 2.0)
        self.assertGreater(covered, 0)


class TestConstants(unittest.TestCase):

    def test_sigma_tilde_extended_precision(self):
        alpha, beta = 1.5, 1.2
        s = mpmath.mpf(alpha) * mpmath.mpf(beta)
        inner = (s - 1) / (mpmath.gamma(2 - s) * abs(mpmath.cos(mpmath.pi * s / 2)) * mpmath.mpf(beta) ** s)
        expected = float(inner ** (1 / s))
        self.assertTrue(math.isclose(sigma_tilde(alpha, beta), expected, rel_tol=1e-12))

    def test_sigma_tilde_c0_scaling(self):
        ratio = sigma_tilde(1.5, 1.2, 2.0) / sigma_tilde(1.5, 1.2, 1.0)
        self.assertTrue(math.isclose(ratio, 2.0 ** (1.0 / 1.2), rel_tol=1e-12))

    def test_sigma_tilde_near_lower_boundary(self):
        value = sigma_tilde(1.5, 1.001 / 1.5)
        self.assertTrue(math.isfinite(value))
        self.assertGreater(value, 0.0)

    def test_sigma_tilde_rejects_outside_range(self):
        with self.assertRaises(ValidationError):
            sigma_tilde(1.5, 0.6)
        with self.assertRaises(ValidationError):
            sigma_tilde(0.5, 4.0)
        with self.assertRaises(ValidationError):
            sigma_tilde(1.5, 1.2, 0.0)

    def test_c_f_quadrature_matches_closed_form(self):
        for alpha, beta in ((1.5, 1.3), (0.5, 3.0)):
            with self.subTest(alpha=alpha, beta=beta):
                S = norm_sum(alpha, beta)
                c_plus, c_minus = c_f_constants(alpha, beta, S)
                self.assertEqual(c_plus, c_minus)
                self.assertLess(c_plus, 0.0)
                self.assertTrue(math.isclose(c_plus, c_f_closed(alpha, beta, S), rel_tol=1e-6))

    def test_c_f_rejects_case1(self):
        with self.assertRaises(NotCoveredError):
            c_f_constants(1.5, 0.9, norm_sum(1.5, 0.9))
        with self.assertRaises(NotCoveredError):
            c_f_closed(1.5, 0.9, norm_sum(1.5, 0.9))

    def test_limit_theorem_report(self):
        report = limit_theorem_report(1.5, 0.9, norm_sum(1.5, 0.9))
        self.assertEqual(report["case"], "Case1")
        self.assertNotIn("c_f_plus", report)

        S = norm_sum(1.5, 1.3)
        report = limit_theorem_report(1.5, 1.3, S)
        self.assertEqual(report["case"], "Case2")
        self.assertAlmostEqual(report["limit_index"], 1.95, places=12)
        self.assertEqual(report["c_f_plus"], report["c_f_minus"])
        self.assertEqual(report["sigma_tilde"], sigma_tilde(1.5, 1.3))


class TestValidateBandwidth(unittest.TestCase):

    def test_default_rule_passes_limit_theorem_for_table_pairs(self):
        for alpha, beta in TABLE_TRUTHS:
            with self.subTest(alpha=alpha, beta=beta):
                check = validate_bandwidth(alpha, beta, PaperDefault(), BandwidthPurpose.LIMIT_THEOREM)
                self.assertTrue(check.ok)
                self.assertEqual(check.exponent, 0.2)

    def test_case3_threshold(self):
        check = validate_bandwidth(0.5, 2.5, PaperDefault(), "limit_theorem")
        self.assertAlmostEqual(check.required_exponent, 0.0375, places=14)
        self.assertFalse(validate_bandwidth(0.5, 2.5, PowerRule(0.03), "limit_theorem").ok)

    def test_centering_replacement_violated(self):
        check = validate_bandwidth(1.5, 1.3, PaperDefault(), BandwidthPurpose.CENTERING_REPLACEMENT)
        self.assertFalse(check.ok)
        self.assertAlmostEqual(check.required_exponent, 0.95 / 3.9, places=12)
        self.assertIn("(ab-1)/(2ab)", check.condition)

    def test_case_free_conditions_reported(self):
        check = validate_bandwidth(0.5, 2.5, PaperDefault(), "limit_theorem")
        self.assertEqual(check.general_exponent, 0.05)
        self.assertTrue(check.general_ok)
        self.assertFalse(validate_bandwidth(0.5, 2.5, PowerRule(0.05), "limit_theorem").general_ok)

        check = validate_bandwidth(0.5, 2.5, PaperDefault(), "centering_replacement")
        self.assertEqual(check.general_exponent, 0.25)
        self.assertFalse(check.general_ok)
        boundary = validate_bandwidth(0.5, 2.5, PowerRule(0.25), "centering_replacement")
        self.assertTrue(boundary.general_ok)
        self.assertEqual(boundary.to_dict()["general_condition"], "h_n = O(n^{-1/4})")

    def test_fast_rule_violates_n_h_n(self):
        check = validate_bandwidth(1.5, 1.3, PowerRule(1.0), "limit_theorem")
        self.assertFalse(check.ok)
        self.assertEqual(check.required_exponent, 1.0)

    def test_case1_warning(self):
        with self.assertLogs(level="WARNING") as logs:
            check = validate_bandwidth(1.5, 0.9, PaperDefault(), "limit_theorem")
        self.assertIsNotNone(check.warning)
        self.assertTrue(any("eta" in line for line in logs.output))
        self.assertEqual(check.to_dict()["warning"], check.warning)

    def test_unsupported_and_uncovered(self):
        with self.assertRaises(UnsupportedBandwidthRuleError):
            validate_bandwidth(1.5, 1.3, FixedRule(0.2), "limit_theorem")
        with self.assertRaises(NotCoveredError):
            validate_bandwidth(1.5, 1.5, PaperDefault(), "limit_theorem")
        with self.assertRaises(ValueError):
            validate_bandwidth(1.5, 1.3, PaperDefault(), "other")


if __name__ == '__main__':
    unittest.main()
