import math
import unittest

import numpy as np

from lrd_entropy.estimator import (
    BoxcarKernel,
    EstimatorConfig,
    FixedRule,
    GaussianKernel,
    PaperDefault,
    PowerRule,
    TableKernel,
    bandwidth,
    centered_representation,
    estimate_qf,
    kernel_eval,
    renyi_entropy,
)
from lrd_entropy.exceptions import NonPositiveEstimateError, TooFewSamplesError, ValidationError
from lrd_entropy.stable_core import StableDensity, StableParams


def naive_qf(x, config):
    """Reference double loop over i > j."""
    n = len(x)
    h = bandwidth(config, n)
    scaled = [(x[i] - x[j]) / h for i in range(n) for j in range(i)]
    weights = config.kernel.evaluate(np.array(scaled))
    return math.fsum(weights.tolist()) * (2.0 / (n * (n - 1) * h))


class TestKernels(unittest.TestCase):

    def test_gaussian_peak(self):
        self.assertAlmostEqual(kernel_eval(GaussianKernel(), 0.0), 1.0 / math.sqrt(2.0 * math.pi), places=15)

    def test_boxcar(self):
        kernel = BoxcarKernel(2.0)
        np.testing.assert_array_equal(kernel_eval(kernel, [-2.0, 0.0, 2.5]), [0.25, 0.25, 0.0])
        with self.assertRaises(ValidationError):
            BoxcarKernel(0.0)

    def test_table_kernel_renormalised(self):
        kernel = TableKernel.from_points([-1.0, 0.0, 1.0], [0.0, 2.0, 0.0])
        self.assertAlmostEqual(kernel.raw_integral, 2.0)
        self.assertAlmostEqual(kernel_eval(kernel, 0.0), 1.0)
        self.assertAlmostEqual(kernel_eval(kernel, 0.5), 0.5)
        self.assertEqual(kernel_eval(kernel, 3.0), 0.0)
        self.assertFalse(kernel.signed())

    def test_table_kernel_validation(self):
        with self.assertRaises(ValidationError):
            TableKernel.from_points([-1.0, 0.0, 1.0], [0.0, 1.0, 0.5])
        with self.assertRaises(ValidationError):
            TableKernel.from_points([-1.0, 0.5, 1.0], [0.0, 1.0, 0.0])
        with self.assertRaises(ValidationError):
            TableKernel.from_points([-1.0, 1.0], [1.0, 1.0])
        with self.assertRaises(ValidationError):
            TableKernel.from_points([-1.0, 0.0, 1.0], [0.0, math.inf, 0.0])

    def test_signed_table_kernel(self):
        kernel = TableKernel.from_points([-2.0, -1.0, 0.0, 1.0, 2.0], [-0.1, 0.5, 1.0, 0.5, -0.1])
        self.assertTrue(kernel.signed())


class TestBandwidth(unittest.TestCase):

    def test_rules(self):
        self.assertAlmostEqual(bandwidth(EstimatorConfig(), 1000), 1000 ** -0.2, places=15)
        self.assertEqual(PaperDefault().exponent, 0.2)
        self.assertAlmostEqual(PowerRule(0.5).bandwidth(400), 0.05)
        self.assertEqual(FixedRule(0.3).bandwidth(10**6), 0.3)

    def test_invalid(self):
        with self.assertRaises(ValidationError):
            PowerRule(0.0)
        with self.assertRaises(ValidationError):
            FixedRule(-1.0)
        with self.assertRaises(ValidationError):
            bandwidth(EstimatorConfig(), 1)


class TestEstimateQf(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(2024)
        self.config = EstimatorConfig()

    def test_single_pair(self):
        config = EstimatorConfig(bandwidth_rule=FixedRule(1.0))
        self.assertAlmostEqual(estimate_qf([0.0, 0.0], config), 0.3989422804014327, places=15)

    def test_three_point_path(self):
        config = EstimatorConfig(bandwidth_rule=FixedRule(1.0))
        expected = (2.0 * math.exp(-0.5) + math.exp(-2.0)) / (3.0 * math.sqrt(2.0 * math.pi))
        self.assertAlmostEqual(estimate_qf([0.0, 1.0, 2.0], config), expected, places=14)
        self.assertAlmostEqual(estimate_qf([0.0, 1.0, 2.0], config), 0.179311, places=6)

    def test_permutation_invariance(self):
        config = EstimatorConfig()
        x = self.rng.standard_cauchy(700)
        shuffled = self.rng.permutation(x)
        self.assertTrue(math.isclose(estimate_qf(shuffled, config), estimate_qf(x, config), rel_tol=1e-12))

    def test_bit_exact_against_naive_loop(self):
        boxcar = EstimatorConfig(kernel=BoxcarKernel(), bandwidth_rule=FixedRule(0.7))
        for _ in range(100):
            n = int(self.rng.integers(2, 65))
            x = self.rng.standard_cauchy(n)
            self.assertEqual(estimate_qf(x, self.config), naive_qf(x, self.config))
            self.assertEqual(estimate_qf(x, boxcar), naive_qf(x, boxcar))

    def test_independent_of_workers(self):
        x = self.rng.standard_normal(700)
        serial = estimate_qf(x, self.config, workers=1)
        self.assertEqual(estimate_qf(x, self.config, workers=4), serial)
        self.assertEqual(estimate_qf(x, self.config, workers=8), serial)

    def test_blocked_close_to_naive_on_many_tiles(self):
        x = self.rng.standard_normal(600)
        self.assertTrue(math.isclose(estimate_qf(x, self.config), naive_qf(x, self.config), rel_tol=1e-14))

    def test_translation_invariance(self):
        x = self.rng.standard_normal(300)
        self.assertTrue(math.isclose(estimate_qf(x + 10.0, self.config), estimate_qf(x, self.config), rel_tol=1e-12))

    def test_bandwidth_scaling(self):
        x = self.rng.standard_normal(300)
        h = 0.4
        base = estimate_qf(x, EstimatorConfig(bandwidth_rule=FixedRule(h)))
        for scale in (2.0, 3.0):
            scaled = estimate_qf(scale * x, EstimatorConfig(bandwidth_rule=FixedRule(scale * h)))
            self.assertTrue(math.isclose(scale * scaled, base, rel_tol=1e-12))

    def test_consistent_for_gaussian_sample(self):
        # int f^2 = 1 / (2 sqrt(pi)) for the standard normal
        x = self.rng.standard_normal(2000)
        self.assertAlmostEqual(estimate_qf(x, self.config), 1.0 / (2.0 * math.sqrt(math.pi)), delta=0.02)

    def test_too_few_samples(self):
        with self.assertRaises(TooFewSamplesError):
            estimate_qf([1.0], self.config)


class TestRenyi(unittest.TestCase):

    def test_values(self):
        self.assertEqual(renyi_entropy(1.0), 0.0)
        self.assertAlmostEqual(renyi_entropy(math.exp(-2.5)), 2.5, places=14)

    def test_non_positive(self):
        for t in (0.0, -0.1):
            with self.assertRaises(NonPositiveEstimateError):
                renyi_entropy(t)


class TestCenteredRepresentation(unittest.TestCase):

    def test_formula(self):
        model = StableParams(1.5, 2.0)
        x = np.array([-1.0, 0.2, 0.5, 3.0])
        config = EstimatorConfig()
        t_n = estimate_qf(x, config)
        value = centered_representation(x, config, model, truth=0.08, replicate_mean=0.07)
        density = StableDensity(model)(x)
        expected = (t_n - 0.07) - float(np.mean(2.0 * (density - 0.08)))
        self.assertAlmostEqual(value, expected, places=14)

    def test_requires_symmetric_stable_model(self):
        with self.assertRaises(ValidationError):
            centered_representation([0.0, 1.0], EstimatorConfig(), None, 0.1, 0.1)
        with self.assertRaises(ValidationError):
            centered_representation([0.0, 1.0], EstimatorConfig(), StableParams(1.5, 1.0, 0.3), 0.1, 0.1)


if __name__ == '__main__':
    unittest.main()
