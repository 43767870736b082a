import math
import unittest

from fractions import Fraction
from unittest import mock

import numpy as np

from config.translations import FREQUENCY_ALIASES
from scripts.arithmetic import (MAX_COMPENSATED_Q, DiophantineParams, Frequency, allowed_windows, beta_estimate,
                                continued_fraction, diophantine_check, empirical_resonant_fraction, frac_times,
                                norm_dist, resonance_distance, resonances, resonant_phase_measure,
                                undoubled_measure)
from tests.oracles import mp_frac_times, mp_resonant_set
from utils.errors import DomainError


GOLDEN = FREQUENCY_ALIASES["golden"]
SQRT2 = FREQUENCY_ALIASES["sqrt2"]


def _from_quotients(quotients) -> float:
    value = Fraction(0)
    for a in reversed(quotients):
        value = 1 / (a + value)
    return float(value)


class TestFracTimes(unittest.TestCase):
    def test_matches_high_precision(self):
        qs = np.random.default_rng(3).integers(-10 ** 6, 10 ** 6, size=200)
        ours = frac_times(qs, GOLDEN)
        for q, value in zip(qs, ours):
            self.assertAlmostEqual(value, mp_frac_times(int(q), GOLDEN), delta=1e-15)

    def test_large_multipliers_use_fallback(self):
        for q in (MAX_COMPENSATED_Q, 3 * MAX_COMPENSATED_Q + 7, -(10 ** 12)):
            self.assertAlmostEqual(frac_times(q, SQRT2), mp_frac_times(q, SQRT2), delta=1e-15)

    def test_scalar_in_scalar_out(self):
        self.assertIsInstance(frac_times(5, GOLDEN), float)
        self.assertEqual(frac_times(np.array([0, 1]), 0.25).shape, (2,))

    def test_norm_dist(self):
        self.assertEqual(norm_dist(1, 0.25), 0.25)
        self.assertEqual(norm_dist(2, 0.25), 0.5)
        self.assertEqual(norm_dist(4, 0.25), 0.0)


class TestContinuedFraction(unittest.TestCase):
    def test_golden_mean_is_all_ones(self):
        cf = continued_fraction(GOLDEN, 20)
        self.assertEqual(cf.partial_quotients, [1] * 20)
        fib = [1, 1]
        while len(fib) < 22:
            fib.append(fib[-1] + fib[-2])
        self.assertEqual(cf.denominators, fib[1:21])
        self.assertFalse(cf.truncated)

    def test_sqrt2_minus_one_is_all_twos(self):
        self.assertEqual(continued_fraction(SQRT2, 15).partial_quotients, [2] * 15)

    def test_rational_input_truncates(self):
        cf = continued_fraction(0.25, 10)
        self.assertEqual(cf.partial_quotients, [4])
        self.assertEqual(cf.convergents, [(1, 4)])
        self.assertTrue(cf.truncated)
        self.assertTrue(Frequency.from_value(0.25).rational)

    def test_convergents_approach_alpha(self):
        for p, q in continued_fraction(SQRT2, 12).convergents[1:]:
            self.assertLess(abs(SQRT2 - p / q), 1.0 / q ** 2)

    def test_convergents_are_best_approximations(self):
        qs = np.arange(1, 10 ** 4 + 1)
        for alpha in (GOLDEN, SQRT2, math.pi - 3):
            dists = norm_dist(qs, alpha)
            denominators = continued_fraction(alpha, 30).denominators
            for (p, q), q_next in zip(continued_fraction(alpha, 30).convergents, denominators[1:]):
                if q_next > 10 ** 4:
                    break
                self.assertAlmostEqual(dists[q - 1], abs(q * alpha - p), delta=1e-11)
                self.assertGreaterEqual(dists[:q_next - 1].min(), dists[q - 1] - 1e-15, msg=(alpha, q))

    def test_domain_errors(self):
        with self.assertRaises(DomainError):
            continued_fraction(1.5, 5)
        with self.assertRaises(DomainError):
            continued_fraction(GOLDEN, 0)


class TestBetaAndDiophantine(unittest.TestCase):
    def test_beta_is_monotone_in_horizon(self):
        values = [beta_estimate(GOLDEN, Q).value for Q in (1, 10, 100, 1000, 100000)]
        self.assertEqual(values, sorted(values))
        self.assertAlmostEqual(values[0], -math.log(1.0 - GOLDEN), places=12)

    def test_beta_golden_attained_at_one(self):
        estimate = beta_estimate(GOLDEN, 100000)
        self.assertEqual(estimate.argmax_q, 1)
        self.assertFalse(estimate.infinite)

    def test_beta_rational_is_infinite(self):
        estimate = beta_estimate(0.25, 50)
        self.assertTrue(estimate.infinite)
        self.assertEqual(estimate.argmax_q, 4)
        self.assertEqual(estimate.value, math.inf)

    def test_diophantine_golden(self):
        report = diophantine_check(GOLDEN, DiophantineParams(0.3, 1.0), 1000)
        self.assertTrue(report.holds)
        self.assertEqual(report.worst_q, 1)
        self.assertAlmostEqual(report.worst_value, 1.0 - GOLDEN, places=12)
        self.assertFalse(diophantine_check(GOLDEN, DiophantineParams(0.4, 1.0), 1000).holds)

    def test_beta_spikes_on_large_quotient(self):
        alpha = _from_quotients([1, 1, 10 ** 6] + [1] * 10)
        self.assertEqual(continued_fraction(alpha, 4).partial_quotients[:3], [1, 1, 10 ** 6])
        small = beta_estimate(alpha, 1)
        spiked = beta_estimate(alpha, 1000)
        self.assertLess(small.value, 1.0)
        self.assertEqual(spiked.argmax_q, 2)
        self.assertGreaterEqual(spiked.value, math.log(10 ** 6) / 2)
        self.assertAlmostEqual(spiked.value, math.log(2 * 10 ** 6 + 1) / 2, delta=1e-5)

    def test_diophantine_beyond_compensated_range(self):
        expected = diophantine_check(SQRT2, DiophantineParams(0.1, 1.0), 3000)
        with mock.patch("scripts.arithmetic.MAX_COMPENSATED_Q", 1000), \
                mock.patch("scripts.arithmetic.DIOPHANTINE_BLOCK", 700):
            report = diophantine_check(SQRT2, DiophantineParams(0.1, 1.0), 3000)
        self.assertEqual(report.worst_q, expected.worst_q)
        self.assertAlmostEqual(report.worst_value, expected.worst_value, delta=1e-12)
        self.assertEqual(report.holds, expected.holds)
        self.assertEqual(report.horizon, 3000)
        with self.assertRaises(DomainError):
            diophantine_check(SQRT2, DiophantineParams(0.1, 1.0), 0)

    def test_diophantine_params_validated(self):
        with self.assertRaises(DomainError):
            DiophantineParams(0.0, 1.0)


class TestResonances(unittest.TestCase):
    def test_half_multiple_is_resonant(self):
        theta = (frac_times(7, GOLDEN) % 1.0) / 2.0
        self.assertLess(resonance_distance(theta, 7, GOLDEN), 1e-12)
        self.assertIn(7, resonances(theta, GOLDEN, 0.5, 20).resonant_k)

    def test_zero_always_resonant(self):
        for theta in np.linspace(0.0, 0.99, 7):
            self.assertIn(0, resonances(theta, GOLDEN, 2.0, 10).resonant_k)

    def test_matches_high_precision_oracle(self):
        report = resonances(0.3, GOLDEN, 0.5, 100)
        self.assertEqual(report.resonant_k, mp_resonant_set(0.3, GOLDEN, 0.5, 100))
        self.assertEqual(report.resonant_k, sorted(report.resonant_k))

    def test_stronger_eta_gives_subset(self):
        etas = (0.05, 0.2, 0.5, 1.0, 2.0)
        for theta in (0.0, 0.1, 0.3, (frac_times(7, GOLDEN) % 1.0) / 2.0, 0.77):
            sets = [set(resonances(theta, GOLDEN, eta, 200).resonant_k) for eta in etas]
            for weaker, stronger in zip(sets, sets[1:]):
                self.assertLessEqual(stronger, weaker, msg=theta)

    def test_horizon_validated(self):
        with self.assertRaises(DomainError):
            resonances(0.3, GOLDEN, 0.5, 0)
        with self.assertRaises(DomainError):
            resonances(0.3, GOLDEN, 0.0, 10)

    def test_allowed_windows(self):
        windows = allowed_windows([0, 3, -10, 40], 1.0, 100)
        self.assertEqual([(w.lower, w.upper) for w in windows], [(1, 3), (4, 10), (11, 40), (41, 100)])
        self.assertEqual([w.closed for w in windows], [True, True, True, False])
        self.assertTrue(windows[1].contains(7))
        self.assertEqual(allowed_windows([0, 3, -10, 40], 2.0, 100), [])
        with self.assertRaises(DomainError):
            allowed_windows([0], 0.5, 10)


class TestResonantMeasure(unittest.TestCase):
    def test_analytic_measure(self):
        self.assertAlmostEqual(resonant_phase_measure(5, 1.0), 2.0 * math.exp(-5.0))
        self.assertEqual(resonant_phase_measure(1, 0.1), 1.0)
        self.assertAlmostEqual(undoubled_measure(-5, 1.0), math.exp(-5.0))
        with self.assertRaises(DomainError):
            resonant_phase_measure(0, 1.0)

    def test_monte_carlo_agrees(self):
        for eta, k in ((1.0, 5), (1.0, 10), (0.5, 15)):
            estimate = empirical_resonant_fraction(k, GOLDEN, eta, 100000, seed=11)
            self.assertTrue(estimate.within(3.0), msg=(eta, k, estimate))


if __name__ == '__main__':
    unittest.main()
