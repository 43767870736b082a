import unittest

from config.translations import FREQUENCY_ALIASES
from scripts.dynamics import TimeGrid
from scripts.evaluation import CheckResult, Verdict, _partitions, random_pairs, run_verification
from scripts.expectation import PhasePlan, corrupted_solver, default_solver
from scripts.hamiltonian import OperatorSpec
from utils.errors import DomainError, InvariantViolation


GOLDEN = FREQUENCY_ALIASES["golden"]


class TestVerification(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.spec = OperatorSpec.symmetric(2.0, GOLDEN, 0.3, 30)
        cls.pairs = random_pairs(cls.spec, 10, seed=3)
        cls.grid = TimeGrid(100.0, 200)
        cls.plan = PhasePlan(4, seed=3)

    def test_clean_run_passes(self):
        verdict = run_verification(self.spec, self.pairs, self.grid, self.plan, workers=2)
        self.assertTrue(verdict.passed, msg=verdict.failures)
        names = [check.name for check in verdict.checks]
        for expected in ("eigen_quality", "completeness", "overlap_chain", "averaged_chain", "unitarity",
                         "group_law", "summation_lemma_d1", "summation_closed_form", "summation_lemma_d2",
                         "summation_lemma_d3", "resonant_measure"):
            self.assertIn(expected, names)
        verdict.raise_for_failures()

    def test_corrupted_eigenvectors_fail(self):
        solver = corrupted_solver(default_solver(), column=5)
        verdict = run_verification(self.spec, self.pairs, self.grid, self.plan, solver=solver, workers=2)
        failed = {check.name for check in verdict.checks if not check.passed}
        self.assertIn("eigen_quality", failed)
        self.assertIn("completeness", failed)
        self.assertIn("unitarity", failed)
        self.assertNotIn("overlap_chain", failed)
        with self.assertRaises(InvariantViolation) as caught:
            verdict.raise_for_failures()
        self.assertEqual(caught.exception.exit_code, 3)
        self.assertTrue(any(f.startswith("eigen_quality") for f in caught.exception.failures))

    def test_pairs_validated(self):
        with self.assertRaises(DomainError):
            run_verification(self.spec, [], self.grid, self.plan)
        with self.assertRaises(DomainError):
            run_verification(self.spec, [(0, 16)], self.grid, self.plan)

    def test_random_pairs_in_inner_window(self):
        pairs = random_pairs(self.spec, 200, seed=1)
        self.assertEqual(len(pairs), 200)
        self.assertTrue(all(-15 <= site <= 15 for pair in pairs for site in pair))
        self.assertEqual(pairs, random_pairs(self.spec, 200, seed=1))


class TestVerdict(unittest.TestCase):
    def test_failures_listed(self):
        verdict = Verdict()
        verdict.add(CheckResult("ok", True, 0.0))
        verdict.add(CheckResult("broken", False, 1.0, "too big"))
        self.assertFalse(verdict.passed)
        self.assertEqual(verdict.failures, ["broken: too big"])
        self.assertEqual(verdict.to_dict()["checks"][0]["name"], "ok")

    def test_partitions(self):
        self.assertEqual(sorted(_partitions(3, 2)), [(2, 1), (3, 0)])
        self.assertEqual(sorted(_partitions(4, 3)), [(2, 1, 1), (2, 2, 0), (3, 1, 0), (4, 0, 0)])
        self.assertTrue(all(sum(p) == 10 for p in _partitions(10, 3)))


if __name__ == '__main__':
    unittest.main()
