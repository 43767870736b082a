import math
import unittest

import numpy as np

from scipy.linalg import expm

from config.translations import FREQUENCY_ALIASES
from scripts.dynamics import TimeGrid, evolve, evolve_series, overlap, overlap_series, sup_overlap
from scripts.eigensolve import eigh_tridiagonal
from scripts.hamiltonian import OperatorSpec, build
from tests.oracles import rk4_evolve
from utils.errors import DomainError


GOLDEN = FREQUENCY_ALIASES["golden"]


def _system(n_min: int, n_max: int, theta: float = 0.3, lam: float = 2.0):
    H = build(OperatorSpec(lam, GOLDEN, theta, n_min, n_max))
    return H, eigh_tridiagonal(H)


class TestTimeGrid(unittest.TestCase):
    def test_grid(self):
        grid = TimeGrid(10.0, 11)
        self.assertEqual(grid.times[0], 0.0)
        self.assertEqual(grid.times[-1], 10.0)
        self.assertAlmostEqual(grid.spacing, 1.0)

    def test_defaults_scale_with_dimension(self):
        grid = TimeGrid.for_dimension(201)
        self.assertEqual(grid.t_max, 2010.0)
        self.assertEqual(grid.count, 1000)

    def test_validation(self):
        with self.assertRaises(DomainError):
            TimeGrid(10.0, 1)
        with self.assertRaises(DomainError):
            TimeGrid(0.0, 10)


class TestEvolve(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.H, cls.eig = _system(-50, 49)
        rng = np.random.default_rng(9)
        psi = rng.normal(size=100) + 1j * rng.normal(size=100)
        cls.psi = psi / np.linalg.norm(psi)

    def test_identity_at_zero(self):
        np.testing.assert_allclose(evolve(self.eig, self.psi, 0.0), self.psi, atol=1e-12)

    def test_scalar_phase(self):
        _, eig = _system(0, 0, theta=0.0)
        np.testing.assert_allclose(evolve(eig, [1.0], math.pi), [1.0 + 0j], atol=1e-12)

    def test_norm_preserved(self):
        for t in (0.5, 7.3, 123.0, 2000.0):
            self.assertAlmostEqual(np.linalg.norm(evolve(self.eig, self.psi, t)), 1.0, delta=1e-10)

    def test_matches_runge_kutta(self):
        reference = rk4_evolve(self.H.to_dense(), self.psi, 7.3)
        np.testing.assert_allclose(evolve(self.eig, self.psi, 7.3), reference, atol=1e-6)

    def test_group_law(self):
        stepped = evolve(self.eig, evolve(self.eig, self.psi, 3.1), 4.7)
        np.testing.assert_allclose(stepped, evolve(self.eig, self.psi, 7.8), atol=1e-9)

    def test_series_matches_single_times(self):
        times = [0.0, 1.5, 9.0]
        series = evolve_series(self.eig, self.psi, times)
        for j, t in enumerate(times):
            np.testing.assert_allclose(series[:, j], evolve(self.eig, self.psi, t), atol=1e-12)

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            evolve(self.eig, np.ones(99), 1.0)


class TestOverlap(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.H, cls.eig = _system(-30, 30)

    def test_orthonormal_at_zero(self):
        self.assertAlmostEqual(overlap(self.eig, 4, 4, 0.0), 1.0, delta=1e-12)
        self.assertAlmostEqual(abs(overlap(self.eig, 4, 9, 0.0)), 0.0, delta=1e-12)

    def test_bounded_by_one(self):
        values = overlap_series(self.eig, -3, 8, np.linspace(0.0, 500.0, 400))
        self.assertTrue(np.all(np.abs(values) <= 1.0 + 1e-12))

    def test_conjugate_symmetry(self):
        for t in (0.3, 17.0):
            self.assertAlmostEqual(overlap(self.eig, 2, -5, t), np.conj(overlap(self.eig, -5, 2, -t)), delta=1e-12)

    def test_two_level_closed_form(self):
        H, eig = _system(0, 1, theta=0.1)
        for t in (0.4, 2.5):
            U = expm(-1j * t * H.to_dense())
            self.assertAlmostEqual(overlap(eig, 0, 1, t), U[0, 1], delta=1e-12)

    def test_out_of_window(self):
        with self.assertRaises(DomainError):
            overlap(self.eig, 0, 31, 1.0)


class TestSupOverlap(unittest.TestCase):
    def test_diagonal(self):
        _, eig = _system(-20, 20)
        result = sup_overlap(eig, 3, 3, TimeGrid(50.0, 100))
        self.assertAlmostEqual(result.grid_max, 1.0, delta=1e-12)
        self.assertEqual(result.argmax_t, 0.0)
        self.assertGreaterEqual(result.certified_bound, 1.0 - 1e-12)

    def test_two_level_beat(self):
        H, eig = _system(0, 1, theta=0.1)
        gap = eig.values[1] - eig.values[0]
        a = eig.vectors[0]
        b = eig.vectors[1]
        analytic = abs(a[0] * b[0]) + abs(a[1] * b[1])
        grid = TimeGrid(math.pi / gap, 2001)
        result = sup_overlap(eig, 0, 1, grid)
        self.assertAlmostEqual(result.grid_max, analytic, delta=1e-6)
        self.assertAlmostEqual(result.certified_bound, analytic, delta=1e-12)

    def test_grid_never_exceeds_certificate(self):
        _, eig = _system(-100, 100)
        grid = TimeGrid(1000.0, 1000)
        for k, l in ((0, 20), (-10, 10), (5, 6)):
            result = sup_overlap(eig, k, l, grid)
            self.assertLessEqual(result.grid_max, result.certified_bound + 1e-12)


if __name__ == '__main__':
    unittest.main()
