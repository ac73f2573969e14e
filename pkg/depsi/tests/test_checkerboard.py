import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from depsi.checkerboard import (
    CheckerboardCopula,
    CheckerboardDensity,
    discretize,
    oracle_distances,
    psi_checkerboard,
)
from depsi.exceptions import InvalidInputError, NoClosedFormError
from depsi.families import FamilySpec, comonotone, efgm_copula, independence
from depsi.measures import spearman_rho
from depsi.models import grid_from_function


class DiscretizeTests(SimpleTestCase):

    def test_efgm_cells_match_inclusion_exclusion(self):
        N = 4
        grid = grid_from_function(efgm_copula(1.0), N)
        expected = np.diff(np.diff(grid.values, axis=0), axis=1)
        assert_allclose(discretize(FamilySpec.efgm(1.0), N).masses, expected, atol=1e-15)

    def test_efgm_in_higher_dimension_has_uniform_slabs(self):
        cb = discretize(FamilySpec.efgm(-0.8, 3), 5)
        self.assertEqual(cb.masses.shape, (125, 5))
        cb.check_margins()

    def test_gaussian_covariate_vector_cannot_be_discretized(self):
        with self.assertRaises(NoClosedFormError):
            discretize(FamilySpec.gaussian(0.5, 2), 10)

    def test_bivariate_families_have_uniform_margins(self):
        for fam in ('gauss:r=0.6', 'mo:a=0.3,b=0.6', 'frechet:a=0.3,b=0.2'):
            with self.subTest(family=fam):
                discretize(fam, 20).check_margins()


class CheckerboardDensityTests(SimpleTestCase):

    def test_total_mass_violation(self):
        with self.assertRaisesMessage(InvalidInputError, 'total mass'):
            CheckerboardDensity(2, 1, [[0.5, 0.0], [0.0, 0.4]]).check_margins()

    def test_slab_violation_names_axis(self):
        with self.assertRaisesMessage(InvalidInputError, 'response axis, slab 0'):
            CheckerboardDensity(2, 1, [[0.5, 0.0], [0.25, 0.25]]).check_margins()

    def test_shape_and_sign(self):
        with self.assertRaises(InvalidInputError):
            CheckerboardDensity(2, 2, np.full((2, 2), 0.25))
        with self.assertRaises(InvalidInputError):
            CheckerboardDensity(2, 1, [[0.75, -0.25], [-0.25, 0.75]])


class PsiCheckerboardTests(SimpleTestCase):

    def test_independence_maps_to_independence(self):
        N = 8
        cb = CheckerboardDensity(N, 2, np.full((N ** 2, N), 1.0 / N ** 3))
        grid = psi_checkerboard(cb).to_grid(N)
        assert_allclose(grid.values, grid_from_function(independence, N).values, atol=1e-14)

    def test_comonotone_maps_to_comonotone_on_nodes(self):
        N = 10
        grid = psi_checkerboard(discretize('frechet:a=1,b=0', N)).to_grid(N)
        assert_allclose(grid.values, grid_from_function(comonotone, N).values, atol=1e-12)

    def test_efgm_spearman_rho(self):
        oracle = psi_checkerboard(discretize(FamilySpec.efgm(1.0), 100))
        self.assertAlmostEqual(oracle.spearman_rho(), 1 / 9, delta=0.01)

    def test_exact_spearman_rho_matches_grid_integral(self):
        oracle = psi_checkerboard(discretize('mo:a=0.3,b=0.6', 12))
        self.assertAlmostEqual(oracle.spearman_rho(), spearman_rho(oracle.to_grid(480)), delta=1e-4)

    def test_evaluate_agrees_with_grid(self):
        oracle = psi_checkerboard(discretize('frechet:a=0.3,b=0.2', 6))
        grid = oracle.to_grid(12)
        s, t = np.meshgrid(grid.nodes, grid.nodes, indexing='ij')
        assert_allclose(oracle(s, t), grid.values, atol=1e-14)
        self.assertIsInstance(oracle.evaluate(0.5, 0.5), float)

    def test_output_is_a_copula(self):
        oracle = psi_checkerboard(discretize(FamilySpec.efgm(-1.0, 2), 7))
        self.assertIsInstance(oracle, CheckerboardCopula)
        oracle.to_grid(21).check_invariants()


class OracleDistanceTests(SimpleTestCase):

    def test_oracle_converges_to_closed_form(self):
        for fam in (FamilySpec.frechet(0.3, 0.2), FamilySpec.efgm(1.0)):
            with self.subTest(family=str(fam)):
                coarse, middle, fine = oracle_distances(fam)
                self.assertLessEqual(middle, coarse)
                self.assertLess(fine, coarse)
                self.assertLessEqual(fine, 0.02)
