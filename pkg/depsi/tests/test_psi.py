import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal
from scipy.integrate import trapezoid

from depsi.exceptions import InvalidInputError
from depsi.families import FamilySpec, psi_closed_form, sample
from depsi.models import Dataset, SeedSpec, Variant, grid_from_function
from depsi.nearest_neighbor import indegree_bound_check, nn_index
from depsi.psi import cn_dn_gap, estimate_psi


def two_point_psi():
    return estimate_psi(Dataset([0.0, 1.0], [10.0, 20.0]), SeedSpec(0))


class EstimatePsiTests(SimpleTestCase):

    def test_two_point_atoms(self):
        assert_allclose(two_point_psi().points, [[1 / 3, 2 / 3], [2 / 3, 1 / 3]])

    def test_two_point_evaluation(self):
        psi = two_point_psi()
        self.assertEqual(psi.evaluate(0.4, 0.7), 0.5)
        self.assertEqual(psi.evaluate(1.0, 1.0), 1.0)
        self.assertEqual(psi.evaluate(0.0, 0.0), 0.0)
        self.assertEqual(psi.evaluate(0.5, 0.5), 0.0)

    def test_plain_variant_scales_by_n(self):
        psi = estimate_psi(Dataset([0.0, 1.0], [10.0, 20.0]), SeedSpec(0), Variant.CPLAIN)
        assert_allclose(psi.points, [[0.5, 1.0], [1.0, 0.5]])

    def test_rejects_arguments_outside_unit_square(self):
        with self.assertRaises(InvalidInputError):
            two_point_psi().evaluate(1.2, 0.5)
        with self.assertRaises(InvalidInputError):
            two_point_psi().evaluate(0.5, -0.1)

    def test_rejects_nan_arguments(self):
        psi = two_point_psi()
        for s, t in ((np.nan, 0.5), (0.5, np.nan), ([0.2, np.nan], 0.5)):
            with self.subTest(s=s, t=t), self.assertRaises(InvalidInputError):
                psi.evaluate(s, t)

    def test_monotone_in_each_argument(self):
        ds = sample(FamilySpec.gaussian(0.5), 300, SeedSpec(2))
        psi = estimate_psi(ds, SeedSpec(2))
        rng = np.random.default_rng(0)
        s, t, h = rng.random(200), rng.random(200), rng.random(200)
        self.assertTrue(np.all(psi.evaluate(s, t) <= psi.evaluate(np.maximum(s, h), t)))
        self.assertTrue(np.all(psi.evaluate(s, t) <= psi.evaluate(s, np.maximum(t, h))))


class ToGridTests(SimpleTestCase):

    def test_corner_grid(self):
        assert_array_equal(two_point_psi().to_grid(1).values, [[0.0, 0.0], [0.0, 1.0]])

    def test_three_grid_node(self):
        self.assertEqual(two_point_psi().to_grid(3).values[1][2], 0.5)

    def test_grid_matches_pointwise_evaluation(self):
        ds = sample(FamilySpec.marshall_olkin(1.0, 0.4), 80, SeedSpec(4))
        for variant in (Variant.DSTAR, Variant.CPLAIN):
            psi = estimate_psi(ds, SeedSpec(4), variant)
            for survival in (False, True):
                grid = psi.to_grid(9, survival=survival)
                s, t = np.meshgrid(grid.nodes, grid.nodes, indexing='ij')
                assert_allclose(grid.values, psi.evaluate(s, t, survival=survival), atol=1e-12)

    def test_survival_form_has_copula_corners(self):
        ds = sample(FamilySpec.efgm(1.0, 2), 60, SeedSpec(1))
        grid = estimate_psi(ds, SeedSpec(1)).to_grid(5, survival=True)
        self.assertAlmostEqual(grid.values[0][0], 0.0, places=12)
        self.assertAlmostEqual(grid.values[-1][-1], 1.0, places=12)

    def test_exact_integrals_match_fine_grid(self):
        ds = sample(FamilySpec.frechet(0.3, 0.2), 150, SeedSpec(6))
        psi = estimate_psi(ds, SeedSpec(6))
        grid = psi.to_grid(3000)
        nodes = grid.nodes
        self.assertAlmostEqual(psi.diagonal_integral(), trapezoid(grid.diagonal, nodes), delta=2e-3)
        self.assertAlmostEqual(psi.anti_diagonal_integral(), trapezoid(grid.anti_diagonal, nodes), delta=2e-3)


class GapTests(SimpleTestCase):

    def test_two_points(self):
        self.assertLessEqual(cn_dn_gap(Dataset([0.0, 1.0], [3.0, 1.0]), SeedSpec(0)), 1.5)

    def test_sorted_one_dimensional_data(self):
        x = np.sort(np.random.default_rng(0).random(100))
        self.assertLessEqual(cn_dn_gap(Dataset(x, x), SeedSpec(0)), 0.03)

    def test_gap_within_indegree_bound(self):
        for seed in range(5):
            ds = sample(FamilySpec.gaussian(0.4, 2), 250, SeedSpec(seed))
            report = indegree_bound_check(nn_index(ds.x, SeedSpec(seed)), ds.d)
            gap = cn_dn_gap(ds, SeedSpec(seed))
            self.assertLessEqual(gap, (report.max_indegree + 1) / ds.n + 1e-12)


class ClosedFormPsiPropertyTests(SimpleTestCase):
    families = (
        FamilySpec.gaussian(0.6),
        FamilySpec.gaussian(-0.2, 3),
        FamilySpec.marshall_olkin(1.0, 0.4),
        FamilySpec.marshall_olkin(0.3, 0.6),
        FamilySpec.frechet(0.3, 0.2),
        FamilySpec.efgm(1.0, 1),
    )

    def test_diagonal_lower_bound_on_estimates(self):
        n = 2000
        t = np.linspace(0.0, 1.0, 41)
        for fam in self.families:
            psi = estimate_psi(sample(fam, n, SeedSpec(12)), SeedSpec(12))
            with self.subTest(family=str(fam)):
                self.assertTrue(np.all(psi.evaluate(t, t) >= t ** 2 - 3 / np.sqrt(n)))

    def test_hoelder_diagonal_domination(self):
        for fam in self.families:
            grid = grid_from_function(psi_closed_form(fam), 40)
            diag = grid.diagonal
            with self.subTest(family=str(fam)):
                self.assertTrue(np.all(grid.values ** 2 <= np.outer(diag, diag) + 1e-9))
