import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose, assert_array_equal
from scipy.stats import kstest, spearmanr

from depsi.exceptions import InvalidFamilyError, NoClosedFormError
from depsi.families import (
    FamilySpec,
    bertino_bound,
    closed_form_measures,
    comonotone,
    family_copula,
    psi_closed_form,
    psi_parameters,
    r_star,
    sample,
    sample_psi,
)
from depsi.measures import footrule, gini_gamma, spearman_rho
from depsi.models import FamilyKind, SeedSpec, grid_from_function, grid_sup_distance


class FamilySpecTests(SimpleTestCase):

    def test_parse_compact_form(self):
        fam = FamilySpec.parse('gauss:r=0.6,d=1')
        self.assertEqual(fam, FamilySpec.gaussian(0.6))
        self.assertEqual(fam.kind, FamilyKind.GAUSSIAN)
        self.assertEqual(str(fam), 'gauss:r=0.6,d=1')

    def test_parse_aliases(self):
        self.assertEqual(FamilySpec.parse('mo:alpha=1,beta=0.4'), FamilySpec.marshall_olkin(1.0, 0.4))
        self.assertEqual(FamilySpec.parse(' EFGM:a=-0.5, d=2 '), FamilySpec.efgm(-0.5, 2))
        self.assertEqual(FamilySpec.parse('gauss:rho=0.3'), FamilySpec.gaussian(0.3))

    def test_str_parses_back(self):
        for fam in (
            FamilySpec.gaussian(-0.25, 3),
            FamilySpec.marshall_olkin(0.3, 0.6),
            FamilySpec.frechet(0.3, 0.2),
            FamilySpec.efgm(1.0, 2),
        ):
            self.assertEqual(FamilySpec.parse(str(fam)), fam)

    def test_rejects_invalid_parameters(self):
        bad = (
            'gauss:r=1.2',
            'gauss:r=-0.5,d=2',
            'mo:a=1.1,b=0.2',
            'mo:a=0.5',
            'frechet:a=0.7,b=0.5',
            'frechet:a=0.3,b=0.2,d=2',
            'efgm:a=2',
            'gauss:r=abc',
            'gauss:r=0.5,a=1',
            'gauss:r',
            'copula:a=1',
            'gauss:r=nan',
        )
        for text in bad:
            with self.subTest(text=text):
                with self.assertRaises(InvalidFamilyError) as ctx:
                    FamilySpec.parse(text)
                self.assertEqual(ctx.exception.code, 'invalid_family')

    def test_gaussian_range_depends_on_dimension(self):
        FamilySpec.gaussian(-0.4, 2)
        with self.assertRaisesMessage(InvalidFamilyError, '(-1/d, 1)'):
            FamilySpec.gaussian(-0.5, 2)


class PsiParameterTests(SimpleTestCase):

    def test_r_star_is_exact(self):
        self.assertEqual(r_star(0.8), 0.64)
        self.assertEqual(r_star(0.6), 0.36)
        self.assertEqual(r_star(0.6, 2), 0.45)
        self.assertEqual(r_star(0.0, 4), 0.0)

    def test_r_star_increases_in_r_and_d(self):
        rs = np.linspace(0.05, 0.95, 19)
        for d in range(1, 5):
            values = [r_star(r, d) for r in rs]
            self.assertTrue(np.all(np.diff(values) > 0))
            self.assertTrue(all(r_star(r, d + 1) > r_star(r, d) for r in rs))

    def test_named_images(self):
        self.assertEqual(psi_parameters('gauss:r=0.8'), {'family': 'gauss', 'r_star': 0.64})
        self.assertEqual(
            psi_parameters('frechet:a=0.5,b=0.5'),
            {'family': 'frechet', 'alpha_star': 0.5, 'beta_star': 0.5},
        )
        self.assertEqual(psi_parameters('efgm:a=1,d=1'), {'family': 'efgm', 'alpha_star': 1 / 3})
        self.assertEqual(psi_parameters('mo:a=1,b=0.4'), {'family': 'mo', 'alpha_star': 0.4, 'beta_star': 0.4})
        self.assertEqual(psi_parameters('mo:a=0,b=0.3'), {'family': 'mo', 'alpha_star': 0.0, 'beta_star': 0.0})
        self.assertEqual(psi_parameters('mo:a=0.5,b=0.5'), {'family': 'mo-image', 'branch': 'half'})

    def test_frechet_half_half_is_a_fixed_point(self):
        fam = FamilySpec.frechet(0.5, 0.5)
        image = psi_parameters(fam)
        self.assertEqual((image['alpha_star'], image['beta_star']), (fam.alpha, fam.beta))


class ClosedFormMeasureTests(SimpleTestCase):

    def assertMeasures(self, fam, t, r2, q, places=12):
        measures = closed_form_measures(fam)
        self.assertAlmostEqual(measures.t, t, places=places)
        self.assertAlmostEqual(measures.r2, r2, places=places)
        self.assertAlmostEqual(measures.q, q, places=places)

    def test_complete_dependence(self):
        self.assertMeasures(FamilySpec.marshall_olkin(1.0, 1.0), 1.0, 1.0, 1.0)

    def test_marshall_olkin_alpha_one(self):
        self.assertMeasures(FamilySpec.marshall_olkin(1.0, 0.4), 0.3077, 1 / 3, 0.3197, places=4)

    def test_marshall_olkin_without_common_shock(self):
        self.assertMeasures(FamilySpec.marshall_olkin(0.0, 0.3), 0.0, 0.0, 0.0)

    def test_marshall_olkin_general_branch_has_no_closed_form(self):
        with self.assertRaises(NoClosedFormError) as ctx:
            closed_form_measures('mo:a=0.5,b=0.5')
        self.assertEqual(ctx.exception.code, 'no_closed_form')

    def test_efgm(self):
        self.assertMeasures(FamilySpec.efgm(1.0), 1 / 15, 1 / 9, 4 / 45)
        self.assertAlmostEqual(closed_form_measures(FamilySpec.efgm(1.0, 2)).t, 1 / 45, places=14)

    def test_frechet(self):
        self.assertMeasures(FamilySpec.frechet(0.5, 0.5), 0.25, 0.0, 0.0)

    def test_gaussian_independence(self):
        self.assertMeasures(FamilySpec.gaussian(0.0, 2), 0.0, 0.0, 0.0)

    def test_closed_forms_match_numerical_functionals(self):
        families = (
            FamilySpec.gaussian(0.6),
            FamilySpec.gaussian(0.5, 3),
            FamilySpec.gaussian(-0.3),
            FamilySpec.marshall_olkin(1.0, 0.4),
            FamilySpec.frechet(0.3, 0.2),
            FamilySpec.efgm(1.0),
            FamilySpec.efgm(-0.5, 2),
        )
        for fam in families:
            psi = psi_closed_form(fam)
            measures = closed_form_measures(fam)
            with self.subTest(family=str(fam)):
                self.assertAlmostEqual(footrule(psi, resolution=200), measures.t, delta=5e-3)
                self.assertAlmostEqual(spearman_rho(psi, resolution=200), measures.r2, delta=5e-3)
                self.assertAlmostEqual(gini_gamma(psi, resolution=200), measures.q, delta=5e-3)


class ClosedFormPsiTests(SimpleTestCase):
    families = (
        FamilySpec.gaussian(0.6),
        FamilySpec.gaussian(-0.2, 3),
        FamilySpec.marshall_olkin(1.0, 0.4),
        FamilySpec.marshall_olkin(0.3, 0.6),
        FamilySpec.marshall_olkin(0.5, 0.7),
        FamilySpec.marshall_olkin(0.8, 0.5),
        FamilySpec.frechet(0.3, 0.2),
        FamilySpec.efgm(-1.0, 2),
    )

    def test_images_are_copulas_between_bertino_and_upper_bound(self):
        lower = grid_from_function(bertino_bound, 50)
        upper = grid_from_function(comonotone, 50)
        for fam in self.families:
            with self.subTest(family=str(fam)):
                grid = grid_from_function(psi_closed_form(fam), 50)
                self.assertTrue(np.all(grid.values >= lower.values - 1e-10))
                self.assertTrue(np.all(grid.values <= upper.values + 1e-10))

    def test_images_are_exchangeable(self):
        for fam in self.families:
            with self.subTest(family=str(fam)):
                values = grid_from_function(psi_closed_form(fam), 50).values
                assert_allclose(values, values.T, atol=1e-10)

    def test_half_branch_is_the_limit_of_the_general_branch(self):
        half = grid_from_function(psi_closed_form(FamilySpec.marshall_olkin(0.5, 0.7)), 40)
        near = grid_from_function(psi_closed_form(FamilySpec.marshall_olkin(0.5 - 1e-6, 0.7)), 40, check=False)
        self.assertLessEqual(grid_sup_distance(half, near), 1e-4)

    def test_bertino_examples(self):
        self.assertAlmostEqual(bertino_bound(0.3, 0.4), 0.09, places=15)
        self.assertAlmostEqual(bertino_bound(0.6, 0.8), 0.44, places=15)
        self.assertEqual(bertino_bound(0.5, 0.5), 0.25)
        assert_allclose(bertino_bound(np.ones(5), np.linspace(0, 1, 5)), np.linspace(0, 1, 5))

    def test_source_copula_is_bivariate_only(self):
        self.assertAlmostEqual(family_copula('frechet:a=1,b=0')(0.3, 0.7), 0.3)
        with self.assertRaises(NoClosedFormError):
            family_copula('gauss:r=0.5,d=2')


class SamplingTests(SimpleTestCase):

    def test_frechet_atoms(self):
        n = 20_000
        ds = sample(FamilySpec.frechet(0.3, 0.2), n, SeedSpec(1))
        u = ds.x[:, 0]
        self.assertAlmostEqual(np.mean(ds.y == u), 0.3, delta=0.02)
        self.assertAlmostEqual(np.mean(ds.y == 1.0 - u), 0.2, delta=0.02)

    def test_independent_gaussian_columns(self):
        n = 5_000
        ds = sample(FamilySpec.gaussian(0.0, 3), n, SeedSpec(2))
        data = np.column_stack((ds.x, ds.y))
        rho = spearmanr(data).statistic
        off_diagonal = rho[~np.eye(4, dtype=bool)]
        self.assertTrue(np.all(np.abs(off_diagonal) <= 4 / np.sqrt(n)))

    def test_uniform_margins(self):
        n = 5_000
        for fam in (
            FamilySpec.gaussian(0.6, 2),
            FamilySpec.marshall_olkin(0.3, 0.6),
            FamilySpec.frechet(0.3, 0.2),
            FamilySpec.efgm(1.0, 2),
        ):
            ds = sample(fam, n, SeedSpec(3))
            for column in np.column_stack((ds.x, ds.y)).T:
                with self.subTest(family=str(fam)):
                    self.assertTrue(np.all((column >= 0.0) & (column <= 1.0)))
                    self.assertLessEqual(kstest(column, 'uniform').statistic, 2.2 / np.sqrt(n))

    def test_seeded_samples_repeat(self):
        fam = FamilySpec.marshall_olkin(0.3, 0.6)
        first, second = sample(fam, 100, SeedSpec(4)), sample(fam, 100, SeedSpec(4))
        assert_array_equal(first.x, second.x)
        assert_array_equal(first.y, second.y)
        self.assertFalse(np.array_equal(first.y, sample(fam, 100, SeedSpec(5)).y))

    def test_rejects_tiny_samples(self):
        with self.assertRaises(InvalidFamilyError):
            sample('gauss:r=0.5', 1, SeedSpec(0))

    def test_psi_samples_follow_the_closed_form(self):
        n = 20_000
        for fam in (
            FamilySpec.gaussian(0.6, 2),
            FamilySpec.marshall_olkin(1.0, 0.4),
            FamilySpec.marshall_olkin(0.3, 0.6),
            FamilySpec.frechet(0.3, 0.2),
            FamilySpec.efgm(1.0),
        ):
            pairs = sample_psi(fam, n, SeedSpec(6))
            expected = spearman_rho(psi_closed_form(fam), resolution=200)
            with self.subTest(family=str(fam)):
                self.assertEqual(pairs.shape, (n, 2))
                self.assertAlmostEqual(spearmanr(pairs[:, 0], pairs[:, 1]).statistic, expected, delta=0.03)
