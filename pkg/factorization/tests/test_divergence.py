import numpy as np
from django.test import SimpleTestCase
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from factorization.core.divergence import (
    beta_divergence,
    diversity_J,
    penalized_objective,
    relative_objective_change,
    row_penalty,
    trace_penalty,
)
from factorization.exceptions import DimensionError, DomainError

nonneg_matrices = arrays(
    np.float64,
    st.tuples(st.integers(1, 6), st.integers(1, 6)),
    elements=st.floats(0.0, 10.0, allow_nan=False, allow_infinity=False),
)


class BetaDivergenceTests(SimpleTestCase):
    def test_is_identity_is_zero(self):
        A = np.array([[0.5, 2.0], [3.0, 7.0]])
        self.assertEqual(beta_divergence(A, A, 0), 0.0)

    def test_is_hand_value(self):
        self.assertAlmostEqual(beta_divergence([[1.0]], [[2.0]], 0), 0.5 - np.log(0.5) - 1, places=12)
        self.assertAlmostEqual(beta_divergence([[1.0]], [[2.0]], 0), 0.193147, places=6)

    def test_euclidean_hand_value(self):
        self.assertAlmostEqual(beta_divergence([[3.0]], [[1.0]], 2), 2.0, places=12)

    def test_kl_identity_is_zero(self):
        A = np.array([[0.3, 1.7]])
        self.assertAlmostEqual(beta_divergence(A, A, 1), 0.0, places=14)

    def test_kl_allows_zero_data(self):
        self.assertAlmostEqual(beta_divergence([[0.0]], [[2.0]], 1), 2.0, places=12)

    def test_generic_beta_is_nonnegative(self):
        rng = np.random.default_rng(0)
        A = rng.uniform(0.1, 3.0, (4, 5))
        B = rng.uniform(0.1, 3.0, (4, 5))
        for beta in (-1.0, 0.5, 1.5, 3.0):
            self.assertGreaterEqual(beta_divergence(A, B, beta), -1e-12)

    def test_generic_branch_approaches_is_and_kl(self):
        rng = np.random.default_rng(4)
        A = rng.uniform(0.5, 2.0, (3, 4))
        B = rng.uniform(0.5, 2.0, (3, 4))
        for beta, limit in ((1e-5, 0.0), (-1e-5, 0.0), (1.0 + 1e-5, 1.0), (1.0 - 1e-5, 1.0)):
            with self.subTest(beta=beta):
                exact = beta_divergence(A, B, limit)
                self.assertAlmostEqual(beta_divergence(A, B, beta), exact, delta=1e-3 * exact)

    def test_is_scale_invariance(self):
        rng = np.random.default_rng(5)
        A = rng.uniform(0.1, 3.0, (4, 3))
        B = rng.uniform(0.1, 3.0, (4, 3))
        reference = beta_divergence(A, B, 0)
        for c in (1e-3, 0.5, 7.0, 1e4):
            with self.subTest(c=c):
                self.assertAlmostEqual(beta_divergence(c * A, c * B, 0), reference, delta=1e-9 * reference)

    @settings(deadline=None, max_examples=200)
    @given(
        st.floats(1e-3, 1e3),
        st.floats(1e-3, 1e3),
        st.sampled_from([0.0, 0.5, 1.0, 2.0]),
    )
    def test_strictly_positive_off_the_diagonal(self, x, y, beta):
        assume(abs(x / y - 1.0) > 1e-3)
        self.assertGreater(beta_divergence([[x]], [[y]], beta), 0.0)

    def test_shape_mismatch(self):
        with self.assertRaises(DimensionError):
            beta_divergence(np.ones((2, 2)), np.ones((2, 3)), 0)

    def test_domain_error_names_entry(self):
        B = np.ones((2, 2))
        B[1, 0] = 0.0
        with self.assertRaises(DomainError) as ctx:
            beta_divergence(np.ones((2, 2)), B, 0)
        self.assertEqual(ctx.exception.index, (1, 0))


class DiversityTests(SimpleTestCase):
    def test_zero_matrix(self):
        self.assertEqual(diversity_J(np.zeros((3, 4))), 0.0)

    def test_hand_value(self):
        self.assertEqual(diversity_J([[1, 2], [3, 4]]), 58.0)

    def test_negative_entry(self):
        with self.assertRaises(DomainError):
            diversity_J([[1.0, -1.0]])

    @settings(deadline=None, max_examples=50)
    @given(nonneg_matrices, st.floats(0.0, 5.0))
    def test_forms_agree_and_homogeneity(self, A, c):
        rows = diversity_J(A)
        self.assertAlmostEqual(rows, diversity_J(A, form='trace'), delta=1e-9 * max(1.0, rows))
        self.assertAlmostEqual(diversity_J(c * A), c ** 2 * rows, delta=1e-9 * max(1.0, c ** 2 * rows))


class ObjectiveTests(SimpleTestCase):
    def test_exact_fit_without_penalty(self):
        rng = np.random.default_rng(1)
        W = rng.uniform(0.1, 1.0, (5, 2))
        H = rng.uniform(0.1, 1.0, (2, 4))
        value = penalized_objective(W @ H, W, H, np.zeros(2))
        self.assertAlmostEqual(value.total, 0.0, places=10)

    def test_single_row_penalty(self):
        h = np.array([[0.5, 1.5, 2.0]])
        self.assertAlmostEqual(row_penalty(h, [0.3]), 0.09 * 16.0, places=12)

    def test_trace_and_row_forms_agree(self):
        rng = np.random.default_rng(2)
        H = rng.uniform(0.0, 1.0, (5, 4))
        lambdas = rng.uniform(0.0, 1.0, 5)
        rows, trace = row_penalty(H, lambdas), trace_penalty(H, lambdas)
        self.assertLess(abs(rows - trace) / rows, 1e-12)

    def test_total_is_fit_plus_penalty(self):
        rng = np.random.default_rng(3)
        X = rng.uniform(0.1, 1.0, (4, 3))
        W = rng.uniform(0.1, 1.0, (4, 2))
        H = rng.uniform(0.1, 1.0, (2, 3))
        value = penalized_objective(X, W, H, [0.2, 0.7])
        self.assertEqual(value.total, value.fit + value.penalty)
        self.assertGreater(value.fit, 0.0)

    def test_sparse_data_stays_finite(self):
        X = np.array([[0.0, 1.0], [2.0, 0.0]])
        W = np.ones((2, 1))
        H = np.ones((1, 2))
        self.assertTrue(np.isfinite(penalized_objective(X, W, H, [0.0]).fit))

    def test_nonconformal(self):
        with self.assertRaises(DimensionError):
            penalized_objective(np.ones((3, 3)), np.ones((3, 2)), np.ones((3, 3)), [0, 0])


class RelativeChangeTests(SimpleTestCase):
    def test_regular(self):
        self.assertAlmostEqual(relative_objective_change(2.0, 1.5), 0.25)

    def test_zero_previous(self):
        self.assertEqual(relative_objective_change(0.0, 0.0), 0.0)
        self.assertEqual(relative_objective_change(0.0, 1.0), float('inf'))
