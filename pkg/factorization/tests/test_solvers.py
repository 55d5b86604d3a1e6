import numpy as np
from django.test import SimpleTestCase

from factorization.core.divergence import penalized_objective
from factorization.core.solvers import run_mu
from factorization.core.trace import TraceRecorder
from factorization.exceptions import ConfigError
from factorization.models import FactorPair, ObjectiveValue, SolverConfig


class RunMuTests(SimpleTestCase):
    def test_exact_factors_converge_after_one_iteration(self):
        # dyadic entries keep every product exact, so D0 stays exactly 0
        W = np.array([[1.0, 0.5], [0.5, 1.0], [1.0, 1.0]])
        H = np.array([[1.0, 2.0, 0.5], [0.5, 1.0, 1.0]])
        config = SolverConfig(rank=2, lambda_value=0.0)
        pair, trace = run_mu(W @ H, config, initial=FactorPair(W, H))
        self.assertEqual(len(trace), 1)
        self.assertEqual(trace.stop_reason, 'converged')
        np.testing.assert_allclose(pair.product(), W @ H, atol=1e-10)

    def test_objective_decreases(self):
        rng = np.random.default_rng(0)
        X = rng.uniform(0.1, 1.0, (25, 3)) @ rng.uniform(0.1, 1.0, (3, 20))
        config = SolverConfig(
            rank=3, max_outer_iters=60, w_update_rule='is_divergence', init='nndsvd', tol=1e-12,
        )
        _, trace = run_mu(X, config)
        fits = trace.fits
        self.assertLess(fits[-1], fits[0])
        self.assertTrue(all(np.isfinite(fits)))

    def test_fixed_penalty_is_reported(self):
        X = np.random.default_rng(1).uniform(0.1, 1.0, (8, 6))
        config = SolverConfig(rank=2, lambda_value=0.5, max_outer_iters=3, tol=1e-300)
        _, trace = run_mu(X, config)
        self.assertEqual(trace.stop_reason, 'max_iters')
        for record in trace:
            self.assertEqual(record.lambdas, (0.5, 0.5))
            self.assertGreater(record.objective.penalty, 0.0)

    def test_default_rule_never_increases_the_fit(self):
        steps = increases = 0
        for seed in range(20):
            X = np.random.default_rng(seed).uniform(0.1, 1.0, (20, 15))
            config = SolverConfig(rank=2, max_outer_iters=40, tol=1e-300, seed=seed)
            _, trace = run_mu(X, config)
            fits = np.array(trace.fits)
            steps += fits.size - 1
            increases += int(np.sum(fits[1:] > fits[:-1] * (1.0 + 1e-12)))
        self.assertLessEqual(increases, 0.05 * steps)

    def test_zero_entries_are_floored_for_updates_and_fit(self):
        X = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
        config = SolverConfig(rank=2, max_outer_iters=5, tol=1e-300, init='nndsvd')
        pair, trace = run_mu(X, config)
        floored = np.maximum(X, config.floor)
        self.assertEqual(trace.records[-1].objective, penalized_objective(floored, pair.W, pair.H, [0.0, 0.0]))

    def test_requires_fixed_mode(self):
        config = SolverConfig(rank=1, lambda_mode='per_row_adaptive')
        with self.assertRaises(ConfigError):
            run_mu(np.ones((2, 2)), config)


class TraceRecorderTests(SimpleTestCase):
    def test_stops_on_relative_change(self):
        recorder = TraceRecorder('test', tol=0.1, max_iters=10)
        recorder.start(ObjectiveValue(fit=10.0, penalty=0.0))
        self.assertFalse(recorder.record(1, ObjectiveValue(fit=5.0, penalty=0.0), 1.0, [0.0]))
        self.assertTrue(recorder.record(2, ObjectiveValue(fit=4.9, penalty=0.0), 1.0, [0.0]))
        self.assertEqual(recorder.trace.stop_reason, 'converged')

    def test_stops_on_iteration_limit(self):
        recorder = TraceRecorder('test', tol=1e-9, max_iters=2)
        recorder.start(ObjectiveValue(fit=10.0, penalty=0.0))
        self.assertFalse(recorder.record(1, ObjectiveValue(fit=5.0, penalty=0.0), 1.0, [0.0]))
        self.assertTrue(recorder.record(2, ObjectiveValue(fit=2.0, penalty=0.0), 1.0, [0.0]))
        self.assertEqual(recorder.trace.stop_reason, 'max_iters')


class SolverConfigTests(SimpleTestCase):
    def test_invalid_values_are_collected(self):
        with self.assertRaises(ConfigError) as ctx:
            SolverConfig(rank=0, tol=0.0, jacobian='dense')
        self.assertEqual(set(ctx.exception.errors), {'rank', 'tol', 'jacobian'})
