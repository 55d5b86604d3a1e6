# factorization/core/solvers.py
"""Fixed-penalty multiplicative-update baseline (lambda = lambda_bar for every row)."""
import logging

import numpy as np

from ..exceptions import ConfigError, ShinboError
from ..models import FactorPair, PenaltyVector
from .bilevel import response_report
from .divergence import penalized_objective
from .initialization import initial_factors
from .trace import TraceRecorder
from .updates import normalize, update_H_full, update_W

logger = logging.getLogger(__name__)


def run_mu(X, config, initial=None):
    """
    Alternate update_W and update_H_full with lambda = lambda_bar * 1 until the
    relative change of D0 is at most `config.tol` or `config.max_outer_iters`
    iterations ran. lambda_bar = 0 is the unpenalized MU baseline. Updates and
    D0 both see max(X, floor).

    Returns (FactorPair, RunTrace).
    """
    if config.lambda_mode != 'fixed':
        raise ConfigError("run_mu needs lambda_mode='fixed'", lambda_mode=config.lambda_mode)

    X = np.maximum(np.asarray(X, dtype=float), config.floor)
    pair = (initial if initial is not None else initial_factors(X, config)).copy()
    W, H = pair.W, pair.H
    lambdas = PenaltyVector.constant(config.lambda_value, H.shape[0]).values

    recorder = TraceRecorder(f"mu(lambda={config.lambda_value:g})", config.tol, config.max_outer_iters)
    recorder.start(penalized_objective(X, W, H, lambdas, config.floor))

    for k in range(1, config.max_outer_iters + 1):
        try:
            W = update_W(X, W, H, config.w_update_rule, config.floor, config.update_exponent)
            H = update_H_full(X, W, H, lambdas, config.floor, config.update_exponent)
            if config.normalize:
                W, H = normalize(W, H)
        except ShinboError as e:
            e.context.setdefault('k', k)
            logger.error(f"mu: numeric failure at outer iteration {k}: {e}")
            raise
        objective = penalized_objective(X, W, H, lambdas, config.floor)
        response = response_report(X, W, H, config.outer_reference).total
        if recorder.record(k, objective, response, lambdas):
            break

    return FactorPair(W, H), recorder.trace
