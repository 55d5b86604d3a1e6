# factorization/controllers/solver_controller.py
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .base_controller import BaseController
from ..core.experiment import MATRIX_INIT, build_solver_config, run_algorithm
from ..exceptions import DimensionError, ShinboError
from ..models import FactorPair, RunTrace, SolverConfig

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    algorithm: str
    config: SolverConfig
    factors: FactorPair
    lambdas: List[float]
    trace: RunTrace = field(default_factory=RunTrace)


class SolverController(BaseController):
    """
    Controller for single factorization runs.

    Builds the SolverConfig for an algorithm label (mu, mu:<lambda>, shinbo),
    runs it on a data matrix and persists W, H, lambda of the result.
    """

    def build_config(self, solver, rank, algorithm=None, default_init=MATRIX_INIT):
        algorithm = algorithm or solver['algorithm']
        return build_solver_config(solver, rank, algorithm, default_init=default_init)

    def run(self, X, solver, rank=None, algorithm=None, initial=None, default_init=MATRIX_INIT):
        """
        Run one algorithm on X.

        Args:
            X: Nonnegative data matrix
            solver (dict): Resolved solver section
            rank (int, optional): Overrides solver['rank']
            algorithm (str, optional): Overrides solver['algorithm']
            initial (FactorPair, optional): Starting factors
            default_init (str): Init used when solver['init'] is unset

        Returns:
            RunOutcome
        """
        X = np.asarray(X, dtype=float)
        rank = rank or solver.get('rank')
        if not rank:
            raise DimensionError("a rank is required to run a factorization")
        if rank > min(X.shape):
            raise DimensionError(f"rank {rank} exceeds min(m, n) = {min(X.shape)} of X {X.shape}")
        algorithm = algorithm or solver['algorithm']
        config = self.build_config(solver, rank, algorithm, default_init)

        logger.info(f"Running {algorithm} with rank {rank} on a {X.shape[0]}x{X.shape[1]} matrix")
        try:
            pair, lambdas, trace = run_algorithm(X, config, algorithm, initial=initial)
        except ShinboError as e:
            logger.error(f"Error running {algorithm}: {e}")
            raise
        return RunOutcome(algorithm=algorithm, config=config, factors=pair, lambdas=lambdas, trace=trace)

    def save_factors(self, out_dir, outcome):
        """Write W.csv, H.csv and lambda.csv; returns the written paths by name."""
        out_dir = self.ensure_dir(out_dir)
        return {
            'W': self.write_matrix(out_dir / 'W.csv', outcome.factors.W),
            'H': self.write_matrix(out_dir / 'H.csv', outcome.factors.H),
            'lambda': self.write_matrix(out_dir / 'lambda.csv', outcome.lambdas),
        }
