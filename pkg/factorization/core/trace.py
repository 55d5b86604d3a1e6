# factorization/core/trace.py
import logging
import time

from ..models import RunTrace, TraceRecord
from .divergence import relative_objective_change

logger = logging.getLogger(__name__)


class TraceRecorder:
    """
    Collects one TraceRecord per outer iteration and decides termination on
    the relative change of the IS fit.
    """

    def __init__(self, label, tol, max_iters):
        self.label = label
        self.tol = tol
        self.max_iters = max_iters
        self.trace = RunTrace()
        self._start = time.perf_counter()
        self._previous_fit = None

    def start(self, objective):
        self._previous_fit = objective.fit
        logger.info(f"{self.label}: starting, D0 = {objective.fit:.6g}")

    def record(self, k, objective, response, lambdas):
        """
        Store iteration k and return True when the run should stop.
        """
        record = TraceRecord(
            k=k,
            objective=objective,
            response=float(response),
            lambdas=tuple(float(v) for v in lambdas),
            seconds=time.perf_counter() - self._start,
        )
        self.trace.append(record)
        change = relative_objective_change(self._previous_fit, objective.fit)
        self._previous_fit = objective.fit
        logger.debug(
            f"{self.label}: k={k} D0={objective.fit:.6g} penalty={objective.penalty:.6g} "
            f"response={response:.6g} change={change:.3g}"
        )
        if change <= self.tol:
            self.trace.stop_reason = 'converged'
        elif k >= self.max_iters:
            self.trace.stop_reason = 'max_iters'
        else:
            return False
        logger.info(
            f"{self.label}: stopped ({self.trace.stop_reason}) after {k} iterations, "
            f"D0 = {objective.fit:.6g}"
        )
        return True
