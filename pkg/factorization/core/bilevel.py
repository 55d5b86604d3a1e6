# factorization/core/bilevel.py
"""
Bi-level update of H and the row penalties lambda.

For each row l the inner problem (IS fit + lambda_l^2 ||h_l||_1^2) is replaced
by T steps of the dynamical system

    h^t = Phi(h^{t-1}, lambda_l) = h^{t-1} * (N / D)^gamma   (row update, others frozen)

and the outer problem (squared Frobenius fit) is differentiated through those
T steps in forward mode:

    s^t = A_t s^{t-1} + b_t,  A_t = dPhi/dh,  b_t = dPhi/dlambda_l,
    dR/dlambda_l = <g, s^T>,  g = -2 w_l^T (X - R - w_l h_l).

A_t is taken diagonal by default; jacobian='full' adds the rank-one coupling
through ||h_l||_1. lambda then takes a projected step onto [0, lambda_max].
"""
import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionError, NumericError, ShinboError
from ..models import FactorPair, FmdState, PenaltyVector, ResponseReport
from .divergence import DEFAULT_FLOOR, penalized_objective
from .initialization import initial_factors
from .trace import TraceRecorder
from .updates import HEURISTIC_EXPONENT, check_conformal, normalize, scaled_ratio, update_W

logger = logging.getLogger(__name__)

# The outer objective depends on lambda_l only through h_l.
DIRECT_PARTIAL = 0.0

# Stream index for drawing lambda^0, independent of the init stream.
LAMBDA_STREAM = 1


def _check_row(H, l):
    if not 0 <= l < H.shape[0]:
        raise DimensionError(f"row index {l} out of range for rank {H.shape[0]}")


def residual(X, W, H, l):
    """R = X - sum_{j != l} w_j h_j."""
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    check_conformal(X, W, H)
    _check_row(H, l)
    return X - (W @ H - np.outer(W[:, l], H[l]))


def background(W, H, l):
    """sum_{j != l} w_j h_j, i.e. X - residual(X, W, H, l)."""
    return W @ H - np.outer(W[:, l], H[l])


def response_row(X, R, w_l, h_l):
    """r(lambda_l) = ||X - R - w_l h_l||_F^2 (un-halved squared Frobenius norm)."""
    X = np.asarray(X, dtype=float)
    R = np.asarray(R, dtype=float)
    if X.shape != R.shape or (np.size(w_l), np.size(h_l)) != X.shape:
        raise DimensionError(f"X {X.shape}, R {R.shape}, w_l {np.shape(w_l)}, h_l {np.shape(h_l)}")
    return float(np.sum((X - R - np.outer(w_l, h_l)) ** 2))


def outer_gradient_g(X, R, w_l, h_l):
    """g = d r / d h_l = -2 w_l^T (X - R - w_l h_l)."""
    X = np.asarray(X, dtype=float)
    w_l = np.asarray(w_l, dtype=float)
    return -2.0 * w_l @ (X - np.asarray(R, dtype=float) - np.outer(w_l, h_l))


def outer_reference_matrix(X, W, H, l, outer_reference='background'):
    """
    Matrix passed as R to response_row / outer_gradient_g inside the solver.

    'background' uses sum_{j != l} w_j h_j so that R + w_l h_l approximates X
    and the response is the Frobenius fit ||X - WH||^2; 'residual' uses the
    literal residual X - sum_{j != l} w_j h_j.
    """
    if outer_reference == 'background':
        return background(W, H, l)
    if outer_reference == 'residual':
        return residual(X, W, H, l)
    raise ValueError(f"unknown outer reference {outer_reference!r}")


def response_report(X, W, H, outer_reference='background'):
    """Per-row response values r(lambda_l) and their total R(lambda)."""
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    check_conformal(X, W, H)
    rows = tuple(
        response_row(X, outer_reference_matrix(X, W, H, l, outer_reference), W[:, l], H[l])
        for l in range(H.shape[0])
    )
    return ResponseReport(rows=rows)


class RowDynamics:
    """
    Phi(h, lambda_l) = h * (N / D)^gamma for row l with the other rows frozen
    in `base` (= sum_{j != l} w_j h_j), plus its partial derivatives.

        N_j = sum_i w_il x_ij / V_ij^2
        D_j = sum_i w_il / V_ij + 2 lambda_l^2 ||h||_1
        V   = max(base + w_l h, floor)

    Every derivative is the gamma = 1 expression times the chain factor
    gamma * (N/D)^(gamma - 1), so gamma = 1 gives the plain row update.
    """

    def __init__(self, X, w_l, base, floor=DEFAULT_FLOOR, l=None, exponent=HEURISTIC_EXPONENT):
        self.X = np.asarray(X, dtype=float)
        self.w_l = np.asarray(w_l, dtype=float)
        self.base = np.asarray(base, dtype=float)
        self.floor = floor
        self.l = l
        self.exponent = exponent

    @classmethod
    def for_row(cls, X, W, H, l, floor=DEFAULT_FLOOR, exponent=HEURISTIC_EXPONENT):
        X = np.asarray(X, dtype=float)
        W = np.asarray(W, dtype=float)
        H = np.asarray(H, dtype=float)
        check_conformal(X, W, H)
        _check_row(H, l)
        return cls(X, W[:, l], background(W, H, l), floor, l, exponent)

    def terms(self, h, lambda_l):
        V = np.maximum(self.base + np.outer(self.w_l, h), self.floor)
        N = self.w_l @ (self.X / V ** 2)
        D = self.w_l @ (1.0 / V) + 2.0 * lambda_l ** 2 * np.sum(h)
        return V, N, D

    def step(self, h, lambda_l):
        _, N, D = self.terms(h, lambda_l)
        return h * scaled_ratio(N, D, self.floor, self.exponent)

    def _gain(self, h, N, D):
        """gamma * h * (N/D)^(gamma - 1), zero where N vanishes and gamma < 1."""
        gamma = self.exponent
        if gamma == HEURISTIC_EXPONENT:
            return h
        ratio = N / D
        with np.errstate(divide='ignore'):
            power = np.where(ratio > 0, ratio, 1.0) ** (gamma - 1.0)
        return gamma * h * np.where(ratio > 0, power, 0.0)

    def jacobian_diag(self, h, lambda_l):
        """
        A_jj = (N_j/D_j)^gamma
               - G_j (2 S3_j D_j - N_j S2_j + 2 lambda_l^2 N_j) / D_j^2
        with G_j = gamma h_j (N_j/D_j)^(gamma - 1),
        S3_j = sum_i w_il^2 x_ij / V_ij^3 and S2_j = sum_i w_il^2 / V_ij^2.
        """
        V, N, D = self.terms(h, lambda_l)
        w2 = self.w_l ** 2
        S3 = w2 @ (self.X / V ** 3)
        S2 = w2 @ (1.0 / V ** 2)
        gain = self._gain(h, N, D)
        A = (N / D) ** self.exponent - gain * (2.0 * S3 * D - N * S2 + 2.0 * lambda_l ** 2 * N) / D ** 2
        return self._finite(A, 'Jacobian diagonal')

    def coupling(self, h, lambda_l):
        """
        c_j = dPhi_j / dh_j' for j' != j, the rank-one part the diagonal form
        drops: -2 lambda_l^2 G_j N_j / D_j^2.
        """
        _, N, D = self.terms(h, lambda_l)
        c = -2.0 * lambda_l ** 2 * self._gain(h, N, D) * N / D ** 2
        return self._finite(c, 'Jacobian coupling')

    def sensitivity(self, h, lambda_l):
        """b_j = dPhi_j / dlambda_l = -4 lambda_l ||h||_1 G_j N_j / D_j^2."""
        _, N, D = self.terms(h, lambda_l)
        b = -4.0 * lambda_l * np.sum(h) * self._gain(h, N, D) * N / D ** 2
        return self._finite(b, 'sensitivity')

    def _finite(self, values, name):
        if not np.all(np.isfinite(values)):
            j = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NumericError(f"overflow in {name}", l=self.l, j=j)
        return values


def jacobian_diag_A(h_l, l, X, W, H, lambda_l, floor=DEFAULT_FLOOR, exponent=HEURISTIC_EXPONENT):
    """Diagonal of dPhi/dh at h_l for row l (other rows of H frozen)."""
    dynamics = RowDynamics.for_row(X, W, H, l, floor, exponent)
    return dynamics.jacobian_diag(np.asarray(h_l, dtype=float), lambda_l)


def sensitivity_b(h_l, l, X, W, H, lambda_l, floor=DEFAULT_FLOOR, exponent=HEURISTIC_EXPONENT):
    """dPhi/dlambda_l at h_l for row l (other rows of H frozen)."""
    dynamics = RowDynamics.for_row(X, W, H, l, floor, exponent)
    return dynamics.sensitivity(np.asarray(h_l, dtype=float), lambda_l)


def fmd_step(state, A_diag, b, coupling=None):
    """
    s^t = A_t s^{t-1} + b_t with diagonal A_t (element-wise product).

    With `coupling` c the full Jacobian diag(A - c) + c 1^T is applied instead.
    """
    A_diag = np.asarray(A_diag, dtype=float)
    b = np.asarray(b, dtype=float)
    if coupling is None:
        s = A_diag * state.s + b
    else:
        s = (A_diag - coupling) * state.s + coupling * np.sum(state.s) + b
    return FmdState(s=s, A_diag=A_diag, b=b)


def expanded_sensitivity(A_seq, b_seq):
    """
    s^T = b_T + sum_{t=0}^{T-1} (prod_{s=t+1}^{T} A_s) b_t for diagonal A_1..A_T
    and b_0..b_T.
    """
    T = len(A_seq)
    if len(b_seq) != T + 1:
        raise DimensionError(f"need {T + 1} sensitivity vectors for {T} Jacobians, got {len(b_seq)}")
    total = np.array(b_seq[T], dtype=float)
    for t in range(T):
        product = np.ones_like(total)
        for A in A_seq[t:]:
            product = product * A
        total = total + product * b_seq[t]
    return total


def hypergradient_row(g, s):
    """dR/dlambda_l = dr/dlambda_l (explicitly zero) + <g, s^T>."""
    g = np.asarray(g, dtype=float).reshape(-1)
    s = np.asarray(s, dtype=float).reshape(-1)
    if g.size != s.size:
        raise DimensionError(f"g has length {g.size} but s has length {s.size}")
    return DIRECT_PARTIAL + float(g @ s)


def update_lambda(lambdas, grad, alpha, upper=None, scaling='none'):
    """
    Projected gradient step lambda' = clip(lambda - alpha * step, 0, upper).

    scaling 'none' steps along grad itself; 'clipped' divides grad by
    max(1, ||grad||_2), so no entry moves by more than alpha. upper=None
    leaves lambda unbounded above.
    """
    if not alpha > 0:
        raise ValueError(f"step size must be > 0, got {alpha}")
    if upper is not None and not upper > 0:
        raise ValueError(f"upper bound must be > 0, got {upper}")
    values = lambdas.values if isinstance(lambdas, PenaltyVector) else np.asarray(lambdas, dtype=float)
    grad = np.asarray(grad, dtype=float)
    if scaling == 'clipped':
        grad = grad / max(1.0, float(np.linalg.norm(grad)))
    elif scaling != 'none':
        raise ValueError(f"unknown step scaling {scaling!r}")
    return PenaltyVector(np.clip(values - alpha * grad, 0.0, upper))


@dataclass
class RowResult:
    h: np.ndarray
    gradient: float
    response: float
    state: FmdState


def row_hypergradient(X, W, H, l, lambda_l, inner_iters, floor=DEFAULT_FLOOR,
                      jacobian='diagonal', outer_reference='background', exponent=HEURISTIC_EXPONENT):
    """
    Run T inner row updates from H[l] while propagating the forward-mode
    sensitivity, then assemble the hypergradient at t = T.

    The warm start h^0 = H[l] does not depend on the current lambda_l, so the
    recursion starts from s^0 = b_0 = 0.
    """
    dynamics = RowDynamics.for_row(X, W, H, l, floor, exponent)
    h = np.array(H[l], dtype=float)
    state = FmdState.initial(np.zeros_like(h))

    for t in range(1, inner_iters + 1):
        try:
            A = dynamics.jacobian_diag(h, lambda_l)
            b = dynamics.sensitivity(h, lambda_l)
            c = dynamics.coupling(h, lambda_l) if jacobian == 'full' else None
            state = fmd_step(state, A, b, c)
            h = dynamics.step(h, lambda_l)
        except ShinboError as e:
            e.context.setdefault('t', t)
            raise
        if not np.all(np.isfinite(h)):
            raise NumericError("non-finite row iterate", l=l, t=t)

    R = outer_reference_matrix(X, W, H, l, outer_reference)
    g = outer_gradient_g(X, R, dynamics.w_l, h)
    return RowResult(
        h=h,
        gradient=hypergradient_row(g, state.s),
        response=response_row(X, R, dynamics.w_l, h),
        state=state,
    )


def unrolled_row_response(X, W, H, l, lambda_l, inner_iters, floor=DEFAULT_FLOOR,
                          outer_reference='background', exponent=HEURISTIC_EXPONENT):
    """Response of row l after exactly T dynamical-system steps from H[l]."""
    dynamics = RowDynamics.for_row(X, W, H, l, floor, exponent)
    h = np.array(H[l], dtype=float)
    for _ in range(inner_iters):
        h = dynamics.step(h, lambda_l)
    R = outer_reference_matrix(X, W, H, l, outer_reference)
    return response_row(X, R, dynamics.w_l, h)


def step_penalties(values, gradients, config):
    return update_lambda(
        values, gradients, config.step_alpha, upper=config.lambda_max, scaling=config.step_scaling,
    ).values


def sweep_rows(X, W, H, lambdas, config):
    """
    One pass over the rows l = 0..r-1 of H with W fixed.

    Rows are updated in order (each row sees the latest values of the
    others). Under lambda_update='per_row' lambda_l moves right after row l's
    inner loop; under 'batched' the whole vector moves after the pass.

    Returns (H, PenaltyVector, gradients, ResponseReport).
    """
    X = np.asarray(X, dtype=float)
    H = np.array(H, dtype=float)
    values = np.array(lambdas.values if isinstance(lambdas, PenaltyVector) else lambdas, dtype=float)
    r = H.shape[0]
    gradients = np.zeros(r)
    responses = []

    for l in range(r):
        try:
            result = row_hypergradient(
                X, W, H, l, values[l], config.inner_iters, config.floor,
                config.jacobian, config.outer_reference, config.update_exponent,
            )
        except ShinboError as e:
            e.context.setdefault('l', l)
            raise
        H[l] = result.h
        gradients[l] = result.gradient
        responses.append(result.response)
        if config.lambda_update == 'per_row':
            values[l] = step_penalties(values[l:l + 1], gradients[l:l + 1], config)[0]

    if config.lambda_update == 'batched':
        values = step_penalties(values, gradients, config)
    return H, PenaltyVector(values), gradients, ResponseReport(rows=tuple(responses))


def run_shinbo(X, config, initial=None, initial_lambda=None):
    """
    Alternate a W update with a bi-level sweep over the rows of H until the
    relative change of D0 is at most `config.tol` or `config.max_outer_iters`
    outer iterations ran.

    lambda^0 ~ U[0, 1] per entry (clipped to lambda_max) unless
    `initial_lambda` is given. Updates and D0 both see max(X, floor).

    Returns (FactorPair, PenaltyVector, RunTrace).
    """
    X = np.maximum(np.asarray(X, dtype=float), config.floor)
    pair = (initial if initial is not None else initial_factors(X, config)).copy()
    W, H = pair.W, pair.H
    if initial_lambda is None:
        rng = np.random.default_rng([config.seed, LAMBDA_STREAM])
        lambdas = PenaltyVector(np.clip(PenaltyVector.uniform(config.rank, rng).values, 0.0, config.lambda_max))
    else:
        lambdas = PenaltyVector(initial_lambda)
    if len(lambdas) != H.shape[0]:
        raise DimensionError(f"{len(lambdas)} penalties for rank {H.shape[0]}")

    recorder = TraceRecorder('shinbo', config.tol, config.max_outer_iters)
    recorder.start(penalized_objective(X, W, H, lambdas.values, config.floor))

    for k in range(1, config.max_outer_iters + 1):
        try:
            W = update_W(X, W, H, config.w_update_rule, config.floor, config.update_exponent)
            H, lambdas, _, _ = sweep_rows(X, W, H, lambdas, config)
            if config.normalize:
                W, H = normalize(W, H)
        except ShinboError as e:
            e.context.setdefault('k', k)
            logger.error(f"shinbo: numeric failure at outer iteration {k}: {e}")
            raise
        objective = penalized_objective(X, W, H, lambdas.values, config.floor)
        response = response_report(X, W, H, config.outer_reference).total
        if recorder.record(k, objective, response, lambdas.values):
            break

    return FactorPair(W, H), lambdas, recorder.trace
