# factorization/core/divergence.py
"""
Beta-divergence family, the diversity measure J and the penalized objective.

    d_beta(x, y) = (x^b + (b - 1) y^b - b x y^(b - 1)) / (b (b - 1))   b not in {0, 1}
    d_1(x, y)    = x log(x / y) - x + y
    d_0(x, y)    = x / y - log(x / y) - 1

Matrix divergences are sums of the element-wise values.
"""
import logging

import numpy as np
from scipy.special import xlogy

from ..exceptions import DimensionError, DomainError
from ..models import ObjectiveValue

logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-12


def _check_same_shape(A, B):
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch: {A.shape} vs {B.shape}")


def _require(mask, message):
    """Raise a DomainError naming the first (i, j) where mask is True."""
    if np.any(mask):
        index = np.argwhere(mask)[0]
        raise DomainError(f"{message} at {tuple(int(i) for i in index)}", index=index)


def beta_divergence(A, B, beta):
    """
    Sum of element-wise beta-divergences d_beta(a_ij, b_ij).

    Args:
        A: nonnegative matrix (data)
        B: matrix (approximation), strictly positive wherever the chosen branch
           divides by it or takes its log
        beta: real beta parameter

    Returns:
        float: D_beta(A, B) >= 0
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_same_shape(A, B)
    _require(A < 0, "negative entry in A")
    beta = float(beta)

    if beta == 0.0:
        _require(B <= 0, "nonpositive entry in B under IS division")
        _require(A <= 0, "nonpositive entry in A under IS log")
        ratio = A / B
        return float(np.sum(ratio - np.log(ratio) - 1.0))

    if beta == 1.0:
        _require(B <= 0, "nonpositive entry in B under KL log")
        # 0 log 0 = 0 convention via xlogy
        return float(np.sum(xlogy(A, A) - xlogy(A, B) - A + B))

    if beta < 1.0:
        _require(B <= 0, "nonpositive entry in B under negative power")
    if beta < 0.0:
        _require(A <= 0, "nonpositive entry in A under negative power")
    value = (A ** beta + (beta - 1.0) * B ** beta - beta * A * B ** (beta - 1.0)) / (beta * (beta - 1.0))
    return float(np.sum(value))


def diversity_J(A, form='rows'):
    """
    Diversity measure J(A) = sum_i ||A_i:||_1^2 = Tr(A E A^T) for nonnegative A.

    `form='trace'` evaluates the trace expression with the all-ones matrix E;
    both forms agree to machine precision.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    _require(A < 0, "negative entry in A")
    if form == 'rows':
        return float(np.sum(A.sum(axis=1) ** 2))
    if form == 'trace':
        E = np.ones((A.shape[1], A.shape[1]))
        return float(np.trace(A @ E @ A.T))
    raise ValueError(f"unknown form {form!r}")


def row_penalty(H, lambdas):
    """sum_l lambda_l^2 ||H_l:||_1^2, the row-wise form of Tr(Diag(lambda)^2 H E H^T)."""
    H = np.asarray(H, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    if lambdas.size != H.shape[0]:
        raise DimensionError(f"{lambdas.size} penalties for {H.shape[0]} rows of H")
    return float(np.sum(lambdas ** 2 * H.sum(axis=1) ** 2))


def trace_penalty(H, lambdas):
    """Tr(Diag(lambda)^2 H E H^T) evaluated literally."""
    H = np.asarray(H, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    E = np.ones((H.shape[1], H.shape[1]))
    return float(np.trace(np.diag(lambdas ** 2) @ H @ E @ H.T))


def penalized_objective(X, W, H, lambdas, floor=DEFAULT_FLOOR):
    """
    D_0(X, WH) + sum_l lambda_l^2 ||H_l:||_1^2.

    Both X and WH are floored at `floor` inside the IS term so that sparse data
    and locked zeros keep the divergence finite.
    """
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    if W.shape[1] != H.shape[0] or (W.shape[0], H.shape[1]) != X.shape:
        raise DimensionError(f"X {X.shape}, W {W.shape}, H {H.shape} are not conformal")
    _require(X < 0, "negative entry in X")
    V = np.maximum(W @ H, floor)
    fit = beta_divergence(np.maximum(X, floor), V, 0.0)
    return ObjectiveValue(fit=fit, penalty=row_penalty(H, lambdas))


def relative_objective_change(prev, curr):
    """
    |curr - prev| / |prev|.

    prev = 0 yields +inf, except that (0, 0) yields 0.
    """
    prev = float(prev)
    curr = float(curr)
    if prev == 0.0:
        return 0.0 if curr == 0.0 else float('inf')
    return abs(curr - prev) / abs(prev)
