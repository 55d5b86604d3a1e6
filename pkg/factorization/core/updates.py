# factorization/core/updates.py
"""
Multiplicative updates for W and H, the row-wise penalized H update and the
max-normalization of W's columns.

Every Hadamard inverse/power of WH is taken on max(WH, floor), and every
denominator is floored as well, so outputs stay finite and nonnegative.
Zeros of W and H are fixed points of all updates.

The IS updates take an `exponent` gamma applied to the ratio of numerator
and denominator. gamma = 1 is the plain multiplicative rule; gamma = 1/2 is
the majorization-minimization rule for beta = 0, under which the IS fit
never increases for lambda = 0.
"""
import logging

import numpy as np

from ..exceptions import DegenerateComponentError, DimensionError, NumericError
from .divergence import DEFAULT_FLOOR

logger = logging.getLogger(__name__)

PAPER_EUCLIDEAN = 'paper_euclidean'
IS_DIVERGENCE = 'is_divergence'

HEURISTIC_EXPONENT = 1.0
MM_EXPONENT = 0.5


def check_conformal(X, W, H):
    if W.ndim != 2 or H.ndim != 2 or W.shape[1] != H.shape[0]:
        raise DimensionError(f"W {W.shape} and H {H.shape} are not conformal")
    if (W.shape[0], H.shape[1]) != X.shape:
        raise DimensionError(f"WH has shape {(W.shape[0], H.shape[1])} but X has shape {X.shape}")


def check_finite(matrix, name, **context):
    if not np.all(np.isfinite(matrix)):
        index = tuple(int(i) for i in np.argwhere(~np.isfinite(matrix))[0])
        raise NumericError(f"non-finite entry in {name}", index=index, **context)
    return matrix


def scaled_ratio(numerator, denominator, floor, exponent=HEURISTIC_EXPONENT):
    """(numerator / max(denominator, floor)) ** exponent."""
    ratio = numerator / np.maximum(denominator, floor)
    if exponent == HEURISTIC_EXPONENT:
        return ratio
    if not 0 < exponent <= 1:
        raise ValueError(f"update exponent must lie in (0, 1], got {exponent}")
    return ratio ** exponent


def update_W(X, W, H, rule=PAPER_EUCLIDEAN, floor=DEFAULT_FLOOR, exponent=HEURISTIC_EXPONENT):
    """
    One multiplicative update of W.

    rule 'paper_euclidean':  W * (X H^T) / (W H H^T)
    rule 'is_divergence':    W * [((WH)^-2 * X) H^T / ((WH)^-1 H^T)]^exponent

    The Euclidean rule is already a majorization step for its own loss and
    ignores `exponent`.
    """
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    check_conformal(X, W, H)

    if rule == PAPER_EUCLIDEAN:
        W_new = W * scaled_ratio(X @ H.T, W @ (H @ H.T), floor)
    elif rule == IS_DIVERGENCE:
        V = np.maximum(W @ H, floor)
        W_new = W * scaled_ratio((X / V ** 2) @ H.T, (1.0 / V) @ H.T, floor, exponent)
    else:
        raise ValueError(f"unknown W update rule {rule!r}")
    return check_finite(W_new, 'W')


def _h_terms(X, W, H, floor):
    """Numerator W^T((WH)^-2 X) and IS part of the denominator W^T (WH)^-1."""
    V = np.maximum(W @ H, floor)
    return W.T @ (X / V ** 2), W.T @ (1.0 / V)


def update_H_full(X, W, H, lambdas, floor=DEFAULT_FLOOR, exponent=HEURISTIC_EXPONENT):
    """
    Penalized IS update of all rows of H at once:

        H * ([W^T((WH)^-2 X)] / [W^T (WH)^-1 + 2 Diag(lambda)^2 H E])^exponent
    """
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    check_conformal(X, W, H)
    lambdas = np.asarray(lambdas, dtype=float).reshape(-1)
    if lambdas.size != H.shape[0]:
        raise DimensionError(f"{lambdas.size} penalties for {H.shape[0]} rows of H")

    numerator, is_denominator = _h_terms(X, W, H, floor)
    # (H E)_ij is the l1 norm of row i for nonnegative H
    penalty = 2.0 * (lambdas ** 2 * H.sum(axis=1))[:, None]
    H_new = H * scaled_ratio(numerator, is_denominator + penalty, floor, exponent)
    return check_finite(H_new, 'H')


def row_terms(h_l, w_l, background, X, lambda_l, floor=DEFAULT_FLOOR):
    """
    N_l and D_l of the row update for a row h_l placed on top of `background`
    (the contribution of all other rows, sum_{j != l} w_j h_j).

    Returns (V, N, D) with V = max(background + w_l h_l, floor).
    """
    V = np.maximum(background + np.outer(w_l, h_l), floor)
    N = w_l @ (X / V ** 2)
    D = w_l @ (1.0 / V) + 2.0 * lambda_l ** 2 * np.sum(h_l)
    return V, N, D


def update_H_row(h_l, l, X, W, H, lambda_l, floor=DEFAULT_FLOOR, exponent=HEURISTIC_EXPONENT):
    """
    Row-wise penalized update of row l of H with the other rows frozen:

        h_l' = h_l * (N_l / D_l)^exponent,  N_l = (W^T (WH)^-2 X)_l:,
        D_l = (W^T (WH)^-1)_l: + 2 lambda_l^2 ||h_l||_1
    """
    X = np.asarray(X, dtype=float)
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    check_conformal(X, W, H)
    if not 0 <= l < H.shape[0]:
        raise DimensionError(f"row index {l} out of range for rank {H.shape[0]}")
    h_l = np.asarray(h_l, dtype=float).reshape(-1)
    if h_l.size != H.shape[1]:
        raise DimensionError(f"row has length {h_l.size}, expected {H.shape[1]}")

    w_l = W[:, l]
    background = W @ H - np.outer(w_l, H[l])
    _, N, D = row_terms(h_l, w_l, background, X, lambda_l, floor)
    return check_finite(h_l * scaled_ratio(N, D, floor, exponent), 'h', l=l)


def normalize(W, H):
    """
    Scale each column of W to unit max and compensate in the matching row of H,
    leaving WH unchanged.
    """
    W = np.asarray(W, dtype=float)
    H = np.asarray(H, dtype=float)
    scale = W.max(axis=0)
    degenerate = np.flatnonzero(scale <= 0)
    if degenerate.size:
        raise DegenerateComponentError(int(degenerate[0]))
    return W / scale, H * scale[:, None]
