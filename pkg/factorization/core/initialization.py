# factorization/core/initialization.py
"""
Initial factors: NNDSVD, the NNDSVD + unpenalized-MU warm start used for the
synthetic experiments, and the clipped-Gaussian draw used for spectrograms.
"""
import logging

import numpy as np

from ..exceptions import DimensionError, DomainError, NumericError
from ..models import FactorPair
from .divergence import DEFAULT_FLOOR
from .updates import IS_DIVERGENCE, MM_EXPONENT, update_H_full, update_W

logger = logging.getLogger(__name__)


def _positive_part(x):
    return np.maximum(x, 0.0)


def _negative_part(x):
    return np.maximum(-x, 0.0)


def nndsvd_init(X, r, floor=DEFAULT_FLOOR):
    """
    Nonnegative double SVD.

    The leading singular pair is taken in absolute value; every further pair
    (u, v) is split into positive and negative parts and the part with the
    larger ||u_+|| ||v_+|| (resp. ||u_-|| ||v_-||) is kept, scaled by
    sqrt(sigma * that product). Zero entries are replaced by `floor` so that
    the multiplicative updates can move them.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionError(f"X must be a matrix, got shape {X.shape}")
    if np.any(X < 0):
        raise DomainError("NNDSVD needs a nonnegative matrix", index=np.argwhere(X < 0)[0])
    m, n = X.shape
    if not 1 <= r <= min(m, n):
        raise DimensionError(f"rank {r} must lie in [1, {min(m, n)}]")

    try:
        U, S, Vt = np.linalg.svd(X, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"SVD did not converge: {e}") from e

    W = np.zeros((m, r))
    H = np.zeros((r, n))
    W[:, 0] = np.sqrt(S[0]) * np.abs(U[:, 0])
    H[0, :] = np.sqrt(S[0]) * np.abs(Vt[0, :])

    for j in range(1, r):
        x, y = U[:, j], Vt[j, :]
        x_p, x_n = _positive_part(x), _negative_part(x)
        y_p, y_n = _positive_part(y), _negative_part(y)
        x_p_norm, y_p_norm = np.linalg.norm(x_p), np.linalg.norm(y_p)
        x_n_norm, y_n_norm = np.linalg.norm(x_n), np.linalg.norm(y_n)
        m_p, m_n = x_p_norm * y_p_norm, x_n_norm * y_n_norm

        if m_p >= m_n:
            u, v, sigma = x_p, y_p, m_p
            u_norm, v_norm = x_p_norm, y_p_norm
        else:
            u, v, sigma = x_n, y_n, m_n
            u_norm, v_norm = x_n_norm, y_n_norm
        if sigma == 0:
            continue
        lbd = np.sqrt(S[j] * sigma)
        W[:, j] = lbd * u / u_norm
        H[j, :] = lbd * v / v_norm

    W[W <= 0] = floor
    H[H <= 0] = floor
    return FactorPair(W, H)


def truncated_gaussian_init(m, n, r, seed):
    """
    W0, H0 with entries (1.5 g + 0.5) / 2 where g ~ N(0, 1) clipped at 0.

    Every entry is >= 0.25; the expected entry is (1.5 / sqrt(2 pi) + 0.5) / 2.
    """
    if min(m, n, r) < 1:
        raise DimensionError(f"dimensions must be positive, got {(m, n, r)}")
    rng = np.random.default_rng(seed)
    W = (1.5 * np.maximum(rng.standard_normal((m, r)), 0.0) + 0.5) / 2.0
    H = (1.5 * np.maximum(rng.standard_normal((r, n)), 0.0) + 0.5) / 2.0
    return FactorPair(W, H)


def warm_start(X, r, iters, rule=IS_DIVERGENCE, floor=DEFAULT_FLOOR, exponent=MM_EXPONENT):
    """NNDSVD followed by `iters` unpenalized multiplicative updates on max(X, floor)."""
    X = np.maximum(np.asarray(X, dtype=float), floor)
    pair = nndsvd_init(X, r, floor)
    W, H = pair.W, pair.H
    zeros = np.zeros(r)
    for _ in range(iters):
        W = update_W(X, W, H, rule, floor, exponent)
        H = update_H_full(X, W, H, zeros, floor, exponent)
    logger.debug(f"Warm start finished after {iters} unpenalized iterations")
    return FactorPair(W, H)


def initial_factors(X, config):
    """Dispatch on `config.init`: nndsvd, warm_start or truncated_gaussian."""
    X = np.asarray(X, dtype=float)
    if config.init == 'nndsvd':
        return nndsvd_init(X, config.rank, config.floor)
    if config.init == 'warm_start':
        return warm_start(
            X, config.rank, config.warm_start_iters, config.w_update_rule, config.floor,
            config.update_exponent,
        )
    if config.init == 'truncated_gaussian':
        m, n = X.shape
        return truncated_gaussian_init(m, n, config.rank, config.seed)
    raise ValueError(f"unknown init {config.init!r}")

