# factorization/core/metrics.py
"""
Factor-quality metrics (SIR, sparsity) and the nonparametric comparison
pipeline: Kruskal-Wallis across algorithms, then pairwise Mann-Whitney tests
with Benjamini-Hochberg adjustment.
"""
import itertools
import logging

import numpy as np
from scipy import stats
from statsmodels.stats.multitest import multipletests

from ..exceptions import DimensionError, DomainError
from ..models import SirReport, TestResult

logger = logging.getLogger(__name__)

SIR_CAP_DB = 300.0
SPARSITY_TAU = 1e-6
EXACT_LIMIT = 12


def _unit_rows(components, label):
    A = np.atleast_2d(np.asarray(components, dtype=float))
    norms = np.linalg.norm(A, axis=1)
    zero = np.flatnonzero(norms == 0)
    if zero.size:
        raise DomainError(f"{label} component {int(zero[0])} is the zero vector", index=(int(zero[0]),))
    return A / norms[:, None]


def greedy_matching(C):
    """
    Pair rows and columns of |C| by repeatedly taking the largest remaining
    entry. Returns perm with perm[i] = column matched to row i.
    """
    C = np.abs(np.asarray(C, dtype=float))
    r = C.shape[0]
    perm = [-1] * r
    available = np.ones_like(C, dtype=bool)
    for _ in range(r):
        masked = np.where(available, C, -np.inf)
        i, j = np.unravel_index(np.argmax(masked), C.shape)
        perm[int(i)] = int(j)
        available[i, :] = False
        available[:, j] = False
    return tuple(perm)


def sir(true_components, est_components, cap_db=SIR_CAP_DB):
    """
    Signal-to-interference ratio (dB) of matched components.

    Both sets are scaled to unit l2 norm, matched greedily on absolute cosine
    similarity, and each estimate is aligned to its truth by the least-squares
    scale c = <a, a_hat>:

        SIR = 10 log10(||a||^2 / ||a - c a_hat||^2),  capped at cap_db.

    Pass W.T to score the columns of W and H to score the rows of H.
    """
    truth = _unit_rows(true_components, 'true')
    est = _unit_rows(est_components, 'estimated')
    if truth.shape != est.shape:
        raise DimensionError(f"true components {truth.shape} and estimates {est.shape} differ in shape")

    perm = greedy_matching(truth @ est.T)
    per_component = []
    for i, j in enumerate(perm):
        a, a_hat = truth[i], est[j]
        interference = float(np.sum((a - (a @ a_hat) * a_hat) ** 2))
        if interference <= 0.0:
            per_component.append(cap_db)
        else:
            per_component.append(min(cap_db, 10.0 * np.log10(1.0 / interference)))
    return SirReport(per_component=tuple(float(v) for v in per_component), permutation=perm)


def sparsity(A, tau=SPARSITY_TAU):
    """Sp(A) = (1 - #{a_ij > tau} / (m n)) * 100."""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise DomainError("sparsity needs a finite matrix", index=np.argwhere(~np.isfinite(A))[0])
    return float((1.0 - np.count_nonzero(A > tau) / A.size) * 100.0)


def _sample(values, name):
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size < 2:
        raise DomainError(f"sample {name} needs at least 2 observations, got {values.size}")
    return values


def mann_whitney(x, y, method='auto'):
    """
    Two-sided Mann-Whitney U test.

    method='auto' enumerates the exact null distribution when n + m <= 12
    and there are no ties, and otherwise uses the tie-corrected normal
    approximation with continuity correction.
    """
    x = _sample(x, 'x')
    y = _sample(y, 'y')
    pooled = np.concatenate([x, y])
    if np.all(pooled == pooled[0]):
        return TestResult(statistic=x.size * y.size / 2.0, p_value=1.0)
    if method == 'auto':
        has_ties = np.unique(pooled).size < pooled.size
        method = 'exact' if pooled.size <= EXACT_LIMIT and not has_ties else 'asymptotic'
    if method not in ('exact', 'asymptotic'):
        raise ValueError(f"unknown Mann-Whitney method {method!r}")
    result = stats.mannwhitneyu(x, y, alternative='two-sided', method=method, use_continuity=True)
    return TestResult(statistic=float(result.statistic), p_value=float(min(1.0, result.pvalue)))


def kruskal_wallis(groups):
    """
    Kruskal-Wallis H test with tie correction; p from chi-squared with
    len(groups) - 1 degrees of freedom. All-equal data gives H = 0, p = 1.
    """
    if len(groups) < 2:
        raise DomainError(f"Kruskal-Wallis needs at least 2 groups, got {len(groups)}")
    samples = [_sample(g, f"group {i}") for i, g in enumerate(groups)]
    pooled = np.concatenate(samples)
    if np.all(pooled == pooled[0]):
        return TestResult(statistic=0.0, p_value=1.0)
    result = stats.kruskal(*samples)
    return TestResult(statistic=float(result.statistic), p_value=float(result.pvalue))


def bh_adjust(p_values):
    """Benjamini-Hochberg step-up adjusted p-values, in input order."""
    p = np.asarray(p_values, dtype=float).reshape(-1)
    if p.size == 0:
        return p
    if np.any((p < 0) | (p > 1)) or not np.all(np.isfinite(p)):
        bad = int(np.flatnonzero(~((p >= 0) & (p <= 1)))[0])
        raise DomainError(f"p-value {p[bad]} outside [0, 1]", index=(bad,))
    _, adjusted, _, _ = multipletests(p, method='fdr_bh')
    return adjusted


def pairwise_comparisons(samples):
    """
    Mann-Whitney test for every pair of named samples, all p-values adjusted
    together with Benjamini-Hochberg.

    Args:
        samples: mapping of algorithm name to its per-run metric values

    Returns:
        list of dicts (a, b, statistic, p_value, p_adjusted), pairs in the
        mapping's order
    """
    names = list(samples)
    rows = []
    for a, b in itertools.combinations(names, 2):
        result = mann_whitney(samples[a], samples[b])
        rows.append({'a': a, 'b': b, 'statistic': result.statistic, 'p_value': result.p_value})
    adjusted = bh_adjust([row['p_value'] for row in rows])
    for row, p_adj in zip(rows, adjusted):
        row['p_adjusted'] = float(p_adj)
    return rows


def compare_groups(samples):
    """Kruskal-Wallis over all samples followed by the pairwise table."""
    kruskal = kruskal_wallis([samples[name] for name in samples])
    logger.debug(f"Kruskal-Wallis over {len(samples)} groups: H={kruskal.statistic:.4g} p={kruskal.p_value:.3g}")
    return kruskal, pairwise_comparisons(samples)


def mean_std(values):
    """(mean, sample standard deviation); std is 0 for a single value."""
    values = np.asarray(values, dtype=float).reshape(-1)
    if values.size == 0:
        raise DomainError("mean_std needs at least one value")
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return float(np.mean(values)), std


def score_factors(W_true, H_true, W, H, sir_cap_db=SIR_CAP_DB, tau=SPARSITY_TAU):
    """SIR of W's columns and H's rows against ground truth, plus the sparsity of W and H."""
    W_true, H_true = np.asarray(W_true, dtype=float), np.asarray(H_true, dtype=float)
    W, H = np.asarray(W, dtype=float), np.asarray(H, dtype=float)
    if W_true.shape != W.shape or H_true.shape != H.shape:
        raise DimensionError(
            f"estimate W {W.shape}, H {H.shape} does not match truth W {W_true.shape}, H {H_true.shape}"
        )
    sir_W = sir(W_true.T, W.T, sir_cap_db)
    sir_H = sir(H_true, H, sir_cap_db)
    return {
        'sir_W': sir_W.mean,
        'sir_H': sir_H.mean,
        'sir_W_components': list(sir_W.per_component),
        'sir_H_components': list(sir_H.per_component),
        'permutation_W': list(sir_W.permutation),
        'permutation_H': list(sir_H.permutation),
        'sp_W': sparsity(W, tau),
        'sp_H': sparsity(H, tau),
    }
