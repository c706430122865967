"""Joint eigenvalue densities on the probability simplex."""

from __future__ import annotations

import math

import numpy as np

from .special import log_gamma

SIMPLEX_TOL = 1e-10


def _check_simplex(lambdas, n: int) -> np.ndarray:
    lam = np.asarray(lambdas, dtype=float).reshape(-1)
    if lam.size != n:
        raise ValueError(f"expected {n} eigenvalues, got {lam.size}")
    if np.any(lam <= 0) or abs(lam.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError("eigenvalues must lie in the open simplex")
    return lam


def log_constant_induced(n: int, K: int) -> float:
    """``log C_{N,K} = log Gamma(KN) - sum_j [log Gamma(K-j) + log Gamma(N-j+1)]``."""
    out = log_gamma(K * n)[0]
    for j in range(n):
        out -= log_gamma(K - j)[0] + log_gamma(n - j + 1)[0]
    return out


def log_constant_bures(n: int) -> float:
    out = (n * n - n) * math.log(2.0) + log_gamma(n * n / 2.0)[0] - 0.5 * n * math.log(math.pi)
    for j in range(1, n + 1):
        out -= log_gamma(j + 1)[0]
    return out


def _log_vandermonde_sq(lam: np.ndarray) -> float:
    i, j = np.triu_indices(lam.size, 1)
    diff = np.abs(lam[i] - lam[j])
    if np.any(diff == 0):
        return -math.inf
    return 2.0 * float(np.sum(np.log(diff)))


def joint_logdensity_induced(lambdas, n: int, K: int) -> float:
    """Log of ``C_{N,K} prod lambda_i^(K-N) prod_{i<j} (lambda_i - lambda_j)^2``.

    Coincident eigenvalues return ``-inf``.
    """
    if K < n:
        raise ValueError("induced joint density is implemented for K >= N only")
    lam = _check_simplex(lambdas, n)
    vdm = _log_vandermonde_sq(lam)
    if vdm == -math.inf:
        return -math.inf
    return log_constant_induced(n, K) + (K - n) * float(np.sum(np.log(lam))) + vdm


def joint_logdensity_bures(lambdas, n: int) -> float:
    """Log of the Bures joint eigenvalue density; ``-inf`` for coincident eigenvalues."""
    lam = _check_simplex(lambdas, n)
    vdm = _log_vandermonde_sq(lam)
    if vdm == -math.inf:
        return -math.inf
    i, j = np.triu_indices(n, 1)
    return (log_constant_bures(n) - 0.5 * float(np.sum(np.log(lam))) + vdm
            - float(np.sum(np.log(lam[i] + lam[j]))))
