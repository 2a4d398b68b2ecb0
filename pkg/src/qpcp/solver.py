"""Principal component pursuit over the reals, complexes and quaternions.

Solves  min ||A||_* + lambda * ||E||_1  subject to  X = A + E  with the
inexact augmented Lagrange multiplier iteration: alternate the trace-norm
and l1 proximity operators with thresholds 1/mu and lambda/mu, follow
with the dual update Y <- Y + mu (X - A - E), and grow the penalty mu
geometrically.  The same code runs over all three fields because the
proximity operators and norms dispatch on the matrix type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .linalg import (MatrixLike, QMatrix, frobenius_norm, max_abs,
                     spectral_norm, svd, zeros_like)
from .prox import prox_l1, prox_trace

__all__ = ["SolverConfig", "PcpSolution", "pcp_lambda", "pcp_solve"]

_EPS = np.finfo(np.float64).eps


def pcp_lambda(shape: tuple[int, int], k: float = 1.0) -> float:
    """The sparsity trade-off weight k / sqrt(max(m, n)).

    k = 1 carries the exact-recovery guarantee for generic low-rank plus
    sparse inputs; larger k favours a lower-rank A (k around 1.5-3 works
    well on music spectrograms).
    """
    m, n = shape
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be at least 1")
    if k <= 0:
        raise ValueError("k must be positive")
    return k / math.sqrt(max(m, n))


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for :func:`pcp_solve`.

    mu0 is the initial penalty; None picks 1.25 / ||X||_2.  The penalty
    grows by rho each sweep, capped at 1e7 times its start value.
    Iteration stops when ||X - A - E||_F / ||X||_F drops below tol.
    """

    k: float = 1.0
    mu0: Optional[float] = None
    rho: float = 1.6
    tol: float = 1e-7
    max_iters: int = 1000

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        if self.mu0 is not None and self.mu0 <= 0:
            raise ValueError("mu0 must be positive")
        if self.rho <= 1:
            raise ValueError("rho must exceed 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class PcpSolution:
    """Decomposition X ~ A + E plus convergence diagnostics.

    residuals holds ||X - A_k - E_k||_F / ||X||_F per iteration; rank_A is
    the numerical rank of A at exit and nnz_E counts entries of E with
    magnitude above 1e-12.  converged is False when max_iters ran out,
    which is reported rather than raised.
    """

    A: MatrixLike
    E: MatrixLike
    iterations: int
    residuals: list[float] = field(default_factory=list)
    converged: bool = True
    rank_A: int = 0
    nnz_E: int = 0
    lam: float = 0.0


def _entry_mags(M: MatrixLike) -> np.ndarray:
    return abs(M) if isinstance(M, QMatrix) else np.abs(np.asarray(M))


def _numerical_rank(M: MatrixLike) -> int:
    sigma = svd(M).sigma
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    cutoff = sigma[0] * max(M.shape) * _EPS
    return int(np.count_nonzero(sigma > cutoff))


def _check_input(X: MatrixLike) -> None:
    if isinstance(X, QMatrix):
        if X.size == 0:
            raise ValueError("input matrix must be nonempty")
        if not X.isfinite():
            raise ValueError("input matrix has non-finite entries")
        return
    X = np.asarray(X)
    if X.size == 0:
        raise ValueError("input matrix must be nonempty")
    if not np.all(np.isfinite(X)):
        raise ValueError("input matrix has non-finite entries")


def pcp_solve(X: MatrixLike,
              config: SolverConfig = SolverConfig(),
              callback: Optional[Callable[[int, float], None]] = None,
              ) -> PcpSolution:
    """Split X into a low-rank A and a sparse E by augmented Lagrangian PCP.

    Parameters
    ----------
    X : real/complex ndarray or QMatrix
        The matrix to decompose; must be finite and nonempty.
    config : SolverConfig
        Trade-off k, penalty schedule and stopping rule.
    callback : callable, optional
        Invoked as callback(iteration, relative_residual) once per sweep,
        on the calling thread.

    Returns
    -------
    PcpSolution
        With A + E = X up to config.tol relative when converged is True.
    """
    _check_input(X)
    if not isinstance(X, QMatrix):
        X = np.asarray(X)
        X = X.astype(np.complex128 if np.iscomplexobj(X) else np.float64,
                     copy=False)
    m, n = X.shape
    lam = pcp_lambda((m, n), config.k)
    norm_x = frobenius_norm(X)
    if norm_x == 0.0:
        sol = PcpSolution(zeros_like(X), zeros_like(X), iterations=0,
                          residuals=[0.0], lam=lam)
        return sol

    norm_two = spectral_norm(X)
    norm_inf = max_abs(X)
    Y = X / max(norm_two, norm_inf / lam)
    E = zeros_like(X)
    mu = config.mu0 if config.mu0 is not None else 1.25 / norm_two
    mu_max = mu * 1e7

    residuals: list[float] = []
    A = zeros_like(X)
    converged = False
    iterations = 0
    for it in range(1, config.max_iters + 1):
        iterations = it
        A = prox_trace(X - E + Y / mu, 1.0 / mu)
        E = prox_l1(X - A + Y / mu, lam / mu)
        R = X - A - E
        Y = Y + R * mu
        res = frobenius_norm(R) / norm_x
        residuals.append(res)
        if callback is not None:
            callback(it, res)
        if res < config.tol:
            converged = True
            break
        mu = min(mu * config.rho, mu_max)

    return PcpSolution(
        A=A,
        E=E,
        iterations=iterations,
        residuals=residuals,
        converged=converged,
        rank_A=_numerical_rank(A),
        nnz_E=int(np.count_nonzero(_entry_mags(E) > 1e-12)),
        lam=lam,
    )
