"""Draws from ``N_p(A^{-1} b, A^{-1})`` with ``A = X' Omega^{-1} X + Lambda^{-1}``.

Two exact algorithms are provided.  The Cholesky route factors the p x p
precision and costs O(p^3); the dual route of Bhattacharya, Chakraborty and
Mallick works with an n x n system and costs O(n^2 p).  :func:`sample_coefficients`
picks between them from the shape of ``X``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import Generator
from scipy.linalg.lapack import dpotrf, dpotrs, dtrtrs

from .errors import DataError, NumericalError

__all__ = [
    "PrecisionSystem",
    "choose_algorithm",
    "sample_coefficients",
    "sample_coefficients_rue",
    "sample_coefficients_bhattacharya",
]

_JITTER = (1e-10, 1e-8)


@dataclass
class PrecisionSystem:
    """Diagonal-weighted Gaussian regression system.

    Attributes
    ----------
    X : ndarray (n, p)
    omega : ndarray (n,)
        Diagonal of ``Omega`` (noise variances, scale factor included).
    lam : ndarray (p,)
        Diagonal of ``Lambda`` (prior variances of the coefficients).
    target : ndarray (n,)
        Working response ``z - beta0``; the right-hand side is
        ``b = X' Omega^{-1} target``.
    """

    X: np.ndarray
    omega: np.ndarray
    lam: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.omega = np.asarray(self.omega, dtype=float)
        self.lam = np.asarray(self.lam, dtype=float)
        self.target = np.asarray(self.target, dtype=float)
        n, p = self.X.shape
        if self.omega.shape != (n,) or self.target.shape != (n,) or self.lam.shape != (p,):
            raise DataError("PrecisionSystem dimensions are inconsistent")
        if not ((self.omega > 0).all() and (self.lam > 0).all()):
            raise DataError("omega and lam must be strictly positive")

    @classmethod
    def from_rhs(cls, X, omega, lam, b):
        """Build a system from ``b`` directly.

        ``target`` is the minimum-norm solution of ``X' Omega^{-1} t = b``;
        ``b`` must lie in the row space of ``X``.
        """
        X = np.asarray(X, dtype=float)
        omega = np.asarray(omega, dtype=float)
        b = np.asarray(b, dtype=float)
        if np.any(omega <= 0):
            raise DataError("omega and lam must be strictly positive")
        M = X.T / omega
        t, *_ = np.linalg.lstsq(M, b, rcond=None)
        if not np.allclose(M @ t, b, rtol=1e-8, atol=1e-10 * (1 + np.abs(b).max())):
            raise DataError("b is not in the row space of X")
        return cls(X, omega, lam, t)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def rhs(self) -> np.ndarray:
        return self.X.T @ (self.target / self.omega)

    def precision(self) -> np.ndarray:
        """Dense ``A``; only used by Cholesky sampling and by tests."""
        Xw = self.X / np.sqrt(self.omega)[:, None]
        A = Xw.T @ Xw
        A[np.diag_indices_from(A)] += 1.0 / self.lam
        return A


def _cholesky(M: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, retrying with ``eps * diag(M)`` jitter."""
    L, info = dpotrf(M, lower=1, clean=1)
    if info == 0:
        return L
    d = np.diag(M).copy()
    for eps in _JITTER:
        Mj = M.copy()
        Mj[np.diag_indices_from(Mj)] += eps * d
        L, info = dpotrf(Mj, lower=1, clean=1)
        if info == 0:
            return L
    raise NumericalError("Cholesky factorisation failed after jitter")


def _trsolve(L, b, trans=0):
    x, info = dtrtrs(L, b, lower=1, trans=trans)
    if info != 0:
        raise NumericalError("singular triangular factor")
    return x


def sample_coefficients_rue(rng: Generator, sys: PrecisionSystem, size=None, *, precision=None):
    """Cholesky sampler (Rue, 2001).

    With ``A = L L'``: solve ``L v = b``, then ``L' theta = v + eps`` with
    ``eps ~ N(0, I)``, so ``theta`` has mean ``A^{-1} b`` and covariance
    ``A^{-1}``.  ``precision`` may pass a precomputed ``A``.  With ``size``
    the draws are returned as rows of a ``(size, p)`` array.
    """
    A = sys.precision() if precision is None else precision
    L = _cholesky(A)
    v = _trsolve(L, sys.rhs)
    m = 1 if size is None else size
    eps = rng.standard_normal((sys.p, m))
    draws = _trsolve(L, v[:, None] + eps, trans=1)
    return draws[:, 0] if size is None else draws.T


def sample_coefficients_bhattacharya(rng: Generator, sys: PrecisionSystem, size=None):
    """Dual-space sampler (Bhattacharya, Chakraborty and Mallick, 2016).

    With ``Phi = Omega^{-1/2} X`` and ``alpha = Omega^{-1/2} target``:
    draw ``u ~ N(0, Lambda)``, ``delta ~ N(0, I_n)``, set ``v = Phi u + delta``,
    solve ``(Phi Lambda Phi' + I_n) w = alpha - v`` and return
    ``u + Lambda Phi' w``.  No p x p matrix is formed.
    """
    n, p = sys.X.shape
    s = np.sqrt(sys.omega)
    Phi = sys.X / s[:, None]
    alpha = sys.target / s
    m = 1 if size is None else size
    u = np.sqrt(sys.lam)[:, None] * rng.standard_normal((p, m))
    delta = rng.standard_normal((n, m))
    v = Phi @ u + delta
    PL = Phi * sys.lam
    M = PL @ Phi.T
    M[np.diag_indices_from(M)] += 1.0
    w, info = dpotrs(_cholesky(M), alpha[:, None] - v, lower=1)
    if info != 0:
        raise NumericalError("dual system solve failed")
    draws = u + PL.T @ w
    return draws[:, 0] if size is None else draws.T


def choose_algorithm(n: int, p: int) -> str:
    """``"rue"`` when ``p / n < 2``, otherwise ``"bhattacharya"``."""
    return "rue" if p < 2 * n else "bhattacharya"


def sample_coefficients(rng: Generator, sys: PrecisionSystem, size=None):
    if choose_algorithm(sys.n, sys.p) == "rue":
        return sample_coefficients_rue(rng, sys, size)
    return sample_coefficients_bhattacharya(rng, sys, size)
