"""Bundled and synthetic datasets used by the demos and tests."""
from __future__ import annotations

from importlib import resources

import numpy as np

from .gibbs import Dataset
from .samplers import rng_stream

__all__ = ["load_pima", "make_ar1_regression", "make_sparse_laplace_regression", "pima_path"]


def pima_path():
    """Path of the bundled Pima Indians diabetes CSV (768 rows, response ``DIABETES``)."""
    return resources.files("bpreg") / "data" / "pima.csv"


def load_pima() -> Dataset:
    from .io import load_csv

    with resources.as_file(pima_path()) as path:
        return load_csv(path, "DIABETES", model="binomial")


def make_ar1_regression(n=50, p=10, rho=0.5, snr=4.0, beta=None, seed=0):
    """Gaussian design with AR(1) column correlation ``rho**|i-j|``.

    The noise variance is ``var(X @ beta) / snr``.  Returns ``(Dataset, mu)``
    where ``mu = X @ beta`` is the noise-free mean.
    """
    rng = rng_stream(seed)
    if beta is None:
        beta = np.r_[5.0, 3.0, 3.0, 1.0, 1.0, np.zeros(max(p - 5, 0))][:p]
    beta = np.asarray(beta, dtype=float)
    S = rho ** np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    X = rng.standard_normal((n, p)) @ np.linalg.cholesky(S).T
    mu = X @ beta
    s2 = mu.var(ddof=1) / snr
    y = mu + np.sqrt(s2) * rng.standard_normal(n)
    return Dataset(X, y), mu


def make_sparse_laplace_regression(n=50, p=50_000, snr=8.0, beta=None, seed=0):
    """Independent Gaussian design with Laplace noise and a five-sparse signal."""
    rng = rng_stream(seed)
    if beta is None:
        beta = np.zeros(p)
        beta[: min(p, 5)] = [5.0, 5.0, 1.0, 1.0, 1.0][:p]
    X = rng.standard_normal((n, p))
    mu = X @ beta
    s2 = mu.var(ddof=1) / snr
    y = mu + rng.laplace(0.0, np.sqrt(s2 / 2.0), n)
    return Dataset(X, y), mu
