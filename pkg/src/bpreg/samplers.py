"""Seedable random-variate generators used by the Gibbs conditionals.

Parameter conventions are fixed across the package:

* ``Exp(rate)``: mean ``1 / rate``.
* ``IG(shape, scale)``: density proportional to ``x**(-shape - 1) * exp(-scale / x)``.
* ``IGauss(mu, lam)``: mean ``mu``, variance ``mu**3 / lam``.
* ``PG(1, c)``: Polya-gamma with shape 1 and tilt ``c``.

Every sampler takes a :class:`numpy.random.Generator` as its first argument.
Parameters broadcast like numpy ufunc arguments; scalar input gives a float.
"""
from __future__ import annotations

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence
from scipy.special import log_ndtr

from .errors import ParameterError

__all__ = [
    "rng_stream",
    "spawn_streams",
    "sample_standard_normal",
    "sample_exponential",
    "sample_inverse_gamma",
    "sample_inverse_gaussian",
    "sample_polya_gamma",
]

# Truncation point of the Devroye-style PG(1, z) proposal.
_PG_TRUNC = 0.64
_PI2 = np.pi * np.pi


def rng_stream(seed: int, stream: int = 0) -> Generator:
    """Return the generator for stream ``stream`` derived from ``seed``.

    Streams with different indices come from distinct ``SeedSequence`` spawn
    keys and never share state.  PCG64 output is identical across platforms.
    """
    if seed < 0 or stream < 0:
        raise ParameterError("seed and stream index must be non-negative")
    return Generator(PCG64(SeedSequence(seed, spawn_key=(stream,))))


def spawn_streams(seed: int, count: int) -> list[Generator]:
    return [rng_stream(seed, k) for k in range(count)]


def _check_positive(name, value, check=True):
    arr = np.asarray(value, dtype=float)
    if check and not (arr > 0).all():
        raise ParameterError(f"{name} must be strictly positive")
    return arr


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def sample_standard_normal(rng: Generator, size=None):
    return _out(rng.standard_normal(size))


def sample_exponential(rng: Generator, rate, size=None, *, check=True):
    """Draw from ``Exp(rate)`` (mean ``1 / rate``).

    ``check=False`` skips the domain test; the Gibbs updates use it where
    positivity holds by construction.
    """
    rate = _check_positive("rate", rate, check)
    return _out(rng.standard_exponential(size if size is not None else rate.shape) / rate)


def sample_inverse_gamma(rng: Generator, shape, scale, size=None, *, check=True):
    """Draw from ``IG(shape, scale)`` as ``scale / Gamma(shape, 1)``."""
    shape = _check_positive("shape", shape, check)
    scale = _check_positive("scale", scale, check)
    if size is None:
        size = np.broadcast(shape, scale).shape
    return _out(scale / rng.standard_gamma(shape, size))


def sample_inverse_gaussian(rng: Generator, mu, lam, size=None, *, check=True):
    """Draw from ``IGauss(mu, lam)`` by transformation with rejection.

    The smaller root of the quadratic is evaluated as
    ``mu / (1 + r + sqrt(r * (r + 2)))`` with ``r = mu * chi2 / (2 * lam)``,
    which avoids the cancellation of the textbook form when ``mu / lam`` is
    large.
    """
    mu = _check_positive("mu", mu, check)
    lam = _check_positive("lam", lam, check)
    if size is None:
        size = np.broadcast(mu, lam).shape
    return _out(_igauss(rng, np.broadcast_to(mu, size), np.broadcast_to(lam, size)))


def _igauss(rng: Generator, mu: np.ndarray, lam) -> np.ndarray:
    y = rng.standard_normal(mu.shape) ** 2
    r = mu * y / (2.0 * lam)
    x = mu / (1.0 + r + np.sqrt(r * (r + 2.0)))
    u = rng.random(mu.shape)
    return np.where(u <= mu / (mu + x), x, mu * mu / x)


def _pg_series_coef(n: int, x: np.ndarray) -> np.ndarray:
    """Coefficient ``a_n(x)`` of the alternating series for J*(1, z)."""
    k = (n + 0.5) * np.pi
    out = np.empty_like(x)
    right = x > _PG_TRUNC
    xr = x[right]
    out[right] = k * np.exp(-0.5 * k * k * xr)
    xl = x[~right]
    with np.errstate(divide="ignore"):
        expnt = (
            -1.5 * (np.log(0.5 * np.pi) + np.log(xl))
            + np.log(k)
            - 2.0 * (n + 0.5) ** 2 / xl
        )
    out[~right] = np.exp(expnt)
    return out


def _pg_right_mass(z: np.ndarray) -> np.ndarray:
    """Probability of proposing from the exponential (right) piece."""
    t = _PG_TRUNC
    fz = 0.125 * _PI2 + 0.5 * z * z
    b = np.sqrt(1.0 / t) * (t * z - 1.0)
    a = -np.sqrt(1.0 / t) * (t * z + 1.0)
    x0 = np.log(fz) + fz * t
    xb = x0 - z + log_ndtr(b)
    xa = x0 + z + log_ndtr(a)
    q_over_p = 4.0 / np.pi * (np.exp(xb) + np.exp(xa))
    return 1.0 / (1.0 + q_over_p)


def _truncated_inverse_gaussian(rng: Generator, z: np.ndarray) -> np.ndarray:
    """Draw ``IGauss(1/z, 1)`` restricted to ``(0, 0.64)``; ``z >= 0``."""
    t = _PG_TRUNC
    x = np.empty_like(z)
    with np.errstate(divide="ignore", over="ignore"):
        mu = 1.0 / z
    small = mu > t

    # mu beyond the truncation point: proposal from the z = 0 limit with
    # exponential tilting accepted by exp(-z^2 x / 2).
    idx = np.flatnonzero(small)
    while idx.size:
        e1 = rng.standard_exponential(idx.size)
        e2 = rng.standard_exponential(idx.size)
        bad = e1 * e1 > 2.0 * e2 / t
        while np.any(bad):
            nb = int(bad.sum())
            e1[bad] = rng.standard_exponential(nb)
            e2[bad] = rng.standard_exponential(nb)
            bad = e1 * e1 > 2.0 * e2 / t
        cand = t / (1.0 + t * e1) ** 2
        alpha = np.exp(-0.5 * z[idx] ** 2 * cand)
        ok = rng.random(idx.size) <= alpha
        x[idx[ok]] = cand[ok]
        idx = idx[~ok]

    idx = np.flatnonzero(~small)
    while idx.size:
        cand = _igauss(rng, mu[idx], 1.0)
        ok = cand < t
        x[idx[ok]] = cand[ok]
        idx = idx[~ok]
    return x


def sample_polya_gamma(rng: Generator, c, size=None, max_proposals: int = 1000):
    """Exact draw from ``PG(1, c)``.

    Uses the alternating-series accept/reject sampler of Devroye as adapted
    to the Polya-gamma family by Windle, Polson and Scott: propose from a
    truncated inverse Gaussian on ``(0, 0.64)`` or a shifted exponential on
    ``[0.64, inf)``, then accept by partial sums of the series.

    Raises :class:`RuntimeError` if any single variate needs more than
    ``max_proposals`` proposals; the expected number is below ``1.0001``.
    """
    c = np.asarray(c, dtype=float)
    if size is not None:
        c = np.broadcast_to(c, size)
    shape = c.shape
    z = np.abs(c).ravel() * 0.5
    out = np.empty_like(z)
    fz = 0.125 * _PI2 + 0.5 * z * z
    p_right = _pg_right_mass(z)

    idx = np.arange(z.size)
    rounds = 0
    while idx.size:
        rounds += 1
        if rounds > max_proposals:
            raise RuntimeError("Polya-gamma sampler exceeded proposal budget")
        zi = z[idx]
        right = rng.random(idx.size) < p_right[idx]
        x = np.empty(idx.size)
        x[right] = _PG_TRUNC + rng.standard_exponential(int(right.sum())) / fz[idx[right]]
        if not np.all(right):
            x[~right] = _truncated_inverse_gaussian(rng, zi[~right])

        s = _pg_series_coef(0, x)
        y = rng.random(idx.size) * s
        undecided = np.ones(idx.size, dtype=bool)
        accepted = np.zeros(idx.size, dtype=bool)
        n = 0
        while np.any(undecided):
            n += 1
            u = np.flatnonzero(undecided)
            a_n = _pg_series_coef(n, x[u])
            if n % 2 == 1:
                s[u] -= a_n
                hit = y[u] <= s[u]
                accepted[u[hit]] = True
                undecided[u[hit]] = False
            else:
                s[u] += a_n
                undecided[u[y[u] > s[u]]] = False
        out[idx[accepted]] = 0.25 * x[accepted]
        idx = idx[~accepted]

    out = out.reshape(shape)
    return _out(out)
