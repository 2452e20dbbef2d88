"""Gibbs sampler for penalised linear and logistic regression.

The hierarchy is

    z_i ~ N(x_i' beta + beta0, sigma2 * omega2_i)
    beta_j ~ N(0, sigma2 * tau2 * lambda2_j)
    tau ~ C+(0, 1)

with the error model fixing the law of ``omega2`` and the prior fixing the
law of ``lambda2``.  Half-Cauchy scales are expanded into inverse-gamma
pairs so that every conditional is a standard distribution.

The ``update_*`` functions modify a :class:`ChainState` in place and also
return the new value.  The local and global shrinkage updates and the
heavy-tailed error updates broadcast over leading batch axes, which
:func:`run_prior_chain` uses to run many independent chains at once.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.random import Generator

from .errors import BpregError, DataError, ParameterError
from .mvn import PrecisionSystem, choose_algorithm, sample_coefficients, sample_coefficients_rue
from .samplers import (
    rng_stream,
    sample_exponential,
    sample_inverse_gamma,
    sample_inverse_gaussian,
    sample_polya_gamma,
)

FLOOR = 1e-12
CAP = 1e12
SQUARE_FLOOR = 1e-30


class Model(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    STUDENT_T = "t"
    BINOMIAL = "binomial"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {
            "gaussian": cls.GAUSSIAN, "normal": cls.GAUSSIAN,
            "laplace": cls.LAPLACE, "l1": cls.LAPLACE,
            "t": cls.STUDENT_T, "student_t": cls.STUDENT_T, "student": cls.STUDENT_T,
            "binomial": cls.BINOMIAL, "logistic": cls.BINOMIAL,
        }
        if key not in aliases:
            raise ParameterError(f"unknown error model {value!r}")
        return aliases[key]

    @property
    def is_linear(self) -> bool:
        return self is not Model.BINOMIAL


class Prior(str, enum.Enum):
    RIDGE = "ridge"
    LASSO = "lasso"
    HORSESHOE = "hs"
    HORSESHOE_PLUS = "hs+"

    @classmethod
    def parse(cls, value) -> "Prior":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        aliases = {
            "ridge": cls.RIDGE, "rr": cls.RIDGE,
            "lasso": cls.LASSO,
            "hs": cls.HORSESHOE, "horseshoe": cls.HORSESHOE,
            "hs+": cls.HORSESHOE_PLUS, "horseshoe+": cls.HORSESHOE_PLUS,
            "horseshoe_plus": cls.HORSESHOE_PLUS,
        }
        if key not in aliases:
            raise ParameterError(f"unknown prior {value!r}")
        return aliases[key]

    @property
    def label(self) -> str:
        return {"ridge": "ridge", "lasso": "lasso", "hs": "horseshoe", "hs+": "horseshoe+"}[self.value]


@dataclass
class Dataset:
    """Design matrix ``X`` (no intercept column), response ``y`` and names."""

    X: np.ndarray
    y: np.ndarray
    names: list[str] | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float).ravel()
        if self.X.ndim != 2:
            raise DataError("X must be a two-dimensional array")
        n, p = self.X.shape
        if n < 1 or p < 1:
            raise DataError("X must have at least one row and one column")
        if self.y.shape != (n,):
            raise DataError(f"y has {self.y.size} entries but X has {n} rows")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise DataError("X and y must be finite")
        if self.names is None:
            self.names = [f"v{j + 1}" for j in range(p)]
        self.names = [str(s) for s in self.names]
        if len(self.names) != p:
            raise DataError("number of variable names does not match X")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def check_model(self, model: Model):
        if model is Model.BINOMIAL and not np.all((self.y == 0) | (self.y == 1)):
            raise DataError("binomial model requires y in {0, 1}")


@dataclass(frozen=True)
class SamplerConfig:
    model: Model | str = Model.GAUSSIAN
    prior: Prior | str = Prior.RIDGE
    nsamples: int = 1000
    burnin: int = 1000
    thin: int = 5
    tdof: float = 5.0
    seed: int = 0
    standardize: bool = True

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        object.__setattr__(self, "prior", Prior.parse(self.prior))
        if int(self.nsamples) < 1 or int(self.thin) < 1 or int(self.burnin) < 0:
            raise ParameterError("nsamples and thin must be >= 1 and burnin >= 0")
        if not self.tdof > 0:
            raise ParameterError("tdof must be positive")
        if int(self.seed) < 0:
            raise ParameterError("seed must be non-negative")

    @property
    def total_sweeps(self) -> int:
        return self.burnin + self.nsamples * self.thin


@dataclass
class ChainState:
    beta0: float | np.ndarray
    beta: np.ndarray
    sigma2: float | np.ndarray
    omega2: np.ndarray
    tau2: float | np.ndarray
    xi: float | np.ndarray
    lambda2: np.ndarray
    nu: np.ndarray
    phi2: np.ndarray
    zeta: np.ndarray

    @classmethod
    def initial(cls, data: Dataset, config: SamplerConfig):
        n, p = data.n, data.p
        if config.model.is_linear:
            beta0 = float(np.mean(data.y))
            sigma2 = float(np.var(data.y)) if n > 1 and np.var(data.y) > 0 else 1.0
        else:
            ybar = np.clip(np.mean(data.y), 1e-12, 1 - 1e-12)
            beta0 = float(np.clip(np.log(ybar / (1 - ybar)), -10.0, 10.0))
            sigma2 = 1.0
        ones_p = np.ones(p)
        return cls(
            beta0=beta0, beta=np.zeros(p), sigma2=sigma2, omega2=np.ones(n),
            tau2=1.0, xi=1.0, lambda2=ones_p.copy(), nu=ones_p.copy(),
            phi2=ones_p.copy(), zeta=ones_p.copy(),
        )

    def violations(self) -> list[str]:
        """Names of fields breaking the positivity / finiteness invariants."""
        bad = []
        for name in ("sigma2", "omega2", "tau2", "xi", "lambda2", "nu", "phi2", "zeta"):
            v = np.asarray(getattr(self, name))
            if not (np.all(np.isfinite(v)) and np.all(v > 0)):
                bad.append(name)
        for name in ("beta0", "beta"):
            if not np.all(np.isfinite(getattr(self, name))):
                bad.append(name)
        return bad

    def copy(self) -> "ChainState":
        return replace(self, **{k: np.copy(v) for k, v in vars(self).items()})


@dataclass
class GibbsWorkspace:
    """Working response ``z``, residuals ``e`` and the fit ``X beta``."""

    z: np.ndarray | None = None
    e: np.ndarray | None = None
    xb: np.ndarray | None = None
    X: np.ndarray | None = None
    y: np.ndarray | None = None
    XtX: np.ndarray | None = None

    @classmethod
    def build(cls, X: np.ndarray, y: np.ndarray, state: ChainState, model: Model):
        ws = cls(X=X, y=y)
        if model is Model.GAUSSIAN:
            ws.XtX = X.T @ X
        ws.z = y.copy() if model.is_linear else state.omega2 * (y - 0.5)
        ws.xb = X @ state.beta
        ws.e = ws.z - ws.xb - state.beta0
        return ws

    def refresh(self, state: ChainState):
        self.e = self.z - self.xb - state.beta0


@dataclass
class PosteriorDraws:
    """Retained draws; ``beta`` and ``lambda2`` are stored ``(p, N)``."""

    beta0: np.ndarray
    beta: np.ndarray
    sigma2: np.ndarray
    tau2: np.ndarray
    names: list[str]
    model: Model
    prior: Prior
    config: SamplerConfig | None = None
    lambda2: np.ndarray | None = None
    chain: np.ndarray | None = None
    algorithm: str | None = None

    def __post_init__(self):
        if self.chain is None:
            self.chain = np.zeros(self.beta0.size, dtype=int)

    @property
    def nsamples(self) -> int:
        return self.beta0.size

    @property
    def p(self) -> int:
        return self.beta.shape[0]

    @classmethod
    def concatenate(cls, parts: Sequence["PosteriorDraws"]) -> "PosteriorDraws":
        first = parts[0]
        lam = None
        if all(d.lambda2 is not None for d in parts):
            lam = np.concatenate([d.lambda2 for d in parts], axis=1)
        return cls(
            beta0=np.concatenate([d.beta0 for d in parts]),
            beta=np.concatenate([d.beta for d in parts], axis=1),
            sigma2=np.concatenate([d.sigma2 for d in parts]),
            tau2=np.concatenate([d.tau2 for d in parts]),
            names=list(first.names), model=first.model, prior=first.prior,
            config=first.config, lambda2=lam,
            chain=np.concatenate([d.chain for d in parts]),
            algorithm=first.algorithm,
        )


def _col(x):
    return np.asarray(x)[..., None]


def _bound(x):
    return np.clip(x, FLOOR, CAP)


# ---------------------------------------------------------------------------
# Error-model updates
# ---------------------------------------------------------------------------


def update_omega2_gaussian(state: ChainState):
    return state.omega2


def update_omega2_laplace(rng: Generator, state: ChainState, ws: GibbsWorkspace):
    """``1 / omega2_i ~ IGauss(sqrt(2 sigma2 / e_i^2), 2)``."""
    e2 = np.maximum(ws.e ** 2, SQUARE_FLOOR)
    mu = np.sqrt(2.0 * _col(state.sigma2) / e2)
    state.omega2 = _bound(1.0 / sample_inverse_gaussian(rng, mu, 2.0, check=False))
    return state.omega2


def update_omega2_student_t(rng: Generator, state: ChainState, ws: GibbsWorkspace, tdof: float):
    """``omega2_i ~ IG((tdof + 1) / 2, (e_i^2 / sigma2 + tdof) / 2)``."""
    scale = 0.5 * (ws.e ** 2 / _col(state.sigma2) + tdof)
    draw = sample_inverse_gamma(rng, 0.5 * (tdof + 1.0), scale, check=False)
    state.omega2 = _bound(np.atleast_1d(draw))
    return state.omega2


def update_omega2_logistic(rng: Generator, state: ChainState, ws: GibbsWorkspace):
    """Polya-gamma step: ``1 / omega2_i ~ PG(1, beta0 + x_i' beta)``.

    Also resets the working response ``z_i = omega2_i (y_i - 1/2)``.
    """
    c = state.beta0 + ws.xb
    g = np.atleast_1d(sample_polya_gamma(rng, c))
    state.omega2 = _bound(1.0 / g)
    ws.z = state.omega2 * (ws.y - 0.5)
    return state.omega2


# ---------------------------------------------------------------------------
# Coefficients and scale
# ---------------------------------------------------------------------------


def coefficient_system(state: ChainState, ws: GibbsWorkspace) -> PrecisionSystem:
    omega = state.sigma2 * state.omega2
    lam = state.sigma2 * state.tau2 * np.maximum(state.lambda2, FLOOR)
    return PrecisionSystem(ws.X, omega, lam, ws.z - state.beta0)


def update_beta(rng: Generator, state: ChainState, ws: GibbsWorkspace):
    sys = coefficient_system(state, ws)
    if ws.XtX is not None and choose_algorithm(sys.n, sys.p) == "rue":
        # Unit omega2: X' Omega^{-1} X is a rescaled cached X'X.
        A = ws.XtX / state.sigma2
        A[np.diag_indices_from(A)] += 1.0 / sys.lam
        state.beta = sample_coefficients_rue(rng, sys, precision=A)
    else:
        state.beta = sample_coefficients(rng, sys)
    ws.xb = ws.X @ state.beta
    return state.beta


def update_beta0(rng: Generator, state: ChainState, ws: GibbsWorkspace):
    w = 1.0 / state.omega2
    sw = w.sum()
    mean = np.dot(ws.z - ws.xb, w) / sw
    state.beta0 = float(mean + np.sqrt(state.sigma2 / sw) * rng.standard_normal())
    return state.beta0


def update_sigma2(rng: Generator, state: ChainState, ws: GibbsWorkspace, model: Model = Model.GAUSSIAN):
    if not model.is_linear:
        raise BpregError("sigma2 is fixed at 1 for the binomial model")
    n, p = ws.e.size, state.beta.size
    scale = 0.5 * (
        np.sum(ws.e ** 2 / state.omega2)
        + np.sum(state.beta ** 2 / (state.tau2 * state.lambda2))
    )
    state.sigma2 = float(sample_inverse_gamma(rng, 0.5 * (n + p), max(scale, SQUARE_FLOOR), check=False))
    return state.sigma2


# ---------------------------------------------------------------------------
# Shrinkage updates
# ---------------------------------------------------------------------------


def update_local_ridge(state: ChainState):
    return state.lambda2


def update_local_lasso(rng: Generator, state: ChainState):
    """``1 / lambda2_j ~ IGauss(sqrt(2 tau2 sigma2 / beta_j^2), 2)``."""
    b2 = np.maximum(state.beta ** 2, SQUARE_FLOOR)
    mu = np.sqrt(2.0 * _col(state.tau2) * _col(state.sigma2) / b2)
    state.lambda2 = _bound(1.0 / sample_inverse_gaussian(rng, mu, 2.0, check=False))
    return state.lambda2


def _local_rate(state: ChainState):
    return 1.0 / state.nu + state.beta ** 2 / (2.0 * _col(state.tau2) * _col(state.sigma2))


def update_local_horseshoe(rng: Generator, state: ChainState):
    state.lambda2 = _bound(1.0 / sample_exponential(rng, _local_rate(state), check=False))
    state.nu = _bound(1.0 / sample_exponential(rng, 1.0 + 1.0 / state.lambda2, check=False))
    return state.lambda2, state.nu


def update_local_horseshoe_plus(rng: Generator, state: ChainState):
    state.lambda2 = _bound(1.0 / sample_exponential(rng, _local_rate(state), check=False))
    state.nu = _bound(1.0 / sample_exponential(rng, 1.0 / state.phi2 + 1.0 / state.lambda2, check=False))
    state.phi2 = _bound(1.0 / sample_exponential(rng, 1.0 / state.nu + 1.0 / state.zeta, check=False))
    state.zeta = _bound(1.0 / sample_exponential(rng, 1.0 + 1.0 / state.phi2, check=False))
    return state.lambda2, state.nu, state.phi2, state.zeta


def update_tau2(rng: Generator, state: ChainState):
    """``tau2 ~ IG((p + 1) / 2, 1 / xi + sum(beta^2 / lambda2) / (2 sigma2))``."""
    p = np.shape(state.beta)[-1]
    scale = 1.0 / np.asarray(state.xi) + np.sum(state.beta ** 2 / state.lambda2, axis=-1) / (
        2.0 * np.asarray(state.sigma2)
    )
    state.tau2 = _bound(sample_inverse_gamma(rng, 0.5 * (p + 1), scale, check=False))
    return state.tau2


def update_xi(rng: Generator, state: ChainState):
    state.xi = _bound(sample_inverse_gamma(rng, 1.0, 1.0 + 1.0 / np.asarray(state.tau2), check=False))
    return state.xi


def _as_float(state: ChainState):
    for name in ("tau2", "xi"):
        v = getattr(state, name)
        if np.ndim(v) == 0:
            setattr(state, name, float(v))


def update_local(rng: Generator, state: ChainState, prior: Prior):
    if prior is Prior.LASSO:
        update_local_lasso(rng, state)
    elif prior is Prior.HORSESHOE:
        update_local_horseshoe(rng, state)
    elif prior is Prior.HORSESHOE_PLUS:
        update_local_horseshoe_plus(rng, state)
    else:
        update_local_ridge(state)


def update_omega2(rng: Generator, state: ChainState, ws: GibbsWorkspace, model: Model, tdof: float):
    if model is Model.LAPLACE:
        update_omega2_laplace(rng, state, ws)
    elif model is Model.STUDENT_T:
        update_omega2_student_t(rng, state, ws, tdof)
    elif model is Model.BINOMIAL:
        update_omega2_logistic(rng, state, ws)
    else:
        update_omega2_gaussian(state)


# ---------------------------------------------------------------------------
# Sweep and chain
# ---------------------------------------------------------------------------

FREEZABLE = frozenset({"omega2", "beta", "beta0", "sigma2", "lambda2", "tau2"})


def gibbs_sweep(
    rng: Generator,
    state: ChainState,
    ws: GibbsWorkspace,
    config: SamplerConfig,
    frozen: frozenset = frozenset(),
) -> ChainState:
    """One pass: omega2, beta, beta0, sigma2, local scales, tau2 and xi.

    ``frozen`` names blocks to hold fixed; it exists for testing against
    conjugate closed forms.
    """
    model = config.model
    if "omega2" not in frozen:
        update_omega2(rng, state, ws, model, config.tdof)
    if "beta" not in frozen:
        update_beta(rng, state, ws)
    if "beta0" not in frozen:
        update_beta0(rng, state, ws)
    ws.refresh(state)
    if model.is_linear and "sigma2" not in frozen:
        update_sigma2(rng, state, ws, model)
    if "lambda2" not in frozen:
        update_local(rng, state, config.prior)
    if "tau2" not in frozen:
        update_tau2(rng, state)
        update_xi(rng, state)
        _as_float(state)
    return state


def standardize_columns(X: np.ndarray):
    """Centre and scale columns; returns ``(Xs, mean, scale)``."""
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    zero = np.flatnonzero(scale <= 1e-12 * np.maximum(1.0, np.abs(mean)))
    if zero.size:
        raise DataError(f"predictor column(s) {list(zero + 1)} have zero variance")
    return (X - mean) / scale, mean, scale


def run_chain(
    data: Dataset,
    config: SamplerConfig,
    *,
    chain: int = 0,
    store_lambda2: bool = False,
    callback: Callable[[int, ChainState], None] | None = None,
    init: dict | None = None,
    frozen: Iterable[str] = (),
) -> PosteriorDraws:
    """Run ``burnin + nsamples * thin`` sweeps and keep every ``thin``-th.

    With ``config.standardize`` the sampler sees centred, unit-variance
    columns; stored ``beta`` and ``beta0`` are mapped back to the original
    predictor scale.  ``callback(sweep, state)`` is called after every sweep.
    ``init`` overrides starting values and ``frozen`` (testing only) holds
    blocks fixed.
    """
    frozen = frozenset(frozen)
    if not frozen <= FREEZABLE:
        raise ParameterError(f"cannot freeze {sorted(frozen - FREEZABLE)}")
    model = config.model
    data.check_model(model)
    if config.standardize:
        X, xm, xs = standardize_columns(data.X)
    else:
        X, xm, xs = data.X, np.zeros(data.p), np.ones(data.p)

    rng = rng_stream(config.seed, chain)
    state = ChainState.initial(data, config)
    for k, v in (init or {}).items():
        setattr(state, k, np.array(v, dtype=float) if np.ndim(v) else float(v))
    ws = GibbsWorkspace.build(X, data.y, state, model)

    N = config.nsamples
    beta0 = np.empty(N)
    beta = np.empty((data.p, N))
    sigma2 = np.empty(N)
    tau2 = np.empty(N)
    lam = np.empty((data.p, N)) if store_lambda2 else None

    k = 0
    for sweep in range(config.total_sweeps):
        gibbs_sweep(rng, state, ws, config, frozen)
        if callback is not None:
            callback(sweep, state)
        if sweep >= config.burnin and (sweep - config.burnin + 1) % config.thin == 0:
            b = state.beta / xs
            beta[:, k] = b
            beta0[k] = state.beta0 - np.dot(b, xm)
            sigma2[k] = state.sigma2
            tau2[k] = state.tau2
            if lam is not None:
                lam[:, k] = state.lambda2
            k += 1

    return PosteriorDraws(
        beta0=beta0, beta=beta, sigma2=sigma2, tau2=tau2, names=list(data.names),
        model=model, prior=config.prior, config=config, lambda2=lam,
        chain=np.full(N, chain), algorithm=choose_algorithm(data.n, data.p),
    )


def run_chains(data: Dataset, config: SamplerConfig, chains: int = 1, **kwargs) -> PosteriorDraws:
    """Independent chains on streams ``0 .. chains-1`` of ``config.seed``, pooled."""
    if chains < 1:
        raise ParameterError("chains must be >= 1")
    return PosteriorDraws.concatenate(
        [run_chain(data, config, chain=c, **kwargs) for c in range(chains)]
    )


# ---------------------------------------------------------------------------
# Prior-only diagnostic chains
# ---------------------------------------------------------------------------


def run_prior_chain(
    prior: Prior | str = Prior.HORSESHOE,
    model: Model | str = Model.GAUSSIAN,
    *,
    p: int = 1,
    n: int = 1,
    batch: int = 1000,
    nsamples: int = 100,
    burnin: int = 100,
    thin: int = 10,
    tdof: float = 5.0,
    seed: int = 0,
) -> dict[str, np.ndarray]:
    """Run ``batch`` independent chains with the likelihood removed.

    Each sweep draws ``beta`` and the residuals ``e`` from their conditional
    priors (``sigma2`` fixed at 1) and then applies the same shrinkage and
    error-model updates as :func:`gibbs_sweep`.  The stationary law is the
    prior, so the returned draws should reproduce it.  Arrays have shape
    ``(nsamples, batch)`` for scalars and ``(nsamples, batch, p or n)`` for
    vectors.
    """
    prior, model = Prior.parse(prior), Model.parse(model)
    rng = rng_stream(seed)
    ones = lambda k: np.ones((batch, k))
    state = ChainState(
        beta0=0.0, beta=np.zeros((batch, p)), sigma2=np.ones(batch), omega2=ones(n),
        tau2=np.ones(batch), xi=np.ones(batch), lambda2=ones(p), nu=ones(p),
        phi2=ones(p), zeta=ones(p),
    )
    ws = GibbsWorkspace(e=np.zeros((batch, n)))
    keys = ("tau2", "xi", "lambda2", "nu", "phi2", "zeta", "omega2")
    out = {k: [] for k in keys}
    for sweep in range(burnin + nsamples * thin):
        sd_e = np.sqrt(_col(state.sigma2) * state.omega2)
        ws.e = sd_e * rng.standard_normal((batch, n))
        if model in (Model.LAPLACE, Model.STUDENT_T):
            update_omega2(rng, state, ws, model, tdof)
        sd_b = np.sqrt(_col(state.sigma2) * _col(state.tau2) * state.lambda2)
        state.beta = sd_b * rng.standard_normal((batch, p))
        update_local(rng, state, prior)
        update_tau2(rng, state)
        update_xi(rng, state)
        if sweep >= burnin and (sweep - burnin + 1) % thin == 0:
            for k in keys:
                out[k].append(np.copy(getattr(state, k)))
    return {k: np.array(v) for k, v in out.items()}
