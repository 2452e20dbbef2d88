"""Posterior summaries: moments, credible intervals, ESS, ranks and fit statistics."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, asdict
from typing import NamedTuple

import numpy as np
from scipy import stats
from scipy.special import log_expit

from .errors import DataError, ParameterError
from .gibbs import Dataset, Model, PosteriorDraws, Prior

__all__ = [
    "PosteriorStats",
    "SummaryRow",
    "ModelStats",
    "Summary",
    "posterior_stats",
    "effective_sample_size",
    "feature_rank",
    "model_stats",
    "summarize",
    "format_table",
    "summary_to_csv",
]


class PosteriorStats(NamedTuple):
    mean: float
    sd: float
    q025: float
    q975: float
    q125: float
    q875: float
    median: float


def posterior_stats(draws) -> PosteriorStats:
    """Mean, sd (``N - 1`` denominator) and linearly interpolated quantiles."""
    x = np.asarray(draws, dtype=float).ravel()
    if x.size < 2:
        raise DataError("need at least two draws")
    q = np.quantile(x, [0.025, 0.975, 0.125, 0.875, 0.5])
    return PosteriorStats(float(x.mean()), float(x.std(ddof=1)), *map(float, q))


def _autocorrelation(x: np.ndarray) -> np.ndarray:
    n = x.size
    f = np.fft.rfft(x - x.mean(), n=2 * n)
    acov = np.fft.irfft(f * np.conj(f), n=2 * n)[:n]
    return acov / acov[0]


def effective_sample_size(draws) -> float:
    """Effective sample size as a percentage of the chain length.

    Uses Geyer's initial positive sequence: autocorrelations are summed in
    adjacent pairs ``rho[2k] + rho[2k+1]`` until the first non-positive pair.
    The result is clipped to ``(0, 100]``; a constant chain gives 100.
    """
    x = np.asarray(draws, dtype=float).ravel()
    n = x.size
    if n < 10:
        raise DataError("need at least ten draws for ESS")
    if np.ptp(x) == 0 or not np.isfinite(x.var()) or x.var() == 0:
        return 100.0
    rho = _autocorrelation(x)
    m = n // 2
    pairs = rho[0 : 2 * m : 2] + rho[1 : 2 * m : 2]
    nonpos = np.flatnonzero(pairs <= 0)
    k = nonpos[0] if nonpos.size else m
    tau = -1.0 + 2.0 * pairs[:k].sum()
    if tau <= 0:
        return 100.0
    return float(np.clip(100.0 / tau, np.finfo(float).tiny, 100.0))


def feature_rank(beta_draws, x_scales=None):
    """Rank predictors by standardised magnitude and flag credible intervals.

    In every draw the variables are ranked ``1..p`` by descending
    ``|beta_j| * x_scale_j``.  The final rank orders the per-variable mean
    rank, ties broken by column index, so the result is a permutation.

    Returns ``(ranks, stars)`` where ``stars`` is 2 when the 95% interval
    excludes zero, 1 when only the 75% interval does, else 0.
    """
    B = np.atleast_2d(np.asarray(beta_draws, dtype=float))
    p, N = B.shape
    s = np.ones(p) if x_scales is None else np.asarray(x_scales, dtype=float)
    mag = np.abs(B) * s[:, None]
    order = np.argsort(-mag, axis=0, kind="stable")
    per_draw = np.empty_like(order)
    np.put_along_axis(per_draw, order, np.arange(1, p + 1)[:, None], axis=0)
    mean_rank = per_draw.mean(axis=1)
    final = np.empty(p, dtype=int)
    final[np.argsort(mean_rank, kind="stable")] = np.arange(1, p + 1)

    q = np.quantile(B, [0.025, 0.975, 0.125, 0.875], axis=1)
    excl95 = (q[0] > 0) | (q[1] < 0)
    excl75 = (q[2] > 0) | (q[3] < 0)
    stars = np.where(excl95, 2, np.where(excl75, 1, 0))
    return final, stars


@dataclass
class ModelStats:
    log_likelihood: float
    dic: float
    r_squared: float | None = None
    root_mse: float | None = None
    pseudo_r_squared: float | None = None


def _loglik(model: Model, y, eta, sigma2, tdof):
    """Log-likelihood; ``eta`` is ``(n,)`` or ``(n, N)`` and ``sigma2`` broadcasts."""
    y = y if np.ndim(eta) == 1 else y[:, None]
    if model is Model.BINOMIAL:
        return np.sum(y * log_expit(eta) + (1 - y) * log_expit(-eta), axis=0)
    r = y - eta
    sd = np.sqrt(sigma2)
    if model is Model.GAUSSIAN:
        return np.sum(stats.norm.logpdf(r, scale=sd), axis=0)
    if model is Model.LAPLACE:
        # Laplace errors with variance sigma2.
        return np.sum(stats.laplace.logpdf(r, scale=sd / np.sqrt(2.0)), axis=0)
    return np.sum(stats.t.logpdf(r, df=tdof, scale=sd), axis=0)


def model_stats(draws: PosteriorDraws, data: Dataset, tdof: float | None = None) -> ModelStats:
    """Fit statistics at the posterior mean and DIC.

    ``log_likelihood`` is evaluated at the posterior-mean parameters.  DIC is
    reported on the log-likelihood scale, ``2 * mean(L) - L(posterior mean)``,
    which is ``-1/2`` times the deviance form ``Dbar + pD``; larger is better.
    """
    model = draws.model
    if tdof is None:
        tdof = draws.config.tdof if draws.config is not None else 5.0
    b0 = draws.beta0.mean()
    b = draws.beta.mean(axis=1)
    eta_hat = b0 + data.X @ b
    eta = draws.beta0[None, :] + data.X @ draws.beta
    if model is Model.BINOMIAL:
        L_hat = float(_loglik(model, data.y, eta_hat, 1.0, tdof))
        L_bar = float(np.mean(_loglik(model, data.y, eta, 1.0, tdof)))
        ybar = data.y.mean()
        if 0 < ybar < 1:
            L0 = data.n * (ybar * np.log(ybar) + (1 - ybar) * np.log(1 - ybar))
            pr2 = 1.0 - L_hat / L0
        else:
            pr2 = float("nan")
        return ModelStats(L_hat, 2 * L_bar - L_hat, pseudo_r_squared=float(pr2))
    s2_hat = draws.sigma2.mean()
    L_hat = float(_loglik(model, data.y, eta_hat, s2_hat, tdof))
    L_bar = float(np.mean(_loglik(model, data.y, eta, draws.sigma2[None, :], tdof)))
    resid = data.y - eta_hat
    sse = float(resid @ resid)
    sst = float(np.sum((data.y - data.y.mean()) ** 2))
    r2 = 1.0 - sse / sst if sst > 0 else float("nan")
    return ModelStats(L_hat, 2 * L_bar - L_hat, r_squared=r2, root_mse=float(np.sqrt(sse / data.n)))


@dataclass
class SummaryRow:
    name: str
    center: float
    sd: float
    ci_low: float
    ci_high: float
    tstat: float
    rank: int | None = None
    stars: int | None = None
    ess_pct: float | None = None


@dataclass
class Summary:
    rows: list[SummaryRow]
    intercept: SummaryRow
    stats: ModelStats
    model: Model
    prior: Prior
    n: int
    p: int
    nsamples: int
    burnin: int | None = None
    thin: int | None = None
    odds_ratio: bool = False
    chains: int = 1

    def row(self, name: str) -> SummaryRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)


def _row(name, draws, odds_ratio):
    st = posterior_stats(draws)
    tstat = st.mean / st.sd if st.sd > 0 else float("nan")
    if odds_ratio:
        e = np.exp(draws)
        return SummaryRow(name, float(np.exp(st.median)), float(e.std(ddof=1)),
                          float(np.exp(st.q025)), float(np.exp(st.q975)), tstat)
    return SummaryRow(name, st.mean, st.sd, st.q025, st.q975, tstat)


def summarize(draws: PosteriorDraws, data: Dataset, *, displayor: bool = False) -> Summary:
    """Per-variable and model-level summary of ``draws`` fitted to ``data``.

    ``displayor`` (binomial only) reports median odds ratios ``exp(median beta)``
    per unit change of each original predictor, their sd, and exponentiated
    interval bounds; the t-statistic stays on the coefficient scale.
    """
    if displayor and draws.model is not Model.BINOMIAL:
        raise ParameterError("displayor is only available for the binomial model")
    if data.p != draws.p:
        raise DataError("draws and data have different numbers of predictors")
    ranks, stars = feature_rank(draws.beta, data.X.std(axis=0))
    rows = []
    for j, name in enumerate(draws.names):
        r = _row(name, draws.beta[j], displayor)
        r.rank, r.stars = int(ranks[j]), int(stars[j])
        r.ess_pct = effective_sample_size(draws.beta[j]) if draws.nsamples >= 10 else None
        rows.append(r)
    cfg = draws.config
    return Summary(
        rows=rows,
        intercept=_row("_cons", draws.beta0, displayor),
        stats=model_stats(draws, data),
        model=draws.model,
        prior=draws.prior,
        n=data.n,
        p=data.p,
        nsamples=draws.nsamples,
        burnin=cfg.burnin if cfg else None,
        thin=cfg.thin if cfg else None,
        odds_ratio=displayor,
        chains=int(np.unique(draws.chain).size),
    )


_RULE = "=" * 90
_DASH = "-------------+" + "-" * 76

_MODEL_TEXT = {
    Model.GAUSSIAN: "linear",
    Model.LAPLACE: "Laplace linear",
    Model.STUDENT_T: "Student-t linear",
    Model.BINOMIAL: "logistic",
}


def _fmt_row(r: SummaryRow) -> str:
    rank = "." if r.rank is None else str(r.rank)
    stars = "" if not r.stars else "*" * r.stars
    ess = "." if r.ess_pct is None else f"{r.ess_pct:.1f}"
    return (
        f"{r.name[:12]:>12} | {r.center:11.5f} {r.sd:10.5f}   {r.ci_low:10.5f} {r.ci_high:10.5f}"
        f"   {r.tstat:8.3f}   {rank:>5} {stars:<2} {ess:>6}"
    )


def format_table(summary: Summary, *, sortrank: bool = False) -> str:
    """Render the fixed-width summary table."""
    s = summary
    left = [f"Bayesian {_MODEL_TEXT[s.model]} {s.prior.label} regression", ""]
    left.append(f"MCMC Samples   = {s.nsamples:6d}")
    left.append(f"MCMC Burnin    = {s.burnin:6d}" if s.burnin is not None else "")
    left.append(f"MCMC Thinning  = {s.thin:6d}" if s.thin is not None else "")
    st = s.stats
    right = [f"Number of obs   = {s.n:8d}", f"Number of vars  = {s.p:8d}"]
    if s.model is Model.BINOMIAL:
        right += [
            f"Log. Likelihood = {st.log_likelihood:8.2f}",
            f"Pseudo R2       = {st.pseudo_r_squared:8.4f}",
        ]
    else:
        right += [f"Root MSE        = {st.root_mse:8.4f}", f"R-squared       = {st.r_squared:8.4f}"]
    right.append(f"DIC             = {st.dic:8.2f}")
    left += [""] * (len(right) - len(left))
    lines = [_RULE, "|" + "Bayesian Penalised Regression Estimation".center(88) + "|", _RULE]
    lines += [f"{a:<64}{b}".rstrip() for a, b in zip(left, right)]
    center = "median(OR)" if s.odds_ratio else "mean(Coef)"
    spread = "std(OR)" if s.odds_ratio else "std(Coef)"
    lines += [
        "",
        _DASH,
        f"{'Parameter':>12} | {center:>11} {spread:>10}   {'[95% Cred. Interval]':^21}"
        f"   {'tStat':>8}   {'Rank':>5}    {'ESS':>6}",
        _DASH,
    ]
    rows = sorted(s.rows, key=lambda r: r.rank) if sortrank else s.rows
    lines += [_fmt_row(r) for r in rows]
    lines += [_fmt_row(s.intercept), _DASH]
    return "\n".join(lines) + "\n"


def summary_to_csv(summary: Summary) -> str:
    """One line per variable plus the intercept, columns as :class:`SummaryRow`."""
    buf = io.StringIO()
    names = list(SummaryRow.__dataclass_fields__)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for r in summary.rows + [summary.intercept]:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in asdict(r).values()])
    return buf.getvalue()
