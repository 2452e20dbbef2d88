"""Plug-in predictions at the posterior-mean coefficients."""
from __future__ import annotations

import numpy as np
from scipy.special import expit

from .errors import DataError
from .gibbs import Model, PosteriorDraws

__all__ = ["predict_linear", "predict_logistic", "predict"]

_P_MAX = np.nextafter(1.0, 0.0)
_P_MIN = np.finfo(float).tiny


def _linear_predictor(draws: PosteriorDraws, Xnew) -> np.ndarray:
    X = np.atleast_2d(np.asarray(Xnew, dtype=float))
    if X.shape[1] != draws.p:
        raise DataError(f"Xnew has {X.shape[1]} columns, expected {draws.p}")
    return draws.beta0.mean() + X @ draws.beta.mean(axis=1)


def predict_linear(draws: PosteriorDraws, Xnew) -> np.ndarray:
    """``mean(beta0) + Xnew @ mean(beta)``."""
    return _linear_predictor(draws, Xnew)


def predict_logistic(draws: PosteriorDraws, Xnew):
    """Probabilities ``logistic(eta_hat)`` and labels ``p >= 0.5``.

    The logistic is applied to the plug-in linear predictor, not averaged
    over draws.  Probabilities are clipped into the open unit interval.
    """
    prob = np.clip(expit(_linear_predictor(draws, Xnew)), _P_MIN, _P_MAX)
    return prob, (prob >= 0.5).astype(int)


def predict(draws: PosteriorDraws, Xnew, kind: str = "auto"):
    """Dispatch on ``kind``: ``linear_mean``, ``class_probability`` or ``class_label``."""
    if kind == "auto":
        kind = "class_label" if draws.model is Model.BINOMIAL else "linear_mean"
    if kind == "linear_mean":
        return predict_linear(draws, Xnew)
    prob, label = predict_logistic(draws, Xnew)
    if kind == "class_probability":
        return prob
    if kind == "class_label":
        return label
    raise ValueError(f"unknown prediction kind {kind!r}")
