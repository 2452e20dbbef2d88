"""Bayesian penalised regression with global-local shrinkage priors.

Linear models with Gaussian, Laplace or Student-t errors and logistic
regression, under ridge, lasso, horseshoe and horseshoe+ priors, fitted by
Gibbs sampling.

>>> from bpreg import Dataset, SamplerConfig, run_chain, summarize
>>> draws = run_chain(data, SamplerConfig(prior="hs", seed=1))   # doctest: +SKIP
>>> print(format_table(summarize(draws, data)))                   # doctest: +SKIP
"""
from .errors import BpregError, DataError, NumericalError, ParameterError
from .gibbs import (
    ChainState,
    Dataset,
    Model,
    PosteriorDraws,
    Prior,
    SamplerConfig,
    gibbs_sweep,
    run_chain,
    run_chains,
)
from .io import load_csv, read_draws_csv, write_draws_csv
from .mvn import PrecisionSystem, choose_algorithm, sample_coefficients
from .predict import predict, predict_linear, predict_logistic
from .summary import (
    Summary,
    effective_sample_size,
    feature_rank,
    format_table,
    model_stats,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "BpregError", "DataError", "NumericalError", "ParameterError",
    "ChainState", "Dataset", "Model", "PosteriorDraws", "Prior", "SamplerConfig",
    "gibbs_sweep", "run_chain", "run_chains",
    "load_csv", "read_draws_csv", "write_draws_csv",
    "PrecisionSystem", "choose_algorithm", "sample_coefficients",
    "predict", "predict_linear", "predict_logistic",
    "Summary", "effective_sample_size", "feature_rank", "format_table", "model_stats", "summarize",
]
