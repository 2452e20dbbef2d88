"""Logistic lasso regression on the Pima Indians diabetes data.

768 women, eight clinical predictors, binary diabetes outcome.  Odds ratios
are per unit change of each predictor on its original scale.

    python3 demos/pima_logistic.py
"""
import numpy as np

from bpreg import SamplerConfig, format_table, predict_logistic, run_chain, summarize
from bpreg.datasets import load_pima

data = load_pima()
config = SamplerConfig(model="binomial", prior="lasso", nsamples=10_000, burnin=10_000, thin=5, seed=1)
draws = run_chain(data, config)

print(format_table(summarize(draws, data, displayor=True), sortrank=True))

prob, label = predict_logistic(draws, data.X)
print(f"training accuracy {np.mean(label == data.y):.3f}")

# Posterior probability that each odds ratio exceeds one.
for name, b in zip(data.names, draws.beta):
    print(f"{name:>5}  P(OR > 1) = {np.mean(b > 0):.3f}")
