"""Horseshoe+ regression with Laplace noise when p far exceeds n.

With p >= 2n the coefficient draw switches to the n x n dual system, so a
sweep costs O(n^2 p) instead of O(p^3).  Pass a larger p on the command
line to try the 50,000-predictor setting (about a minute per 1,000 sweeps).

    python3 demos/high_dimensional.py [p]
"""
import sys
import time

import numpy as np

from bpreg import SamplerConfig, run_chain
from bpreg.datasets import make_sparse_laplace_regression

p = int(sys.argv[1]) if len(sys.argv) > 1 else 5000
data, mu = make_sparse_laplace_regression(n=50, p=p, snr=8.0, seed=2)

config = SamplerConfig(model="laplace", prior="hs+", nsamples=1000, burnin=1000, thin=1, seed=2)
t0 = time.perf_counter()
draws = run_chain(data, config)
elapsed = time.perf_counter() - t0
print(f"p = {p}: {config.total_sweeps} sweeps in {elapsed:.1f}s via {draws.algorithm}")

b = draws.beta.mean(axis=1)
top = np.argsort(-np.abs(b))[:8]
for j in top:
    print(f"  {data.names[j]:>8}  {b[j]: .3f}")
print(f"largest null |beta|: {np.abs(b[5:]).max():.3f}")
