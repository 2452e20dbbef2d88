"""Chain diagnostics: ESS, multiple chains and the draws file.

    python3 demos/diagnostics.py
"""
import tempfile
from pathlib import Path

import numpy as np

from bpreg import SamplerConfig, effective_sample_size, read_draws_csv, run_chains, write_draws_csv
from bpreg.datasets import make_ar1_regression

data, _ = make_ar1_regression(seed=3)

# Thinning trades draws for lower autocorrelation.
for thin in (1, 5, 20):
    d = run_chains(data, SamplerConfig(prior="hs", nsamples=2000, burnin=1000, thin=thin, seed=4))
    ess = [effective_sample_size(b) for b in d.beta]
    print(f"thin {thin:>2}: ESS% min {min(ess):5.1f}  median {np.median(ess):5.1f}  tau2 {effective_sample_size(d.tau2):5.1f}")

# Four chains on independent streams; compare between- and within-chain spread.
d = run_chains(data, SamplerConfig(prior="hs", nsamples=1000, seed=4), chains=4)
means = np.array([d.beta[:, d.chain == c].mean(axis=1) for c in range(4)])
within = np.mean([d.beta[:, d.chain == c].var(axis=1, ddof=1) for c in range(4)], axis=0)
print("between/within variance ratio, v1..v3:", np.round(means.var(axis=0, ddof=1)[:3] / within[:3], 4))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "draws.csv"
    write_draws_csv(d, path)
    back = read_draws_csv(path, prior="hs")
    print(f"draws file: {path.stat().st_size} bytes, exact round trip: {np.array_equal(back.beta, d.beta)}")
