import numpy as np
import pytest

from bpreg.samplers import rng_stream


@pytest.fixture
def rng():
    return rng_stream(20240611)


def within_se(sample, target, k=3.0):
    """True when the sample mean is within ``k`` Monte-Carlo standard errors of ``target``."""
    sample = np.asarray(sample, dtype=float)
    se = sample.std(ddof=1) / np.sqrt(sample.size)
    return abs(sample.mean() - target) <= k * se


def pg_series_oracle(rng, c, size, terms=200, chunk=10_000):
    """``PG(1, c)`` by the truncated sum of weighted exponentials."""
    k = np.arange(1, terms + 1)
    denom = 2.0 * np.pi ** 2 * (k - 0.5) ** 2 + 0.5 * c * c
    # Expected value of the neglected tail, added so the oracle is unbiased in mean.
    kt = np.arange(terms + 1, 200_000)
    tail = np.sum(1.0 / (2.0 * np.pi ** 2 * (kt - 0.5) ** 2 + 0.5 * c * c))
    out = []
    for start in range(0, size, chunk):
        m = min(chunk, size - start)
        out.append(rng.standard_exponential((m, terms)) @ (1.0 / denom) + tail)
    return np.concatenate(out)


@pytest.fixture(scope="session")
def pima():
    from bpreg.datasets import load_pima

    return load_pima()


@pytest.fixture(scope="session")
def pima_draws(pima):
    from bpreg.gibbs import SamplerConfig, run_chain

    return run_chain(pima, SamplerConfig(model="binomial", prior="lasso", seed=1))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
