import tracemalloc

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from scipy import stats

from bpreg.errors import DataError
from bpreg.mvn import (
    PrecisionSystem,
    choose_algorithm,
    sample_coefficients,
    sample_coefficients_bhattacharya,
    sample_coefficients_rue,
)
from bpreg.samplers import rng_stream

SAMPLERS = [sample_coefficients_rue, sample_coefficients_bhattacharya]


def random_system(n, p, seed=0):
    g = np.random.default_rng(seed)
    return PrecisionSystem(
        X=g.standard_normal((n, p)),
        omega=g.uniform(0.5, 2.0, n),
        lam=g.uniform(0.5, 2.0, p),
        target=g.standard_normal(n),
    )


def dense_oracle(sys):
    A = sys.precision()
    return np.linalg.solve(A, sys.rhs), np.linalg.inv(A)


@pytest.mark.parametrize("sampler", SAMPLERS)
def test_identity_design_flat_prior(rng, sampler):
    sys = PrecisionSystem.from_rhs(np.eye(3), np.ones(3), np.full(3, 1e12), [1.0, 2.0, 3.0])
    draws = sampler(rng, sys, 100_000)
    assert np.allclose(draws.mean(axis=0), [1, 2, 3], atol=0.01)
    assert np.allclose(np.cov(draws.T), np.eye(3), atol=0.02)


@pytest.mark.parametrize("sampler", SAMPLERS)
def test_two_by_two_closed_form(rng, sampler):
    X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    sys = PrecisionSystem.from_rhs(X, np.ones(3), np.ones(2), [1.0, 1.0])
    A = np.array([[3.0, 1.0], [1.0, 3.0]])
    Ainv = np.array([[3.0, -1.0], [-1.0, 3.0]]) / 8.0
    assert np.allclose(sys.precision(), A)
    draws = sampler(rng, sys, 100_000)
    assert np.allclose(draws.mean(axis=0), Ainv @ [1.0, 1.0], atol=0.01)


def test_wide_system_matches_dense_solve(rng):
    sys = random_system(2, 200, seed=3)
    sys.lam[:] = 1.0
    mean, _ = dense_oracle(sys)
    draws = sample_coefficients_bhattacharya(rng, sys, 100_000)
    assert np.max(np.abs(draws.mean(axis=0) - mean)) < 0.02


@pytest.mark.parametrize("sampler", SAMPLERS)
@pytest.mark.parametrize("n, p", [(10, 3), (5, 3), (3, 6)])
def test_mean_within_mc_error(rng, sampler, n, p):
    sys = random_system(n, p, seed=n * p)
    mean, cov = dense_oracle(sys)
    draws = sampler(rng, sys, 100_000)
    se = np.sqrt(np.diag(cov) / 100_000)
    assert np.all(np.abs(draws.mean(axis=0) - mean) < 3 * se)


@pytest.mark.parametrize("sampler", SAMPLERS)
def test_covariance_frobenius(rng, sampler):
    sys = random_system(10, 5, seed=11)
    _, cov = dense_oracle(sys)
    draws = sampler(rng, sys, 100_000)
    err = np.linalg.norm(np.cov(draws.T) - cov) / np.linalg.norm(cov)
    assert err < 0.05


def test_algorithms_agree_in_distribution(rng):
    sys = random_system(5, 3, seed=1)
    a = sample_coefficients_rue(rng, sys, 100_000)
    b = sample_coefficients_bhattacharya(rng, sys, 100_000)
    for j in range(3):
        assert stats.ks_2samp(a[:, j], b[:, j]).pvalue > 0.001


def test_single_draw_shape(rng):
    sys = random_system(4, 3)
    assert sample_coefficients_rue(rng, sys).shape == (3,)
    assert sample_coefficients_bhattacharya(rng, sys).shape == (3,)


def test_tiny_prior_variance_pulls_to_zero(rng):
    sys = random_system(20, 4, seed=2)
    sys.lam[:] = 1e-12
    draws = sample_coefficients_rue(rng, sys, 100)
    assert np.max(np.abs(draws)) < 1e-4


@pytest.mark.parametrize(
    "n, p, algo",
    [(100, 150, "rue"), (50, 99, "rue"), (50, 100, "bhattacharya"), (50, 50_000, "bhattacharya")],
)
def test_dispatch_rule(n, p, algo):
    assert choose_algorithm(n, p) == algo


def test_dispatch_calls_named_algorithm(rng):
    sys = random_system(5, 12)
    ref = sample_coefficients_bhattacharya(rng_stream(1), sys)
    assert np.array_equal(sample_coefficients(rng_stream(1), sys), ref)
    sys = random_system(12, 5)
    ref = sample_coefficients_rue(rng_stream(1), sys)
    assert np.array_equal(sample_coefficients(rng_stream(1), sys), ref)


def test_zero_omega_rejected():
    with pytest.raises(DataError):
        PrecisionSystem(np.eye(3), np.array([1.0, 0.0, 1.0]), np.ones(3), np.ones(3))


def test_shape_mismatch_rejected():
    with pytest.raises(DataError):
        PrecisionSystem(np.eye(3), np.ones(2), np.ones(3), np.ones(3))


def test_rhs_outside_row_space_rejected():
    X = np.array([[1.0, 1.0], [2.0, 2.0]])
    with pytest.raises(DataError):
        PrecisionSystem.from_rhs(X, np.ones(2), np.ones(2), [1.0, -1.0])


def test_no_dense_inverse(monkeypatch, rng):
    def boom(*a, **k):
        raise AssertionError("dense inverse formed")

    monkeypatch.setattr(np.linalg, "inv", boom)
    monkeypatch.setattr(scipy.linalg, "inv", boom)
    sample_coefficients_rue(rng, random_system(10, 4))
    sample_coefficients_bhattacharya(rng, random_system(4, 10))


def test_bhattacharya_never_allocates_p_by_p(rng):
    # p = 4000 makes a p x p float matrix 128 MB; the dual route needs far less.
    sys = random_system(5, 4000)
    tracemalloc.start()
    sample_coefficients_bhattacharya(rng, sys)
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    assert peak < 8 * 4000 * 4000 / 50


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 8), p=st.integers(1, 8), seed=st.integers(0, 10_000))
def test_noise_free_limit_is_posterior_mean(n, p, seed):
    # Zero-variance perturbation: both routes reduce to A^{-1} b exactly.
    sys = random_system(n, p, seed)
    mean, _ = dense_oracle(sys)

    class ZeroNormal:
        def standard_normal(self, shape):
            return np.zeros(shape)

    for sampler in SAMPLERS:
        assert np.allclose(sampler(ZeroNormal(), sys), mean, rtol=1e-6, atol=1e-8)
