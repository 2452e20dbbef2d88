import numpy as np
import pytest

from bpreg.datasets import make_ar1_regression
from bpreg.errors import DataError
from bpreg.gibbs import Dataset, Model, PosteriorDraws, Prior, SamplerConfig, run_chain
from bpreg.predict import predict, predict_linear, predict_logistic


def draws_from(beta0, beta, model=Model.GAUSSIAN):
    beta = np.atleast_2d(np.asarray(beta, dtype=float))
    N = beta.shape[1]
    return PosteriorDraws(
        beta0=np.asarray(beta0, float) * np.ones(N), beta=beta, sigma2=np.ones(N),
        tau2=np.ones(N), names=[f"v{j + 1}" for j in range(beta.shape[0])],
        model=model, prior=Prior.RIDGE,
    )


def test_zero_coefficients_give_intercept():
    d = draws_from([1.0, 2.0, 3.0], np.zeros((2, 3)))
    assert np.allclose(predict_linear(d, np.ones((4, 2))), 2.0)


def test_single_draw_is_exact():
    d = draws_from([0.5], [[2.0], [-1.0]])
    X = np.array([[1.0, 1.0], [3.0, 0.0]])
    assert np.array_equal(predict_linear(d, X), 0.5 + X @ [2.0, -1.0])


def test_plug_in_not_per_draw_average():
    d = draws_from([0.0, 0.0], [[-10.0, 12.0]], Model.BINOMIAL)
    prob, _ = predict_logistic(d, [[1.0]])
    assert prob[0] == pytest.approx(1 / (1 + np.exp(-1.0)))


def test_logistic_tie_and_saturation():
    d = draws_from([0.0], [[1.0]], Model.BINOMIAL)
    prob, label = predict_logistic(d, [[0.0], [10.0], [1e6], [-1e6]])
    assert prob[0] == 0.5 and label[0] == 1
    assert prob[1] > 0.9999
    assert 0 < prob[3] and prob[2] < 1


def test_dispatch_kinds():
    d = draws_from([0.0], [[1.0]], Model.BINOMIAL)
    assert predict(d, [[2.0]])[0] == 1
    assert predict(d, [[2.0]], "class_probability")[0] == pytest.approx(1 / (1 + np.exp(-2)))
    assert predict(d, [[2.0]], "linear_mean")[0] == 2.0
    with pytest.raises(ValueError):
        predict(d, [[2.0]], "median")


def test_column_mismatch():
    with pytest.raises(DataError):
        predict_linear(draws_from([0.0], [[1.0], [1.0]]), np.ones((3, 3)))


def test_recovers_noise_free_mean():
    data, mu = make_ar1_regression(snr=1e4, seed=3)
    d = run_chain(data, SamplerConfig(prior="hs", nsamples=1000, burnin=1000, thin=2))
    mu_hat = predict_linear(d, data.X)
    assert np.corrcoef(mu, mu_hat)[0, 1] > 0.99
    mse = np.mean((mu - mu_hat) ** 2)
    assert np.sqrt(mse) < 0.05 * mu.std()


def test_pima_training_accuracy(pima, pima_draws):
    _, label = predict_logistic(pima_draws, pima.X)
    assert np.mean(label == pima.y) >= 0.75
