import csv
import subprocess
import sys
from dataclasses import fields

import numpy as np
import pytest

from bpreg import cli
from bpreg.errors import DataError, NumericalError
from bpreg.gibbs import Model, SamplerConfig
from bpreg.io import load_csv, read_draws_csv
from bpreg.summary import format_table, summarize


@pytest.fixture
def linear_csv(tmp_path):
    g = np.random.default_rng(0)
    X = g.standard_normal((40, 3))
    y = 1 + X @ [2.0, 0.0, -1.0] + 0.5 * g.standard_normal(40)
    path = tmp_path / "lin.csv"
    with open(path, "w") as fh:
        fh.write("a,y,b,c\n")
        for i in range(40):
            fh.write(f"{X[i, 0]},{y[i]},{X[i, 1]},{X[i, 2]}\n")
    return path


@pytest.fixture
def pima_csv():
    from bpreg.datasets import pima_path

    return str(pima_path())


def fit(*args):
    return cli.main(["fit", *map(str, args)])


# ---------------------------------------------------------------- loading


def test_load_three_columns(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("x1,x2,y\n1,2,3\n2,1,5\n3,5,4\n")
    d = load_csv(p, "y")
    assert d.p == 2 and d.names == ["x1", "x2"] and list(d.y) == [3, 5, 4]


def test_load_without_header(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("1,2,3\n2,1,5\n3,5,4\n")
    d = load_csv(p, header=False)
    assert d.names == ["v1", "v2"] and list(d.y) == [3, 5, 4]
    assert load_csv(p, 1, header=False).names == ["v1", "v2"]


@pytest.mark.parametrize("body, msg", [
    ("x,y\n1,0\n2,0.5\n3,1\n", "binomial"),
    ("x,y\n1,0\n,1\n3,1\n", "line 3, column 1: missing"),
    ("x,y\n1,0\n2,abc\n3,1\n", "line 3, column 2: non-numeric"),
    ("x,y\n1,0\n1,1\n1,1\n", "zero-variance"),
    ("x,y\n1,0\n2\n", "expected 2 fields"),
])
def test_load_errors(tmp_path, body, msg):
    p = tmp_path / "d.csv"
    p.write_text(body)
    with pytest.raises(DataError, match=msg):
        load_csv(p, "y", model="binomial")


def test_unknown_response(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("x,y\n1,2\n2,3\n")
    with pytest.raises(DataError, match="not found"):
        load_csv(p, "z")


# ---------------------------------------------------------------- defaults


def test_cli_defaults_mirror_sampler_config():
    ns = cli.build_parser().parse_args(["fit", "--data", "x.csv"])
    manifest = cli.RunManifest(data="x.csv", response=None)
    for f in fields(SamplerConfig):
        # Model and Prior are str enums, so they compare equal to the flag strings.
        assert getattr(ns, f.name) == f.default == getattr(manifest, f.name), f.name
    assert manifest.config() == SamplerConfig()


# ---------------------------------------------------------------- fit


def test_default_run_writes_1000_draws(linear_csv, tmp_path, capsys):
    out = tmp_path / "draws.csv"
    assert fit("--data", linear_csv, "--response", "y", "--draws-out", out) == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["iter", "chain", "beta0", "beta_a", "beta_b", "beta_c", "sigma2", "tau2"]
    assert len(rows) == 1001
    assert "Bayesian linear ridge regression" in capsys.readouterr().out


def test_seed_gives_byte_identical_draws(linear_csv, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    common = ["--data", linear_csv, "--response", "y", "--prior", "hs", "--nsamples", 200, "--seed", 42, "--no-display"]
    assert fit(*common, "--draws-out", a) == 0
    assert fit(*common, "--draws-out", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_draws_round_trip_reproduces_table(linear_csv, tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert fit("--data", linear_csv, "--response", "y", "--prior", "lasso", "--nsamples", 300, "--draws-out", out) == 0
    printed = capsys.readouterr().out
    data = load_csv(linear_csv, "y")
    again = format_table(summarize(read_draws_csv(out, prior="lasso"), data))
    body = lambda t: [l for l in t.splitlines() if l.strip().startswith(("a ", "b ", "c ", "_cons"))]
    assert body(printed) == body(again) and len(body(again)) == 4
    stats = lambda t: [l.split("=")[-1] for l in t.splitlines() if "R-squared" in l or "DIC" in l]
    assert stats(printed) == stats(again)


def test_displayor_table(pima_csv, capsys):
    rc = fit("--data", pima_csv, "--response", "DIABETES", "--model", "binomial", "--prior", "lasso",
             "--nsamples", 200, "--burnin", 200, "--displayor", "--sortrank")
    assert rc == 0
    out = capsys.readouterr().out
    assert "median(OR)" in out and "std(OR)" in out
    first = next(l for l in out.splitlines() if l.strip().startswith(("PLAS", "BMI", "PREG")))
    assert first.split()[0] == "PLAS"


def test_summary_and_prediction_outputs(linear_csv, tmp_path):
    s, p = tmp_path / "s.csv", tmp_path / "p.csv"
    assert fit("--data", linear_csv, "--response", "y", "--nsamples", 50, "--burnin", 10, "--no-display",
               "--summary-out", s, "--predictions-out", p) == 0
    assert [r["name"] for r in csv.DictReader(open(s))] == ["a", "b", "c", "_cons"]
    assert len(list(csv.DictReader(open(p)))) == 40


def test_multiple_chains_column(linear_csv, tmp_path):
    out = tmp_path / "d.csv"
    assert fit("--data", linear_csv, "--response", "y", "--nsamples", 20, "--burnin", 5, "--chains", 3,
               "--no-display", "--draws-out", out) == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 60 and {r["chain"] for r in rows} == {"0", "1", "2"}
    assert rows[20]["iter"] == "1"


def test_varnames_override(linear_csv, capsys):
    assert fit("--data", linear_csv, "--response", "y", "--nsamples", 20, "--burnin", 5,
               "--varnames", "p,q,r") == 0
    assert any(l.strip().startswith("q ") for l in capsys.readouterr().out.splitlines())
    assert fit("--data", linear_csv, "--response", "y", "--varnames", "p,q") == cli.EXIT_DATA


# ---------------------------------------------------------------- exit codes


def test_usage_errors_exit_one(linear_csv, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["fit", "--data", str(linear_csv), "--prior", "elastic"])
    assert e.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as e:
        cli.main([])
    assert e.value.code == cli.EXIT_USAGE
    assert fit("--data", linear_csv, "--response", "y", "--displayor") == cli.EXIT_USAGE
    assert fit("--data", linear_csv, "--response", "y", "--nsamples", 0) == cli.EXIT_USAGE


def test_data_errors_exit_two(tmp_path, linear_csv, capsys):
    assert fit("--data", tmp_path / "missing.csv", "--response", "y") == cli.EXIT_DATA
    assert fit("--data", linear_csv, "--response", "nope") == cli.EXIT_DATA
    assert fit("--data", linear_csv, "--response", "y", "--model", "binomial") == cli.EXIT_DATA
    assert "data error" in capsys.readouterr().err


def test_numerical_failure_exit_three(linear_csv, monkeypatch, capsys):
    def fail(*a, **k):
        raise NumericalError("Cholesky factorisation failed after jitter")

    monkeypatch.setattr(cli, "run_chains", fail)
    assert fit("--data", linear_csv, "--response", "y") == cli.EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err


# ---------------------------------------------------------------- predict


def test_predict_command(linear_csv, tmp_path, capsys):
    d, out = tmp_path / "d.csv", tmp_path / "pred.csv"
    fit("--data", linear_csv, "--response", "y", "--nsamples", 100, "--burnin", 50, "--no-display", "--draws-out", d)
    assert cli.main(["predict", "--draws", str(d), "--data", str(linear_csv), "--out", str(out)]) == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 40 and set(rows[0]) == {"row", "prediction"}
    draws = read_draws_csv(d)
    X = load_csv(linear_csv, "y").X
    ref = draws.beta0.mean() + X @ draws.beta.mean(axis=1)
    assert np.allclose([float(r["prediction"]) for r in rows], ref, rtol=1e-12)


def test_predict_probabilities(pima_csv, tmp_path, capsys):
    d = tmp_path / "d.csv"
    fit("--data", pima_csv, "--response", "DIABETES", "--model", "binomial", "--nsamples", 50,
        "--burnin", 50, "--no-display", "--draws-out", d)
    capsys.readouterr()
    assert cli.main(["predict", "--draws", str(d), "--data", pima_csv, "--prob"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert len(rows) == 768
    p = np.array([float(r["probability"]) for r in rows])
    lab = np.array([int(r["prediction"]) for r in rows])
    assert np.all((p > 0) & (p < 1)) and np.array_equal(lab, (p >= 0.5).astype(int))


def test_predict_missing_column(tmp_path, linear_csv):
    d = tmp_path / "d.csv"
    fit("--data", linear_csv, "--response", "y", "--nsamples", 20, "--burnin", 5, "--no-display", "--draws-out", d)
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,2\n")
    assert cli.main(["predict", "--draws", str(d), "--data", str(bad)]) == cli.EXIT_DATA


def test_module_entry_point(linear_csv):
    r = subprocess.run(
        [sys.executable, "-m", "bpreg", "fit", "--data", str(linear_csv), "--response", "y",
         "--nsamples", "20", "--burnin", "5"],
        capture_output=True, text=True,
    )
    assert r.returncode == 0 and "_cons" in r.stdout
