"""Command-line front end.

    bpreg fit --data pima.csv --response DIABETES --model binomial --prior lasso --displayor
    bpreg predict --draws draws.csv --data new.csv --prob

Exit status: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields

from .errors import BpregError, DataError, NumericalError, ParameterError
from .gibbs import Model, Prior, SamplerConfig, run_chains
from .io import load_csv, load_matrix_csv, read_draws_csv, write_draws_csv, write_predictions_csv
from .predict import predict_linear, predict_logistic
from .summary import format_table, summarize, summary_to_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3

_DEFAULTS = {f.name: f.default for f in fields(SamplerConfig)}
_MODELS = {"gaussian": Model.GAUSSIAN, "laplace": Model.LAPLACE, "t": Model.STUDENT_T, "binomial": Model.BINOMIAL}
_PRIORS = {"ridge": Prior.RIDGE, "lasso": Prior.LASSO, "hs": Prior.HORSESHOE, "hs+": Prior.HORSESHOE_PLUS}


@dataclass
class RunManifest:
    data: str
    response: str | None
    model: str = "gaussian"
    prior: str = "ridge"
    nsamples: int = _DEFAULTS["nsamples"]
    burnin: int = _DEFAULTS["burnin"]
    thin: int = _DEFAULTS["thin"]
    tdof: float = _DEFAULTS["tdof"]
    seed: int = _DEFAULTS["seed"]
    display: bool = True
    displayor: bool = False
    sortrank: bool = False
    standardize: bool = _DEFAULTS["standardize"]
    header: bool = True
    varnames: list[str] | None = None
    chains: int = 1
    draws_out: str | None = None
    summary_out: str | None = None
    predictions_out: str | None = None

    def config(self) -> SamplerConfig:
        return SamplerConfig(
            model=_MODELS[self.model], prior=_PRIORS[self.prior], nsamples=self.nsamples,
            burnin=self.burnin, thin=self.thin, tdof=self.tdof, seed=self.seed,
            standardize=self.standardize,
        )


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bpreg", description="Bayesian penalised regression by Gibbs sampling.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fit = sub.add_parser("fit", help="sample the posterior and print a summary table")
    fit.add_argument("--data", required=True, help="input CSV")
    fit.add_argument("--response", help="response column name (1-based index with --no-header)")
    fit.add_argument("--model", choices=list(_MODELS), default="gaussian")
    fit.add_argument("--prior", choices=list(_PRIORS), default="ridge")
    fit.add_argument("--nsamples", type=int, default=_DEFAULTS["nsamples"])
    fit.add_argument("--burnin", type=int, default=_DEFAULTS["burnin"])
    fit.add_argument("--thin", type=int, default=_DEFAULTS["thin"])
    fit.add_argument("--tdof", type=float, default=_DEFAULTS["tdof"])
    fit.add_argument("--seed", type=int, default=_DEFAULTS["seed"])
    fit.add_argument("--chains", type=int, default=1)
    fit.add_argument("--no-display", dest="display", action="store_false")
    fit.add_argument("--displayor", action="store_true", help="odds ratios (binomial only)")
    fit.add_argument("--sortrank", action="store_true", help="order rows by rank")
    fit.add_argument("--no-standardize", dest="standardize", action="store_false")
    fit.add_argument("--no-header", dest="header", action="store_false")
    fit.add_argument("--varnames", help="comma-separated predictor names")
    fit.add_argument("--draws-out")
    fit.add_argument("--summary-out", help="summary rows as CSV")
    fit.add_argument("--predictions-out", help="in-sample predictions as CSV")

    pred = sub.add_parser("predict", help="plug-in predictions from a draws file")
    pred.add_argument("--draws", required=True)
    pred.add_argument("--data", required=True)
    pred.add_argument("--prob", action="store_true", help="logistic probabilities and labels")
    pred.add_argument("--no-header", dest="header", action="store_false")
    pred.add_argument("--out", help="output CSV (default stdout)")
    return ap


def run(m: RunManifest, out=None) -> int:
    out = out or sys.stdout
    config = m.config()
    if m.displayor and config.model is not Model.BINOMIAL:
        raise ParameterError("--displayor requires --model binomial")
    data = load_csv(m.data, m.response, header=m.header, model=config.model, standardize=m.standardize)
    if m.varnames:
        if len(m.varnames) != data.p:
            raise DataError(f"--varnames lists {len(m.varnames)} names for {data.p} predictors")
        data.names = list(m.varnames)
    draws = run_chains(data, config, chains=m.chains)
    if m.draws_out:
        write_draws_csv(draws, m.draws_out)
    if m.display or m.summary_out:
        summary = summarize(draws, data, displayor=m.displayor)
        if m.display:
            out.write(format_table(summary, sortrank=m.sortrank))
        if m.summary_out:
            with open(m.summary_out, "w", encoding="utf-8") as fh:
                fh.write(summary_to_csv(summary))
    if m.predictions_out:
        if config.model is Model.BINOMIAL:
            prob, label = predict_logistic(draws, data.X)
            write_predictions_csv(m.predictions_out, label, prob)
        else:
            write_predictions_csv(m.predictions_out, predict_linear(draws, data.X))
    return EXIT_OK


def _predict(args, out) -> int:
    model = Model.BINOMIAL if args.prob else Model.GAUSSIAN
    draws = read_draws_csv(args.draws, model=model)
    X = load_matrix_csv(args.data, draws.names, header=args.header)
    target = open(args.out, "w", newline="", encoding="utf-8") if args.out else out
    try:
        if args.prob:
            prob, label = predict_logistic(draws, X)
            write_predictions_csv(target, label, prob)
        else:
            write_predictions_csv(target, predict_linear(draws, X))
    finally:
        if args.out:
            target.close()
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "predict":
            return _predict(args, sys.stdout)
        kw = {k: v for k, v in vars(args).items() if k != "command"}
        kw["varnames"] = [s.strip() for s in kw["varnames"].split(",")] if kw["varnames"] else None
        return run(RunManifest(**kw))
    except ParameterError as exc:
        print(f"bpreg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"bpreg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, FloatingPointError, RuntimeError) as exc:
        print(f"bpreg: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BpregError as exc:
        print(f"bpreg: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:
        # downstream reader closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
