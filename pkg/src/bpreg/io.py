"""CSV input and output for datasets, posterior draws and predictions."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import DataError
from .gibbs import Dataset, Model, PosteriorDraws, Prior

__all__ = ["load_csv", "write_draws_csv", "read_draws_csv", "write_predictions_csv"]


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            return [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _parse_matrix(rows, first_line):
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for i, row in enumerate(rows):
        line = first_line + i
        if len(row) != width:
            raise DataError(f"line {line}: expected {width} fields, found {len(row)}")
        for j, cell in enumerate(row):
            cell = cell.strip()
            if cell == "" or cell.upper() in ("NA", "NAN"):
                raise DataError(f"line {line}, column {j + 1}: missing value")
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"line {line}, column {j + 1}: non-numeric value {cell!r}") from None
            if not math.isfinite(v):
                raise DataError(f"line {line}, column {j + 1}: non-finite value {cell!r}")
            out[i, j] = v
    return out


def load_csv(path, response=None, *, header=True, model=None, standardize=True) -> Dataset:
    """Read a numeric CSV into a :class:`Dataset`.

    ``response`` is a column name, or with ``header=False`` a 1-based column
    number (default: last column).  All other columns become predictors in
    file order; without a header they are named ``v1 .. vp``.
    """
    rows = _read_rows(path)
    if not rows:
        raise DataError(f"{path} is empty")
    if header:
        cols = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_line = 2
        if len(set(cols)) != len(cols):
            raise DataError("duplicate column names in header")
        if response is None:
            raise DataError("a response column name is required")
        if str(response) not in cols:
            raise DataError(f"response column {response!r} not found")
        ridx = cols.index(str(response))
    else:
        first_line = 1
        width = len(rows[0])
        ridx = width - 1 if response is None else int(response) - 1
        if not 0 <= ridx < width:
            raise DataError(f"response column {response} out of range")
        cols = None
    if not rows:
        raise DataError(f"{path} has no data rows")
    M = _parse_matrix(rows, first_line)
    keep = [j for j in range(M.shape[1]) if j != ridx]
    if not keep:
        raise DataError("no predictor columns")
    names = [cols[j] for j in keep] if cols else None
    X = M[:, keep]
    data = Dataset(X, M[:, ridx], names)
    if model is not None:
        data.check_model(Model.parse(model))
    if standardize:
        sd = X.std(axis=0)
        zero = [data.names[j] for j in np.flatnonzero(sd == 0)]
        if zero:
            raise DataError(f"zero-variance predictor(s): {', '.join(zero)}")
    return data


def load_matrix_csv(path, names, *, header=True) -> np.ndarray:
    """Predictor matrix with columns ``names`` (matched by header when present)."""
    rows = _read_rows(path)
    if not rows:
        raise DataError(f"{path} is empty")
    if not header:
        M = _parse_matrix(rows, 1)
        if M.shape[1] != len(names):
            raise DataError(f"expected {len(names)} columns, found {M.shape[1]}")
        return M
    cols = [c.strip() for c in rows[0]]
    missing = [n for n in names if n not in cols]
    if missing:
        raise DataError(f"missing predictor column(s): {', '.join(missing)}")
    idx = [cols.index(n) for n in names]
    return _parse_matrix(rows[1:], 2)[:, idx]


def _fmt(v) -> str:
    return repr(float(v))


def write_draws_csv(draws: PosteriorDraws, path) -> None:
    """Header ``iter,chain,beta0,beta_<name>...,sigma2,tau2``; one row per draw."""
    header = ["iter", "chain", "beta0"] + [f"beta_{n}" for n in draws.names] + ["sigma2", "tau2"]
    it = np.zeros(draws.nsamples, dtype=int)
    for c in np.unique(draws.chain):
        m = draws.chain == c
        it[m] = np.arange(1, m.sum() + 1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for k in range(draws.nsamples):
            w.writerow(
                [int(it[k]), int(draws.chain[k]), _fmt(draws.beta0[k])]
                + [_fmt(v) for v in draws.beta[:, k]]
                + [_fmt(draws.sigma2[k]), _fmt(draws.tau2[k])]
            )


def read_draws_csv(path, model=Model.GAUSSIAN, prior=Prior.RIDGE) -> PosteriorDraws:
    rows = _read_rows(path)
    if len(rows) < 2:
        raise DataError(f"{path} contains no draws")
    header = [c.strip() for c in rows[0]]
    if header[:3] != ["iter", "chain", "beta0"] or header[-2:] != ["sigma2", "tau2"]:
        raise DataError(f"{path} is not a draws file")
    mid = header[3:-2]
    if not all(h.startswith("beta_") for h in mid):
        raise DataError(f"{path}: unexpected column in draws header")
    M = _parse_matrix(rows[1:], 2)
    return PosteriorDraws(
        beta0=M[:, 2], beta=M[:, 3:-2].T.copy(), sigma2=M[:, -2], tau2=M[:, -1],
        names=[h[len("beta_"):] for h in mid], model=Model.parse(model),
        prior=Prior.parse(prior), chain=M[:, 1].astype(int),
    )


def write_predictions_csv(path_or_file, yhat, prob=None) -> None:
    """Columns ``row,prediction`` and, when ``prob`` is given, ``probability``."""
    own = isinstance(path_or_file, (str, Path))
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "prediction"] + (["probability"] if prob is not None else []))
        for i, v in enumerate(yhat):
            cells = [i + 1, int(v) if prob is not None else _fmt(v)]
            if prob is not None:
                cells.append(_fmt(prob[i]))
            w.writerow(cells)
    finally:
        if own:
            fh.close()
