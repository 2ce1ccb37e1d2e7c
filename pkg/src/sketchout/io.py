"""File formats for the command-line tools.

* Matrices: CSV, row-major, first line the header ``rows,cols``, values at
  fixed precision 6 so outputs are byte-stable across platforms.
* Phase grids: one CSV row per feasible cell, plus an 8-bit grayscale PGM
  heat map (white = success) with rank varying along columns and outlier
  count along rows.
* Operators: a one-line CSV carrying (kind, rows, cols, seed, scale) --
  enough to regenerate the realization bit-for-bit.
* Configs: flat JSON objects.
"""

from __future__ import annotations

import json

import numpy as np

from . import imaging
from .sketching import (
    KIND_COLUMN,
    KIND_DENSE,
    KIND_PROBE,
    KIND_ROW,
    SketchOperator,
    make_column_sampler,
    make_gaussian_sketch,
    make_probe_vector,
    make_row_subsampler,
)


def write_matrix_csv(path, X: np.ndarray) -> None:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    with open(path, "w", newline="\n") as fh:
        fh.write("%d,%d\n" % X.shape)
        for row in X:
            fh.write(",".join("%.6f" % v for v in row) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        try:
            rows, cols = (int(t) for t in header.split(","))
        except ValueError as exc:
            raise ValueError("matrix file must start with a rows,cols header") from exc
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape != (rows, cols):
        raise ValueError(
            "matrix body %s does not match header (%d, %d)" % (data.shape, rows, cols)
        )
    return data


def write_scores_csv(path, scores_per_mu) -> None:
    """One score vector per row (a dump of the decoding path)."""
    write_matrix_csv(path, np.vstack([np.asarray(s, float) for s in scores_per_mu]))


def read_scores_csv(path) -> list[np.ndarray]:
    return [row for row in read_matrix_csv(path)]


def write_phase_csv(path, result) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("r,k,lambda_best,success_rate,trials,sampling_rate\n")
        for r in result.r_values:
            for k in result.k_values:
                if (r, k) not in result.grid:
                    continue
                fh.write(
                    "%d,%d,%.6f,%.6f,%d,%.6f\n"
                    % (
                        r,
                        k,
                        result.cell_lambda_best[(r, k)],
                        result.grid[(r, k)],
                        result.trials_per_cell,
                        result.cell_rate[(r, k)],
                    )
                )


def write_phase_pgm(path, result) -> None:
    """Heat map with one pixel per cell; 255 = always recovered."""
    img = np.zeros((len(result.k_values), len(result.r_values)), dtype=np.uint8)
    for i, k in enumerate(result.k_values):
        for j, r in enumerate(result.r_values):
            if (r, k) in result.grid:
                img[i, j] = int(round(255 * result.grid[(r, k)]))
    imaging.write_pgm(path, img)


_MAKERS = {
    KIND_DENSE: lambda rows, cols, seed: make_gaussian_sketch(rows, cols, seed),
    KIND_COLUMN: None,  # rebuilt from (rows=n2, seed); gamma travels in scale
    KIND_ROW: lambda rows, cols, seed: make_row_subsampler(cols, rows, seed),
    KIND_PROBE: lambda rows, cols, seed: make_probe_vector(cols, seed),
}


def dump_operator(path, op: SketchOperator, gamma: float | None = None) -> None:
    """Persist the recipe of an operator (not its entries)."""
    aux = gamma if op.kind == KIND_COLUMN else op.scale
    if op.kind == KIND_COLUMN and gamma is None:
        raise ValueError("column samplers need their gamma to be reproducible")
    with open(path, "w", newline="\n") as fh:
        fh.write("kind,rows,cols,seed,aux\n")
        fh.write("%s,%d,%d,%d,%.17g\n" % (op.kind, op.rows, op.cols, op.seed, aux))


def load_operator(path) -> SketchOperator:
    with open(path) as fh:
        fh.readline()
        kind, rows, cols, seed, aux = fh.readline().strip().split(",")
    rows, cols, seed, aux = int(rows), int(cols), int(seed), float(aux)
    if kind == KIND_COLUMN:
        return make_column_sampler(rows, aux, seed)
    maker = _MAKERS.get(kind)
    if maker is None:
        raise ValueError("unknown operator kind %r" % kind)
    return maker(rows, cols, seed)


def load_config(path) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a flat JSON object")
    return cfg
