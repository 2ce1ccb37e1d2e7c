"""Command-line front end.

Subcommands:

* ``budget``   -- print the sufficient-sample-size validators for a
  problem size.
* ``detect``   -- run one pipeline on a matrix file and print the declared
  outlier columns and the sampling rate.
* ``saliency`` -- compute a per-patch saliency mask for a PGM image.
* ``phase``    -- run a phase-transition grid from a JSON config and write
  CSV + PGM outputs.
* ``oracle``   -- re-score a stored dump of decoding-path score vectors
  against a given support.

Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .imaging import read_pgm, saliency_map, write_pgm
from .pipeline import AcosConfig, PipelineError, acos, sacos, sacos_missing
from .sketching import SampleBudget, max_outliers, min_col_budget, min_gamma, min_row_budget
from .solver import SolverDivergenceError
from .synth import oracle_success, phase_grid


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="sketchout", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    b = sub.add_parser("budget", help="print sampling-budget validators")
    b.add_argument("--n1", type=int, required=True)
    b.add_argument("--n2", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--delta", type=float, default=0.1)
    b.add_argument("--mu-l", type=float, default=1.0)
    b.add_argument("--n-low", type=int, default=None, help="nonzero low-rank columns (default n2 - k)")

    d = sub.add_parser("detect", help="identify outlier columns of a matrix file")
    d.add_argument("matrix", help="CSV matrix with rows,cols header")
    d.add_argument("--mode", choices=["acos", "sacos", "sacos_missing"], default="acos")
    d.add_argument("--mask", default=None, help="CSV 0/1 mask (sacos_missing only)")
    d.add_argument("--gamma", type=float, default=0.2)
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--p", type=int, default=0)
    d.add_argument("--lam", type=float, default=None)
    d.add_argument("--k-ub", type=int, default=None)
    d.add_argument("--energy", type=float, default=1.0)
    d.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("saliency", help="saliency mask for a PGM image")
    s.add_argument("image", help="input PGM (P5) image")
    s.add_argument("output", help="output PGM mask")
    s.add_argument("--mode", choices=["acos", "sacos"], default="sacos")
    s.add_argument("--gamma", type=float, default=0.2)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--p", type=int, default=0)
    s.add_argument("--lam", type=float, default=None)
    s.add_argument("--k-ub", type=int, default=None)
    s.add_argument("--energy", type=float, default=0.95)
    s.add_argument("--threshold", type=float, default=0.25,
                   help="declare fraction of the maximum score")
    s.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("phase", help="phase-transition grid from a JSON config")
    p.add_argument("config", help="flat JSON config")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-pgm", required=True)

    o = sub.add_parser("oracle", help="re-score stored score dumps")
    o.add_argument("scores", help="CSV dump, one score vector per row")
    o.add_argument("--support", required=True,
                   help="comma-separated true outlier indices (empty string for none)")
    return top


def _cmd_budget(args) -> int:
    n_low = args.n_low if args.n_low is not None else args.n2 - args.k
    budget = SampleBudget(
        n1=args.n1, n2=args.n2, n_L=n_low, r=args.r,
        k=args.k, mu_L=args.mu_l, delta=args.delta,
    )
    gamma = min_gamma(budget)
    print("m_min     = %d" % min_row_budget(budget))
    print("p_min     = %d" % min_col_budget(budget))
    print("gamma_min = %.6f%s" % (gamma, "  (INFEASIBLE: rate above 1)" if gamma > 1 else ""))
    print("k_max     = %d" % max_outliers(budget))
    print(
        "note: the guarantee constants are conservative; empirical runs "
        "succeed with far smaller m and p (e.g. m = 0.3 n1, p = 0.3 n2)."
    )
    return 0


def _cmd_detect(args) -> int:
    M = io.read_matrix_csv(args.matrix)
    cfg = AcosConfig(
        gamma=args.gamma, m=args.m, p=args.p, lam=args.lam,
        k_ub=args.k_ub, energy=args.energy, seed=args.seed,
    )
    n1, n2 = M.shape
    if args.mode == "acos":
        est, count = acos(M, cfg)
        rate = count / float(n1 * n2)
    elif args.mode == "sacos":
        est, count = sacos(M, cfg)
        rate = count / float(n1 * n2)
    else:
        if args.mask is None:
            raise ValueError("sacos_missing needs --mask")
        mask = io.read_matrix_csv(args.mask) > 0.5
        est, rate = sacos_missing(M, mask, cfg)
    print("declared: %s" % ",".join(str(i) for i in est.declared))
    print("sampling_rate: %.6f" % rate)
    return 0


def _cmd_saliency(args) -> int:
    image = read_pgm(args.image)
    cfg = AcosConfig(
        gamma=args.gamma, m=args.m, p=args.p, lam=args.lam,
        k_ub=args.k_ub, energy=args.energy, seed=args.seed,
    )
    mask, scores = saliency_map(image, args.mode, cfg, args.threshold)
    write_pgm(args.output, mask)
    print("salient patches: %d / %d" % (int(np.count_nonzero(scores > 0)), scores.size))
    return 0


def _cmd_phase(args) -> int:
    raw = io.load_config(args.config)
    try:
        cfg = AcosConfig(
            gamma=raw.get("gamma", 0.2),
            m=raw["m"],
            p=raw.get("p", 0),
            lam=None,
            k_ub=raw.get("k_ub"),
            lasso_path=raw.get("lasso_path", 10),
            energy=raw.get("energy", 1.0),
            seed=raw.get("seed", 0),
        )
        result = phase_grid(
            raw.get("mode", "acos"),
            cfg,
            raw["r_values"],
            raw["k_values"],
            raw["lambda_set"],
            raw.get("trials", 20),
            raw.get("seed", 0),
            n1=raw["n1"],
            n2=raw["n2"],
            noise_sigma=raw.get("noise_sigma", 0.0),
            p_omega=raw.get("p_omega"),
            normalize=raw.get("normalize", False),
        )
    except KeyError as exc:
        raise ValueError("config is missing required key %s" % exc) from exc
    io.write_phase_csv(args.out_csv, result)
    io.write_phase_pgm(args.out_pgm, result)
    print("cells: %d  mean sampling rate: %.4f" % (len(result.grid), result.sampling_rate))
    return 0


def _cmd_oracle(args) -> int:
    scores = io.read_scores_csv(args.scores)
    support = [int(t) for t in args.support.split(",") if t.strip() != ""]
    print("success: %s" % ("true" if oracle_success(scores, support) else "false"))
    return 0


_COMMANDS = {
    "budget": _cmd_budget,
    "detect": _cmd_detect,
    "saliency": _cmd_saliency,
    "phase": _cmd_phase,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (SolverDivergenceError, PipelineError, FloatingPointError) as exc:
        print("solver failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
