#!/usr/bin/env python3
"""Desk-scale phase-transition grids for the three pipelines.

Produces a success-frequency CSV and a PGM heat map (white = recovered)
per mode under --out.  The full-size grids from the reference experiments
(40 ranks x 50 outlier counts x 100 trials) take hours; the defaults here
sweep a coarse grid with 10 trials per cell in a few minutes.  Bump
--trials and the grid densities for smoother boundaries.
"""

import argparse
import pathlib
import time

from sketchout import AcosConfig, io, phase_grid

MODES = {
    # mode: (cfg kwargs, extra phase_grid kwargs, k grid)
    "acos": (dict(p=300), {}, [2, 10, 30, 60, 100]),
    "sacos": (dict(), {}, [20, 100, 300, 600, 900]),
    "sacos_missing": (dict(), dict(p_omega=0.7), [10, 50, 150, 300]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mode", choices=sorted(MODES), default="sacos")
    ap.add_argument("--n1", type=int, default=100)
    ap.add_argument("--n2", type=int, default=1000)
    ap.add_argument("--m", type=int, default=30)
    ap.add_argument("--gamma", type=float, default=0.2)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--r-values", type=int, nargs="+", default=[1, 5, 10, 20, 40])
    ap.add_argument("--lambda-set", type=float, nargs="+", default=[0.3, 0.4, 0.5])
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("results"))
    args = ap.parse_args()

    cfg_extra, grid_extra, k_values = MODES[args.mode]
    cfg = AcosConfig(gamma=args.gamma, m=args.m, seed=args.seed, **cfg_extra)
    t0 = time.time()
    result = phase_grid(
        args.mode,
        cfg,
        args.r_values,
        k_values,
        args.lambda_set,
        args.trials,
        args.seed,
        n1=args.n1,
        n2=args.n2,
        **grid_extra,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    stem = args.out / ("phase_%s_m%d" % (args.mode, args.m))
    io.write_phase_csv(stem.with_suffix(".csv"), result)
    io.write_phase_pgm(stem.with_suffix(".pgm"), result)
    print(
        "%s: %d cells, mean sampling rate %.1f%%, %.1fs -> %s.{csv,pgm}"
        % (
            args.mode,
            len(result.grid),
            100 * result.sampling_rate,
            time.time() - t0,
            stem,
        )
    )


if __name__ == "__main__":
    main()
