"""Stable FitzHugh--Nagumo front: solve, analyze, and print the index report.

Usage: python demos/fhn_front.py [outdir]
"""

import sys

from maslov_wave import config as cf
from maslov_wave import pipeline as pl
from maslov_wave import report as rp


def main(outdir="fhn_out"):
    cfg = cf.merged({"system": {"kind": "fhn", "a": 0.25, "gamma": 10.0, "d": 1.0}})
    out = pl.run_analysis(cfg)
    print(f"wave speed c = {out.profile.c:.12f}   residual = {out.profile.residual_norm:.2e}")
    for line in rp.summary_lines(out.report):
        print(line)
    tr = out.report.details["translation"]
    print(f"lambda = 0: det = {tr['det0']:.2e}, kernel dim {tr['kernel_dim']}, "
          f"angle to w' = {tr['angle']:.1e}")
    paths = rp.write_analysis(out, outdir)
    print(f"report written to {paths['report']}")


if __name__ == "__main__":
    main(*sys.argv[1:])
