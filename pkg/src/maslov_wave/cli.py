"""Command line: ``maslov-wave {check,solve-wave,analyze}``.

Exit codes
----------
0  success
1  check: a required hypothesis fails
2  invalid configuration or arguments
3  analyze / solve-wave: a pipeline stage failed (stage name printed)
4  analyze: an identity or inequality check failed
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import config as cf
from . import pipeline as pl
from . import report as rp
from . import wave as wv
from .errors import InputError, PipelineError

EXIT_OK, EXIT_HYPOTHESIS, EXIT_CONFIG, EXIT_PIPELINE, EXIT_IDENTITY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message format ours
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="maslov-wave", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--system", choices=["fhn"], help="builtin system (overrides the config)")
    common.add_argument("--a", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--d", type=float)
    common.add_argument("--xi-max", type=float, dest="xi_max", help="half-length of the wave domain")
    common.add_argument("--nodes", type=int, help="grid nodes of the wave solver")
    common.add_argument("--lambda-grid", type=int, dest="lambda_grid", help="lambda samples on [0, C]")
    common.add_argument("--delta0", type=float, help="exclusion zone around lambda = 0")
    common.add_argument("--profile", type=Path, help="profile CSV (skips the solver)")
    common.add_argument("--meta", type=Path, help="profile metadata JSON")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int)
    sub.add_parser("check", parents=[common], help="check hypotheses H1, H2, H2' at the rest states")
    sub.add_parser("solve-wave", parents=[common], help="compute the front and write the profile")
    sub.add_parser("analyze", parents=[common], help="run the full index and counting pipeline")
    return p


def resolve_config(args) -> dict:
    user = cf.load_config(args.config) if args.config else {}
    cf.validate(user)
    if args.system:
        sysb = dict(user.get("system", {}))
        if sysb.get("kind") != args.system:
            sysb = {"kind": args.system}
        user["system"] = sysb
    ov = {
        "bvp.Xi": args.xi_max,
        "bvp.nodes": args.nodes,
        "sweep.lambda_grid": args.lambda_grid,
        "sweep.delta0": args.delta0,
        "output.dir": str(args.out) if args.out else None,
        "seed": args.seed,
        "profile.csv": str(args.profile) if args.profile else None,
        "profile.meta": str(args.meta) if args.meta else None,
    }
    for key in ("a", "gamma", "d"):
        val = getattr(args, key)
        if val is not None:
            kind = user.get("system", {}).get("kind", "fhn")
            if kind != "fhn" and not (kind == "nagumo" and key == "a"):
                raise InputError(f"--{key} does not apply to system kind {kind!r}")
            user.setdefault("system", {"kind": "fhn"})
            ov[f"system.{key}"] = val
    user = cf.apply_overrides(user, ov)
    return cf.merged(user)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    os.environ.setdefault("MASLOV_WAVE_THREADS", "1")

    if args.command == "check":
        try:
            res = pl.run_check(cfg)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        for line in res.lines():
            print(line)
        return EXIT_OK if res.ok else EXIT_HYPOTHESIS

    outdir = Path(cfg["output"]["dir"])
    if args.command == "solve-wave":
        try:
            with pl.stage("wave"):
                prof = pl.obtain_wave(cfg)
        except PipelineError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PIPELINE
        outdir.mkdir(parents=True, exist_ok=True)
        csv_path, meta_path = wv.save_profile(prof, outdir / "wave.csv", outdir / "wave.json")
        print(f"c = {prof.c!r}  residual = {prof.residual_norm:.3e}")
        print(f"wrote {csv_path} and {meta_path}")
        return EXIT_OK

    try:
        analysis = pl.run_analysis(cfg)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"stage: {exc.stage}", file=sys.stderr)
        return EXIT_PIPELINE
    paths = rp.write_analysis(analysis, outdir)
    if analysis.profile is not None and not (cfg.get("profile") or {}).get("csv"):
        wv.save_profile(analysis.profile, outdir / "wave.csv", outdir / "wave.json")
    for line in rp.summary_lines(analysis.report):
        print(line)
    print(f"report: {paths['report']}")
    failed = analysis.report.failed
    if failed:
        print(f"identity checks failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_IDENTITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
