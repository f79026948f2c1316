"""Writing reports and plot-data tables."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from .bundle import CROSSING_FIELDS

TABLE_FIELDS = {
    "crossings_def15": CROSSING_FIELDS,
    "crossings_def14": CROSSING_FIELDS,
    "evans": ["lambda", "det", "sigma_min", "intersection_dim"],
    "spectral_flow": ["lambda", "kernel_dim", "sign"],
    "boundary": ["lambda", "triple_LR", "M_plus_max_eig", "M_minus_min_eig"],
}


def jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become strings so the output stays standard JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_table(path: Path, rows: List[Dict[str, Any]], fields: List[str] | None = None) -> Path:
    if fields is None:
        fields = list(rows[0].keys()) if rows else []
    with open(path, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        wr.writeheader()
        for row in rows:
            wr.writerow(row)
    return path


def write_analysis(analysis, outdir) -> Dict[str, Path]:
    """report.json plus one CSV per table; returns the written paths by name."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {"report": outdir / "report.json"}
    paths["report"].write_text(dumps(analysis.report.to_dict()))
    for name, rows in analysis.tables.items():
        paths[name] = write_table(outdir / f"{name}.csv", rows, TABLE_FIELDS.get(name))
    return paths


def summary_lines(report) -> List[str]:
    r = report
    lines = [
        f"maslov_def15 = {r.indices['maslov_def15']}   maslov_def14 = {r.indices['maslov_def14']}",
        f"boundary_lambda = {r.indices['boundary_lambda']}   triple_LR(0) = {r.indices['triple_LR_0']}"
        f"   triple_LR(C) = {r.indices['triple_LR_C']}",
        f"N_plus = {r.counts['N_plus']}   N_bar_plus = {r.counts['N_bar_plus']}   sf_S = {r.counts['sf_S']}",
    ]
    for k, v in r.identities.items():
        lines.append(f"  {k:<12} {'skipped' if v is None else ('pass' if v else 'FAIL')}")
    return lines
