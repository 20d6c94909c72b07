"""Persistence of optimization runs and Table-style CSV reports."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import DimensionMismatch
from .inference import best_pair
from .tuner import OptimizationRun


def sig6(x: float) -> str:
    """Six significant digits, '.' decimal separator."""
    return f"{float(x):.6g}"


def run_to_json(
    dim: int, run: OptimizationRun, p_v: float, p_m: dict[int, float]
) -> dict:
    return {
        "dim": dim,
        "objective": run.objective,
        "seed": run.seed,
        "restarts": run.restarts,
        "strategy": run.strategy,
        "post_select": run.post_select,
        "phases": [float(v) for v in run.best_phases],
        "p_v": float(p_v),
        "p_m": {str(m): float(v) for m, v in sorted(p_m.items())},
    }


def save_run(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_run(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not data or "phases" not in data or "dim" not in data:
        raise ValueError(f"not a valid run file: {path}")
    return data


def aggregate(p_m: dict[int, float]) -> dict:
    """Average over bases and the maximizing 2-subset of bases."""
    ms = sorted(p_m)
    values = [p_m[m] for m in ms]
    (i1, i2), pair_value = best_pair(values)
    return {
        "average": float(np.mean(values)),
        "best_pair": (ms[i1], ms[i2]),
        "best_pair_value": pair_value,
    }


def report_csv(dim: int, p_m: dict[int, float], percent: bool = False) -> str:
    """Table-style CSV: one row per basis plus average and best-pair rows."""
    scale = 100.0 if percent else 1.0
    agg = aggregate(p_m)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["D", "m", "p_M"])
    for m in sorted(p_m):
        writer.writerow([dim, m, sig6(p_m[m] * scale)])
    writer.writerow([dim, "average", sig6(agg["average"] * scale)])
    m1, m2 = agg["best_pair"]
    writer.writerow([dim, f"best2({m1},{m2})", sig6(agg["best_pair_value"] * scale)])
    return buf.getvalue()


def check_run_dim(data: dict, dim: int) -> None:
    if int(data["dim"]) != dim:
        raise DimensionMismatch(f"run file is for D={data['dim']}, expected D={dim}")
