"""Deterministic CSV and JSON writers for solved fields and check reports.

Numbers are written in shortest round-trip decimal form (Python repr), so
reruns with the same configuration and seed produce byte-identical files.
"""

from __future__ import annotations

import json
from itertools import product
from pathlib import Path

import numpy as np

from .flows import Trajectory
from .solver import ValueField


def _fmt(x: float) -> str:
    return repr(float(x))


def write_field_csv(field: ValueField, path) -> int:
    """Rows t1..tm, x1..xn, value over the full node product; returns row count."""
    path = Path(path)
    m, n = field.mgrid.m, field.sgrid.ndim
    header = ([f"t{k + 1}" for k in range(m)]
              + [f"x{k + 1}" for k in range(n)] + ["value"])
    rows = 0
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for t_index in product(*(range(c) for c in field.mgrid.counts)):
            t = field.mgrid.point(t_index)
            layer = field.values[t_index]
            for x_index in product(*(range(c) for c in field.sgrid.shape)):
                x = field.sgrid.node(x_index)
                cells = [_fmt(c) for c in t] + [_fmt(c) for c in x]
                cells.append(_fmt(layer[x_index]))
                fh.write(",".join(cells) + "\n")
                rows += 1
    return rows


def write_trajectory_csv(trajectory: Trajectory, path) -> int:
    path = Path(path)
    m = trajectory.times.shape[1]
    n = trajectory.states.shape[1]
    header = (["arc"] + [f"s{k + 1}" for k in range(m)]
              + [f"x{k + 1}" for k in range(n)])
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for arc, s, x in zip(trajectory.arcs, trajectory.times, trajectory.states):
            fh.write(",".join([_fmt(arc)] + [_fmt(c) for c in s]
                              + [_fmt(c) for c in x]) + "\n")
    return len(trajectory.arcs)


def json_ready(obj):
    """Recursively convert numpy scalars/arrays so json.dumps round-trips."""
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [json_ready(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def write_report_json(report: dict, path) -> None:
    path = Path(path)
    text = json.dumps(json_ready(report), indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")


def render_summary(report: dict, wall_seconds: float | None = None) -> str:
    """Human-readable digest; wall time stays out of report.json so that the
    machine-readable report is byte-stable across reruns."""
    lines = [f"game: {report.get('game', '?')}"]
    grids = report.get("grids", {})
    if grids:
        lines.append(
            f"grids: multitime {grids.get('multitime_counts')} over "
            f"{grids.get('horizon')}, state {grids.get('state_counts')} over "
            f"[{grids.get('state_low')}, {grids.get('state_high')}]"
        )
    for side, info in sorted(report.get("solves", {}).items()):
        lines.append(
            f"solve[{side}]: compatibility_residual={info['compatibility_residual']:.3e} "
            f"out_of_box_count={info['out_of_box_count']}"
        )
    for name, info in report.get("checks", {}).items():
        status = "pass" if info.get("passed") else "FAIL"
        detail = info.get("summary", "")
        lines.append(f"check[{name}]: {status}{'  ' + detail if detail else ''}")
    lines.append(f"overall: {'pass' if report.get('passed') else 'FAIL'}")
    if wall_seconds is not None:
        lines.append(f"wall time: {wall_seconds:.3f} s")
    return "\n".join(lines) + "\n"
