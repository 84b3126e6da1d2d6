"""Strict readers for the file formats the sampler CLI documents.

Anything that deviates from the documented schema is a SchemaError carrying
the file path and, for CSVs, the 1-based row number. Schema drift between
the sampler and this package is meant to fail loudly here.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """An input file does not conform to the documented schema."""


@dataclass
class TraceData:
    """Parsed trace CSV: iter,accepted,log_pi,x1..xn."""

    iterations: np.ndarray
    accepted: np.ndarray
    log_pi: np.ndarray
    states: np.ndarray
    path: str

    @property
    def dim(self):
        return self.states.shape[1]

    def __len__(self):
        return self.states.shape[0]


def read_trace(path):
    path = str(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if header[:3] != ["iter", "accepted", "log_pi"] or len(header) < 4:
            raise SchemaError(f"{path}: header must be iter,accepted,log_pi,x1,...")
        dim = len(header) - 3
        expected = ["iter", "accepted", "log_pi"] + [f"x{i + 1}" for i in range(dim)]
        if header != expected:
            raise SchemaError(f"{path}: header must be {','.join(expected)}")

        iters, accepted, log_pi, states = [], [], [], []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise SchemaError(
                    f"{path}: row {row_no}: expected {len(header)} columns, got {len(row)}")
            try:
                iters.append(int(row[0]))
            except ValueError:
                raise SchemaError(f"{path}: row {row_no}: iter must be an integer") from None
            if row[1] not in ("0", "1"):
                raise SchemaError(f"{path}: row {row_no}: accepted must be 0 or 1")
            accepted.append(row[1] == "1")
            try:
                log_pi.append(float(row[2]))
                states.append([float(v) for v in row[3:]])
            except ValueError:
                raise SchemaError(f"{path}: row {row_no}: malformed number") from None

    if not states:
        raise SchemaError(f"{path}: trace has no rows")
    return TraceData(np.asarray(iters), np.asarray(accepted, dtype=bool),
                     np.asarray(log_pi), np.asarray(states), path)


def _load_json(path):
    path = str(path)
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None


def read_tuning(path):
    """Tuning report: target_acceptance, grid rows of step/acceptance/ess, selected."""
    payload = _load_json(path)
    for key in ("target_acceptance", "grid", "selected"):
        if key not in payload:
            raise SchemaError(f"{path}: tuning report is missing '{key}'")
    grid = payload["grid"]
    if not isinstance(grid, list) or not grid:
        raise SchemaError(f"{path}: tuning 'grid' must be a non-empty list")
    for i, row in enumerate(grid):
        for key in ("step", "acceptance", "ess"):
            if key not in row:
                raise SchemaError(f"{path}: grid entry {i} is missing '{key}'")
    return payload


def read_summary(path):
    """Run summary or compare report.

    Returns (label, rows) where each row has a name, an ess-per-second map
    and an acceptance rate. Run summaries contribute a single row.
    """
    payload = _load_json(path)
    if "rows" in payload:  # compare report
        rows = []
        for i, row in enumerate(payload["rows"]):
            for key in ("kind", "ess", "wall_time_s", "acceptance"):
                if key not in row:
                    raise SchemaError(f"{path}: compare row {i} is missing '{key}'")
            rows.append({"name": row["kind"],
                         "ess_per_s": {"all": row["ess"] / row["wall_time_s"]},
                         "acceptance": row["acceptance"]})
        if not rows:
            raise SchemaError(f"{path}: compare report has no rows")
        return payload.get("target", path), rows
    for key in ("acceptance_rate", "ess", "wall_time_s"):
        if key not in payload:
            raise SchemaError(f"{path}: summary is missing '{key}'")
    if not isinstance(payload["ess"], dict) or not payload["ess"]:
        raise SchemaError(f"{path}: summary 'ess' must be a non-empty object")
    wall = payload["wall_time_s"]
    if not wall or wall <= 0:
        raise SchemaError(f"{path}: summary wall_time_s must be positive")
    row = {"name": None,
           "ess_per_s": {k: v / wall for k, v in payload["ess"].items()},
           "acceptance": payload["acceptance_rate"]}
    return path, [row]
