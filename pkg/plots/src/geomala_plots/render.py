"""Figure rendering. Deterministic: fixed sizes, no timestamps, Agg backend."""

from __future__ import annotations

import os

import matplotlib
matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import SchemaError, read_summary, read_trace, read_tuning

TRACE_SIZE = (12.0, 5.0)  # inches at dpi 100 -> 1200 x 500 px
SQUARE_SIZE = (7.0, 5.0)
DPI = 100


def _save(fig, out_path):
    out_path = str(out_path)
    parent = os.path.dirname(out_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    fig.savefig(out_path, dpi=DPI, metadata={"Software": "geomala-plots"})
    plt.close(fig)
    return out_path


def _coordinate_series(trace, coordinate):
    if not 1 <= coordinate <= trace.dim:
        raise SchemaError(
            f"{trace.path}: coordinate {coordinate} out of range 1..{trace.dim}")
    return trace.states[:, coordinate - 1]


def plot_trace(csv_paths, coordinate, out_path, title=None):
    """Chain-evolution panels, one per input trace file."""
    if isinstance(csv_paths, (str, os.PathLike)):
        csv_paths = [csv_paths]
    traces = [read_trace(p) for p in csv_paths]
    fig, axes = plt.subplots(1, len(traces), figsize=TRACE_SIZE, sharey=False,
                             squeeze=False)
    for ax, trace in zip(axes[0], traces):
        series = _coordinate_series(trace, coordinate)
        marker = "o" if len(series) == 1 else None
        ax.plot(trace.iterations, series, lw=0.6, marker=marker, ms=3,
                color="tab:blue")
        ax.set_xlabel("iteration")
        ax.set_title(os.path.basename(str(trace.path)), fontsize=9)
    axes[0][0].set_ylabel(f"x{coordinate}")
    if title:
        fig.suptitle(title)
    return _save(fig, out_path)


def sample_acf(series, max_lag):
    """Normalised autocorrelation up to max_lag (biased normalisation)."""
    x = np.asarray(series, dtype=float)
    x = x - x.mean()
    c0 = float(x @ x)
    if c0 == 0.0:
        out = np.zeros(max_lag + 1)
        out[0] = 1.0
        return out
    return np.array([1.0] + [float(x[:-k] @ x[k:]) / c0
                             for k in range(1, max_lag + 1)])


def plot_acf(csv_path, out_path, coordinate=1, max_lag=50, title=None):
    trace = read_trace(csv_path)
    series = _coordinate_series(trace, coordinate)
    max_lag = min(int(max_lag), len(series) - 1)
    if max_lag < 1:
        raise SchemaError(f"{trace.path}: not enough rows for an ACF plot")
    acf = sample_acf(series, max_lag)
    fig, ax = plt.subplots(figsize=SQUARE_SIZE)
    ax.bar(np.arange(max_lag + 1), acf, width=0.8, color="tab:blue")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.set_xlabel("lag")
    ax.set_ylabel(f"acf of x{coordinate}")
    if title:
        ax.set_title(title)
    return _save(fig, out_path)


def plot_tuning(json_path, out_path, title=None):
    """Acceptance against step size, with the selection and target marked."""
    report = read_tuning(json_path)
    grid = sorted(report["grid"], key=lambda r: r["step"])
    steps = [r["step"] for r in grid]
    accs = [r["acceptance"] for r in grid]
    fig, ax = plt.subplots(figsize=SQUARE_SIZE)
    ax.plot(steps, accs, "o-", color="tab:blue", label="measured")
    ax.axhline(report["target_acceptance"], color="tab:red", ls="--",
               label=f"target {report['target_acceptance']:g}")
    sel = report["selected"]
    ax.plot([sel["step"]], [sel["acceptance"]], "s", ms=10, mfc="none",
            mec="tab:green", label=f"selected {sel['step']:g}")
    if len(grid) == 1:
        ax.annotate("single grid point: no sweep to compare against",
                    xy=(steps[0], accs[0]), xytext=(0.05, 0.9),
                    textcoords="axes fraction", color="tab:red")
    ax.set_xscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("acceptance rate")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    return _save(fig, out_path)


def plot_compare(json_paths, out_path, title=None):
    """Grouped bars of ESS per second across runs or compare-report rows."""
    if isinstance(json_paths, (str, os.PathLike)):
        json_paths = [json_paths]
    bars = []
    for path in json_paths:
        label, rows = read_summary(path)
        for row in rows:
            name = row["name"] or os.path.basename(os.path.dirname(str(path))) \
                or os.path.basename(str(path))
            bars.append((name, row["ess_per_s"]))
    if not bars:
        raise SchemaError("no rows to compare")

    functions = sorted({fn for _, per in bars for fn in per})
    width = 0.8 / len(functions)
    fig, ax = plt.subplots(figsize=SQUARE_SIZE)
    xs = np.arange(len(bars))
    for j, fn in enumerate(functions):
        vals = [per.get(fn, 0.0) for _, per in bars]
        ax.bar(xs + j * width, vals, width=width, label=fn)
    ax.set_xticks(xs + 0.4 - width / 2)
    ax.set_xticklabels([name for name, _ in bars], rotation=20, ha="right",
                       fontsize=8)
    ax.set_ylabel("ESS per second")
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    return _save(fig, out_path)
