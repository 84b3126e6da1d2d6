import json

import numpy as np
import pytest
from PIL import Image

from geomala_plots import (SchemaError, plot_acf, plot_compare, plot_trace,
                           plot_tuning, sample_acf)

GOOD_HEADER = "iter,accepted,log_pi,x1\n"


def write_trace(path, rows):
    path.write_text(GOOD_HEADER + "".join(rows))
    return path


def test_three_panel_traceplot_matches_figure_one_regimes(figure_one_traces, tmp_path):
    out = tmp_path / "fig1.png"
    plot_trace(figure_one_traces, 1, out, title="random walk step regimes")
    assert Image.open(out).size == (1200, 500)
    # the qualitative regimes behind the figure: tiny steps crawl, tuned steps
    # mix, huge steps freeze
    from geomala_plots import read_trace
    timid, tuned, wild = [read_trace(p) for p in figure_one_traces]
    assert timid.accepted.mean() > 0.9
    assert 0.2 < tuned.accepted.mean() < 0.7
    assert wild.accepted.mean() < 0.1
    assert np.ptp(timid.states) < np.ptp(tuned.states)


def test_rendering_is_deterministic(figure_one_traces, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    plot_trace(figure_one_traces, 1, a)
    plot_trace(figure_one_traces, 1, b)
    assert a.read_bytes() == b.read_bytes()


def test_single_row_trace_renders_as_a_point(tmp_path):
    path = write_trace(tmp_path / "one.csv", ["1,1,-0.5,0.3\n"])
    out = plot_trace(path, 1, tmp_path / "one.png")
    assert Image.open(out).size == (1200, 500)


def test_empty_trace_is_an_error(tmp_path):
    path = (tmp_path / "empty.csv")
    path.write_text(GOOD_HEADER)
    with pytest.raises(SchemaError):
        plot_trace(path, 1, tmp_path / "never.png")


def test_out_of_range_coordinate_is_an_error(tmp_path):
    path = write_trace(tmp_path / "t.csv", ["1,1,-0.5,0.3\n", "2,1,-0.4,0.1\n"])
    with pytest.raises(SchemaError):
        plot_trace(path, 2, tmp_path / "never.png")


def test_acf_of_iid_series_is_flat(tmp_path):
    rng = np.random.default_rng(5)
    series = rng.standard_normal(10_000)
    acf = sample_acf(series, 40)
    assert acf[0] == 1.0
    assert np.max(np.abs(acf[1:])) < 0.05
    rows = [f"{i + 1},1,0.0,{float(v)!r}\n" for i, v in enumerate(series)]
    out = plot_acf(write_trace(tmp_path / "iid.csv", rows), tmp_path / "acf.png",
                   max_lag=40)
    assert Image.open(out).size == (700, 500)


def test_tuning_plot_and_single_point_annotation(tmp_path):
    grid = [{"step": s, "acceptance": a, "ess": e}
            for s, a, e in ((0.5, 0.8, 50.0), (1.0, 0.5, 120.0), (2.0, 0.2, 60.0))]
    payload = {"target_acceptance": 0.574, "grid": grid, "selected": grid[1]}
    path = tmp_path / "tuning.json"
    path.write_text(json.dumps(payload))
    out = plot_tuning(path, tmp_path / "tuning.png")
    assert Image.open(out).size == (700, 500)

    single = {"target_acceptance": 0.574, "grid": grid[:1], "selected": grid[0]}
    path.write_text(json.dumps(single))
    annotated = plot_tuning(path, tmp_path / "tuning_single.png")
    assert Image.open(annotated).size == (700, 500)


def test_compare_chart_from_mixed_reports(tmp_path):
    compare = tmp_path / "compare.json"
    compare.write_text(json.dumps({"target": "demo", "rows": [
        {"kind": "rwm", "ess": 40.0, "wall_time_s": 2.0, "acceptance": 0.23},
        {"kind": "mala", "ess": 90.0, "wall_time_s": 3.0, "acceptance": 0.57},
        {"kind": "smmala", "ess": 80.0, "wall_time_s": 4.0, "acceptance": 0.6},
    ]}))
    summary = tmp_path / "summary.json"
    summary.write_text(json.dumps(
        {"acceptance_rate": 0.4, "ess": {"x1": 10.0, "sqnorm": 8.0},
         "wall_time_s": 1.0}))
    out = plot_compare([compare, summary], tmp_path / "compare.png")
    assert Image.open(out).size == (700, 500)
