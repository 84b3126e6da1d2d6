import json
import subprocess
import sys

import pytest


def run_geomala(config, tmp_path, tag):
    """Drive the sampler CLI; the file formats are the only interface used."""
    cfg_path = tmp_path / f"{tag}.json"
    cfg_path.write_text(json.dumps(config))
    proc = subprocess.run(
        [sys.executable, "-m", "geomala.cli", "run", "--config", str(cfg_path),
         "--quiet"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return tmp_path / config["output"]["directory"]


@pytest.fixture(scope="session")
def figure_one_traces(tmp_path_factory):
    """Three RWM chains on a 1-D standard normal: timid, tuned, oversized."""
    tmp_path = tmp_path_factory.mktemp("fig1")
    paths = []
    for step in (0.1, 2.4, 50.0):
        out = f"run_{str(step).replace('.', '_')}"
        config = {
            "target": {"name": "std_gaussian", "dim": 1},
            "kernel": {"kind": "rwm", "step": step},
            "run": {"steps": 1500, "burn_in": 0, "seed": 31},
            "output": {"directory": out},
        }
        cfg_path = tmp_path / f"cfg_{out}.json"
        cfg_path.write_text(json.dumps(config))
        proc = subprocess.run(
            [sys.executable, "-m", "geomala.cli", "run", "--config", str(cfg_path),
             "--quiet", "--out-dir", str(tmp_path / out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        paths.append(tmp_path / out / "trace_c0.csv")
    return paths
