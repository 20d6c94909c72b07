import numpy as np
import pytest

from meanking.errors import DimensionMismatch
from meanking.reporting import (
    aggregate,
    check_run_dim,
    load_run,
    report_csv,
    run_to_json,
    save_run,
    sig6,
)
from meanking.tuner import OptimizationRun

# published per-basis success probabilities, used as report fixtures
TABLE1 = {
    3: [0.833, 0.623, 0.506, 0.418],
    5: [0.533, 0.328, 0.376, 0.369, 0.382, 0.312],
    7: [0.418, 0.244, 0.261, 0.208, 0.230, 0.251, 0.228, 0.278],
}


def test_sig6():
    assert sig6(0.5949999) == "0.595"
    assert sig6(72.8) == "72.8"
    assert sig6(1 / 3) == "0.333333"


def test_aggregate_published_3d():
    agg = aggregate(dict(enumerate(TABLE1[3])))
    assert agg["average"] == pytest.approx(0.595, abs=1e-3)
    assert agg["best_pair"] == (0, 1)
    assert agg["best_pair_value"] == pytest.approx(0.728, abs=1e-3)


def test_aggregate_published_5d_7d():
    agg5 = aggregate(dict(enumerate(TABLE1[5])))
    assert agg5["best_pair"] == (0, 4)
    assert agg5["best_pair_value"] == pytest.approx(0.458, abs=1e-3)
    agg7 = aggregate(dict(enumerate(TABLE1[7])))
    assert agg7["best_pair"] == (0, 7)
    assert agg7["best_pair_value"] == pytest.approx(0.348, abs=1e-3)


def test_report_csv_layout():
    text = report_csv(3, dict(enumerate(TABLE1[3])), percent=True)
    lines = text.strip().split("\n")
    assert lines[0] == "D,m,p_M"
    assert lines[1] == "3,0,83.3"
    assert lines[-2] == "3,average,59.5"
    assert lines[-1] == '3,"best2(0,1)",72.8'


def test_run_roundtrip(tmp_path):
    run = OptimizationRun(
        seed=7,
        restarts=5,
        best_phases=np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6]),
        best_loss=-0.5,
        objective="p_v",
    )
    payload = run_to_json(3, run, 0.5, dict(enumerate(TABLE1[3])))
    path = tmp_path / "run.json"
    save_run(str(path), payload)
    data = load_run(str(path))
    assert data == payload
    assert data["p_m"]["0"] == 0.833
    check_run_dim(data, 3)
    with pytest.raises(DimensionMismatch):
        check_run_dim(data, 5)


def test_load_run_rejects_invalid(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    with pytest.raises(ValueError):
        load_run(str(path))
