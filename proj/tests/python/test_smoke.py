import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import gracezo

ROOT = Path(__file__).resolve().parents[2]

SPEC = """[experiment]
benchmark = distance
d = 64
s = 4
instance_seeds = 1,2
run_seeds = 1
budget = 400
eta_grid = 0.5,0.1

[grace]
[gld]
"""


def test_constants():
    assert 2.2886 <= gracezo.compute_C1() < 2.29
    assert abs(gracezo.compute_C2(gracezo.TheoryParams()) - 134.88) <= 0.1
    assert gracezo.DivisionSchedule.practical(20).prefix(3) == [20, 89, 839]
    ok, report = gracezo.verify_theory()
    assert ok, report
    assert gracezo.falling_factorial(30, 30) == math.factorial(30)


def test_estimate_on_python_callable():
    coeffs = {3: 2.0, 17: -1.5}

    def f(x):
        return 2.0 * x[3] - 1.5 * x[17]

    obj = gracezo.Objective(32, f)
    counted, ledger = gracezo.with_ledger(obj)
    cfg = gracezo.GraceConfig.defaults(32, 2, 1e-3)
    cfg.group_size = 1
    g = gracezo.grace_estimate(counted, np.zeros(32), cfg, gracezo.RngStream(5))
    assert g.queries_used == ledger.count == 33
    for j, c in coeffs.items():
        assert g[j] == pytest.approx(c, abs=1e-9)
    assert np.count_nonzero(g.dense()) == 2


def test_distance_instance_and_minimize():
    inst = gracezo.instantiate("family = distance\nd = 128\ns = 5\nseed = 3\n")
    x1 = inst.initial_point
    assert len(inst.support) == 5
    assert inst.objective(x1) > 0
    cfg = gracezo.GraceConfig.defaults(128, 5, 1e-4)
    trace = gracezo.minimize(inst.objective, x1, "grace", eta=0.5, budget=1000, grace=cfg, seed=1)
    assert trace["queries"][-1] <= 1000
    assert trace["normalized"][0] == 1.0
    assert min(trace["normalized"]) < 0.5


def test_budget_exception_type():
    obj = gracezo.Objective(2, lambda x: float(x[0]))
    counted, _ = gracezo.with_ledger(obj, 1)
    counted(np.zeros(2))
    with pytest.raises(gracezo.BudgetExhausted):
        counted(np.zeros(2))


def test_parse_error_type():
    with pytest.raises(gracezo.ParseError):
        gracezo.normalize_experiment_spec("[experiment]\nbenchmark = nowhere\n")


def test_experiment_is_deterministic_and_summary_consistent(tmp_path):
    a = gracezo.run_experiment(SPEC, jobs=1)
    b = gracezo.run_experiment(SPEC, jobs=2)
    assert not a["failures"]
    for key in ("trace_csv", "summary_csv", "sweep_csv"):
        assert a[key] == b[key]
        (tmp_path / (key[:-4] + ".csv")).write_text(a[key])
    sys.path.insert(0, str(ROOT / "tools"))
    import check_summary

    assert check_summary.check(tmp_path, 1e-12) == []


def test_check_summary_detects_tampering(tmp_path):
    out = gracezo.run_experiment(SPEC, jobs=1)
    (tmp_path / "trace.csv").write_text(out["trace_csv"])
    (tmp_path / "summary.csv").write_text(out["summary_csv"])
    lines = out["sweep_csv"].splitlines()
    fields = lines[1].split(",")
    fields[5] = repr(float(fields[5]) + 1e-6)
    lines[1] = ",".join(fields)
    (tmp_path / "sweep.csv").write_text("\n".join(lines) + "\n")
    result = subprocess.run([sys.executable, str(ROOT / "tools" / "check_summary.py"), str(tmp_path)],
                            capture_output=True, text=True)
    assert result.returncode == 1
