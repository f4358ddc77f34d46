import json

import numpy as np
import pytest

from radnls.pipeline import _segments, duhamel_tail, run_high_low_pipeline
from radnls.radial_spectral import RadialGrid, relative_l2_error, sample_function, zeros
from radnls.solver import SolverConfig
from radnls.transforms import free_propagate

CFG = SolverConfig(R=32.0, M=512, dt=1e-2, stride=5)


@pytest.fixture(scope="module")
def report():
    u0 = sample_function(CFG.grid, lambda r: np.exp(-r ** 2 / 2))
    return run_high_low_pipeline(u0, 1e-2, 0.5, 2.0, CFG, increment_check=True)


def test_report_contents(report):
    d = json.loads(report.to_json())
    for key in ("decomposition", "flags", "A", "margin", "duhamel_tail_proxy", "segments",
                "energy_summary", "energy_increment"):
        assert key in d
    assert d["decomposition"]["N0"] == 4.0
    assert isinstance(d["flags"]["bootstrap_held"], bool)
    assert report.A == pytest.approx(report.calE_T0 / report.decomposition.N0)
    assert report.margin == pytest.approx(2 * report.calE_T0 - report.sup_calE)


def test_trace_runs_backward_and_energy_finite(report):
    t = report.U_trace.times
    assert t[0] == 2.0 and t[-1] == pytest.approx(0.5)
    assert np.all(np.isfinite(report.energy.column("calE")))
    assert report.energy.drift("mass") < 1e-10


def test_high_part_is_free_wave(report):
    V = report.V_at(1.3)
    assert relative_l2_error(V, free_propagate(report.decomposition.V_plus, 1.3)) == 0


def test_segments_cover_window():
    segs = _segments(0.25, 8.0)
    assert segs[0] == (4.0, 8.0) and segs[-1][0] == 0.25
    assert all(a[0] == b[1] for a, b in zip(segs, segs[1:]))


def test_zero_data():
    rep = run_high_low_pipeline(zeros(CFG.grid), 1e-2, 0.5, 1.0, CFG)
    assert rep.decomposition.N0 == 2 and rep.sup_calE == 0 and rep.bootstrap_held
    assert rep.duhamel_tail_proxy == 0


def test_tail_decreases_with_T0():
    u = sample_function(CFG.grid, lambda r: np.exp(-r ** 2 / 2))
    assert duhamel_tail(u, 4.0, n=65) < duhamel_tail(u, 1.0, n=65)


def test_window_validation():
    with pytest.raises(ValueError):
        run_high_low_pipeline(zeros(CFG.grid), 1e-2, 2.0, 1.0, CFG)
