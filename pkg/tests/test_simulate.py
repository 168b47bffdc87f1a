import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from focdigital.controller import FocParams, design_foc
from focdigital.discretize import GeneratingFunction
from focdigital.errors import (DivergenceDetected, InvalidParams, LengthMismatch,
                               NyquistViolation)
from focdigital.ratpoly import Polynomial, RationalTF, rtf_eval
from focdigital.simulate import (Plant, SignalSpec, SimResult, fit_sinusoid, generate_signal,
                                 gl_reference, metrics, run_closed_loop, run_open_loop)

AA = GeneratingFunction("al-alaoui", 0.001)
EQ4_FOC = design_foc(FocParams(Ti=1.4374, lam=0.5, gf=AA))
UNITY = design_foc(FocParams(K=1.0, gf=AA))


def test_square_wave_period():
    x = generate_signal(SignalSpec("square", 1.0, 100.0, 0.1, 0.001))
    assert len(x) == 100
    np.testing.assert_array_equal(x[:10], [1] * 5 + [-1] * 5)
    np.testing.assert_array_equal(x, np.tile(x[:10], 10))


def test_sine_and_step():
    x = generate_signal(SignalSpec("sine", 1.0, 100.0, 0.1, 0.001))
    assert x[0] == 0.0
    assert x[5] == pytest.approx(0.0, abs=1e-12)
    assert x.max() == pytest.approx(np.sin(2 * np.pi * 0.2))
    np.testing.assert_array_equal(generate_signal(SignalSpec("step", 1.0, duration=0.05)), np.ones(50))


def test_signal_validation():
    with pytest.raises(NyquistViolation):
        SignalSpec("sine", 1.0, 600.0, 0.1, 0.001)
    with pytest.raises(NyquistViolation):
        SignalSpec("square", 1.0, 500.0, 0.1, 0.001)
    with pytest.raises(InvalidParams):
        SignalSpec("step", duration=1e-4, T=1e-3)
    with pytest.raises(InvalidParams):
        SignalSpec("triangle")
    custom = SignalSpec("custom", samples=(1.0, 2.0))
    np.testing.assert_array_equal(generate_signal(custom), [1, 2])


def test_open_loop_zero_signal():
    res = run_open_loop(EQ4_FOC, np.zeros(50))
    assert np.all(res["out"] == 0)
    assert set(res.columns) == {"t", "ref", "err", "out"}


def test_time_column_exact():
    res = run_open_loop(EQ4_FOC, np.ones(37))
    np.testing.assert_array_equal(res["t"], np.arange(37) * 0.001)


def test_open_loop_step_final_value():
    y = run_open_loop(EQ4_FOC, np.ones(20000))["out"]
    dc = rtf_eval(EQ4_FOC.branches[0].tf, 1.0).real
    assert y[-1] == pytest.approx(dc, rel=1e-6)
    assert y[-1] == pytest.approx(0.29485, rel=0.01)
    # early response grows like sqrt(t)
    assert y[20] / y[5] == pytest.approx(math.sqrt(20 / 5), rel=0.1)


def test_open_loop_sine_amplitude():
    x = generate_signal(SignalSpec("sine", 1.0, 100.0, 1.0, 0.001))
    y = run_open_loop(EQ4_FOC, x)["out"]
    amp, _, _ = fit_sinusoid(y, 100.0, 0.001, 200, 1001)
    ideal = 1.4374 / math.sqrt(2 * math.pi * 100)
    assert ideal == pytest.approx(0.0573, abs=1e-4)
    assert amp == pytest.approx(ideal, rel=0.10)


def test_fit_sinusoid_recovers_known_phase():
    k = np.arange(1000)
    y = 0.7 * np.sin(2 * np.pi * 0.1 * k - np.radians(30)) + 0.2
    amp, phase, off = fit_sinusoid(y, 100.0, 0.001)
    assert (amp, phase, off) == pytest.approx((0.7, -30.0, 0.2), abs=1e-9)


def test_closed_loop_unity_alternates():
    res = run_closed_loop(UNITY, Plant(RationalTF.constant(1.0)), np.ones(8))
    np.testing.assert_array_equal(res["y"], [1, 0, 1, 0, 1, 0, 1, 0])
    assert list(res.columns) == ["t", "ref", "err", "out", "y"]
    assert "one-sample delay" in res.metadata["feedback"]


def test_closed_loop_zero_reference():
    res = run_closed_loop(EQ4_FOC, Plant(RationalTF.constant(1.0)), np.zeros(100))
    for col in ("err", "out", "y"):
        assert np.all(res[col] == 0)


def test_closed_loop_eq4_bounded():
    res = run_closed_loop(EQ4_FOC, Plant(RationalTF.constant(1.0)), np.ones(5000))
    assert np.all(np.isfinite(res["y"]))
    assert np.max(np.abs(res["y"])) < 2.0


def test_closed_loop_divergence():
    big = design_foc(FocParams(K=-3.0, gf=AA))
    with pytest.raises(DivergenceDetected):
        run_closed_loop(big, Plant(RationalTF.constant(1.0)), np.ones(100))


def test_unstable_plant_rejected():
    with pytest.raises(InvalidParams):
        Plant(RationalTF(Polynomial((1.0,)), Polynomial((1.0, -1.0))))


def test_metrics_examples():
    assert metrics([1, 2, 3], [1, 2, 3], 0) == (0.0, 0.0, 0.0)
    m = metrics([0, 0], [3, 4], 0)
    assert m.max_abs == 4
    assert m.rms_abs == pytest.approx(math.sqrt(25 / 2))
    assert m.rms_abs == pytest.approx(3.5355, abs=1e-4)
    m = metrics([1, 2, 3], [0, 0, 5], 2)
    assert m == pytest.approx((2.0, 2 / 3, 2.0))
    with pytest.raises(LengthMismatch):
        metrics([1, 2], [1, 2, 3])
    with pytest.raises(InvalidParams):
        metrics([1, 2], [1, 2], 2)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30), st.integers(0, 2**32 - 1))
def test_metrics_max_abs_symmetric(a, seed):
    b = np.random.default_rng(seed).normal(size=len(a)) * 10
    assert metrics(a, b, 0).max_abs == metrics(b, a, 0).max_abs


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 10), st.integers(0, 2**32 - 1))
def test_open_loop_linearity(scale, seed):
    foc = design_foc(FocParams(K=0.4, Ti=1.0, lam=0.6, Td=0.1, delta=0.3, gf=AA))
    x = np.random.default_rng(seed).normal(size=200)
    y1 = run_open_loop(foc, x)["out"]
    y2 = run_open_loop(foc, 2 * x)["out"]
    np.testing.assert_allclose(y2, 2 * y1, rtol=0, atol=1e-12 * max(1, np.max(np.abs(y2))))


def test_gl_agreement_on_sine():
    x = generate_signal(SignalSpec("sine", 1.0, 100.0, 1.001, 0.001))
    y = run_open_loop(EQ4_FOC, x)["out"]
    ref = gl_reference(EQ4_FOC, x)
    assert metrics(ref[:1001], y[:1001], 100).rms_rel < 0.10


def test_csv_round_trip():
    res = run_open_loop(EQ4_FOC, generate_signal(SignalSpec("square", duration=0.1)))
    text = res.to_csv()
    assert text.splitlines()[0] == "t,ref,err,out"
    assert len(text.splitlines()) == 101
    back = SimResult.from_csv(text, T=0.001)
    for k in res.columns:
        np.testing.assert_array_equal(back[k], res[k])
    plot = res.to_csv(plot_data=True)
    assert plot.startswith("# ")
    back = SimResult.from_csv(plot)
    assert back.metadata["param.Ti"] == "1.4374"
    assert back.T == 0.001


def test_simresult_length_check():
    with pytest.raises(LengthMismatch):
        SimResult(1.0, {"t": np.zeros(3), "out": np.zeros(4)})
