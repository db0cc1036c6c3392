"""Uncertainty propagation through mapping models, sample tables, and
finite-difference sensitivity estimation."""

from __future__ import annotations

import io
import math

import numpy as np
import pytest

from axdesign import (
    BlackBoxModel,
    Coupled,
    DesignMatrix,
    LinearModel,
    Normal,
    RngState,
    SampleSet,
    ScenarioModel,
    TankConfig,
    Uncoupled,
    Uniform,
    classify,
    estimate_design_matrix,
    from_samples,
    propagate,
)


# ---------------------------------------------------------------------------
# SampleSet container


def test_sample_set_validates_shape_and_names():
    values = np.zeros((3, 2))
    ss = SampleSet(columns=("a", "b"), values=values)
    assert ss.n == 3
    assert ss.column("b").shape == (3,)
    with pytest.raises(ValueError):
        SampleSet(columns=("a",), values=values)  # name/width mismatch
    with pytest.raises(ValueError):
        SampleSet(columns=("a", "a"), values=values)  # duplicate names
    with pytest.raises(ValueError):
        SampleSet(columns=("a", "b"), values=np.array([[1.0, math.nan]]))
    with pytest.raises(KeyError):
        ss.column("missing")


def test_sample_set_values_are_read_only():
    ss = SampleSet(columns=("a",), values=np.ones((2, 1)))
    with pytest.raises(ValueError):
        ss.values[0, 0] = 5.0


def test_sample_set_csv_round_trip():
    values = np.array([[1.0, 0.1], [2.5, -0.25], [1.0 / 3.0, 1e-17]])
    ss = SampleSet(columns=("level", "temp"), values=values)
    text = ss.csv_text()
    lines = text.strip().split("\n")
    assert lines[0] == "level,temp"
    assert len(lines) == 4
    parsed = np.array([[float(tok) for tok in line.split(",")]
                       for line in lines[1:]])
    # repr() of a float round-trips exactly.
    assert np.array_equal(parsed, values)


def test_sample_set_to_csv_accepts_file_objects():
    ss = SampleSet(columns=("x",), values=np.array([[0.5]]))
    buf = io.StringIO()
    ss.to_csv(buf)
    assert buf.getvalue() == ss.csv_text()


# ---------------------------------------------------------------------------
# LinearModel


def test_linear_model_point_masses_propagate_exactly():
    model = LinearModel(np.eye(3), [from_samples([7.0]), from_samples([65.0]),
                                    from_samples([120.0])])
    table = propagate(model, RngState(seed=1), 5,
                      columns=("level", "temperature", "mix_duration"))
    assert table.columns == ("level", "temperature", "mix_duration")
    assert np.array_equal(table.values,
                          np.tile([7.0, 65.0, 120.0], (5, 1)))


def test_linear_model_scales_and_mixes_inputs():
    model = LinearModel([[2.0]], [Uniform(0.0, 1.0)])
    n = 20_000
    table = propagate(model, RngState(seed=4), n)
    assert table.columns == ("fr1",)
    mean = float(table.values.mean())
    # FR = 2*U(0,1) has mean 1 and sd 2/sqrt(12).
    assert abs(mean - 1.0) < 3.0 * (2.0 / math.sqrt(12.0)) / math.sqrt(n)


def test_linear_model_adds_output_noise():
    model = LinearModel([[0.0]], [from_samples([1.0])],
                        noise_pdfs=[Normal(5.0, 0.25)])
    draws = model.sample_frs(RngState(seed=8), 50_000)
    assert abs(float(draws.mean()) - 5.0) < 3.0 * 0.25 / math.sqrt(50_000)
    assert abs(float(draws.std(ddof=1)) - 0.25) < 0.01


def test_linear_model_noise_entries_may_be_missing():
    model = LinearModel(np.eye(2), [from_samples([1.0]), from_samples([2.0])],
                        noise_pdfs=[None, Normal(0.0, 1.0)])
    draws = model.sample_frs(RngState(seed=0), 100)
    assert np.all(draws[:, 0] == 1.0)  # no noise on the first output
    assert np.std(draws[:, 1]) > 0.0


def test_linear_model_validates_dimensions():
    with pytest.raises(ValueError):
        LinearModel(np.eye(2), [Uniform(0.0, 1.0)])  # one pdf, two DPs
    with pytest.raises(ValueError):
        LinearModel(np.eye(2), [Uniform(0.0, 1.0), Uniform(0.0, 1.0)],
                    noise_pdfs=[Normal(0.0, 1.0)])  # one noise, two FRs


def test_linear_model_dp_streams_are_independent():
    model = LinearModel(np.eye(2), [Uniform(0.0, 1.0), Uniform(0.0, 1.0)])
    dps = model.sample_dps(RngState(seed=21), 4000)
    corr = float(np.corrcoef(dps[:, 0], dps[:, 1])[0, 1])
    assert abs(corr) < 0.05
    assert not np.array_equal(dps[:, 0], dps[:, 1])


def test_same_seed_same_table():
    model = LinearModel([[1.0, 0.5]], [Uniform(0.0, 1.0), Normal(0.0, 1.0)])
    a = propagate(model, RngState(seed=33), 256)
    b = propagate(model, RngState(seed=33), 256)
    assert np.array_equal(a.values, b.values)
    c = propagate(model, RngState(seed=34), 256)
    assert not np.array_equal(a.values, c.values)


# ---------------------------------------------------------------------------
# BlackBoxModel


def test_black_box_wraps_arbitrary_callables():
    model = BlackBoxModel(lambda d: np.array([d[0] + d[1], d[0] * d[1]]),
                          dp_pdfs=[from_samples([2.0]), from_samples([3.0])])
    out = model.evaluate([2.0, 3.0])
    assert out.tolist() == [5.0, 6.0]
    table = model.sample_frs(RngState(seed=0), 4)
    assert table.shape == (4, 2)
    assert np.all(table == [5.0, 6.0])


def test_black_box_reports_failing_trial_index():
    def flaky(dps):
        flaky.calls += 1
        if flaky.calls == 3:
            raise ZeroDivisionError("boom")
        return np.array([1.0])

    flaky.calls = 0
    model = BlackBoxModel(flaky, dp_pdfs=[Uniform(0.0, 1.0)])
    with pytest.raises(RuntimeError, match="trial 2"):
        model.sample_frs(RngState(seed=0), 10)


def test_black_box_rejects_non_vector_outputs():
    model = BlackBoxModel(lambda d: np.zeros((2, 2)))
    with pytest.raises(ValueError):
        model.evaluate([0.0])


def test_black_box_sampling_requires_dp_pdfs():
    model = BlackBoxModel(lambda d: np.asarray(d))
    with pytest.raises(ValueError):
        model.sample_frs(RngState(seed=0), 3)


# ---------------------------------------------------------------------------
# Finite-difference sensitivity


def test_estimated_matrix_is_exact_for_linear_maps():
    true = np.array([[2.0, -1.0, 0.0], [0.5, 3.0, 1.5]])
    model = BlackBoxModel(lambda d: true @ np.asarray(d, dtype=np.float64))
    for step in (1e-1, 1e-3, 1e-6):
        est = estimate_design_matrix(model, [1.0, 2.0, 3.0], step=step)
        assert isinstance(est, DesignMatrix)
        # Central differences are exact on linear functions at any step.
        assert np.allclose(est.entries, true, atol=1e-8)


def test_estimated_slope_of_square_at_three_is_six():
    model = BlackBoxModel(lambda d: np.array([d[0] ** 2]))
    est = estimate_design_matrix(model, [3.0], step=1e-4)
    assert est.entries[0, 0] == pytest.approx(6.0, abs=1e-6)


def test_estimation_validates_step_and_outputs():
    model = BlackBoxModel(lambda d: np.array([d[0]]))
    with pytest.raises(ValueError):
        estimate_design_matrix(model, [1.0], step=0.0)
    bad = BlackBoxModel(lambda d: np.array([math.nan]))
    with pytest.raises(ValueError, match="DP 0"):
        estimate_design_matrix(bad, [1.0], step=1e-3)


def test_probing_a_simulator_recovers_its_coupling_structure():
    # With no cross-channel gains the startup map moves each output with
    # exactly one input; adding both gains makes the pattern circulatory.
    plain = ScenarioModel(TankConfig())
    est = estimate_design_matrix(plain, [7.0, 65.0, 120.0], step=1e-3)
    assert isinstance(classify(est, epsilon=1e-9), Uncoupled)

    tangled = ScenarioModel(TankConfig(mixer_to_temp=0.1, heater_to_level=0.05))
    est2 = estimate_design_matrix(tangled, [7.0, 65.0, 120.0], step=1e-3)
    assert isinstance(classify(est2, epsilon=1e-9), Coupled)


# ---------------------------------------------------------------------------
# propagate() plumbing


def test_propagate_uses_model_column_names_when_present():
    table = propagate(ScenarioModel(TankConfig(cycles=3)), RngState(seed=0), 3)
    assert table.columns == ("level", "temperature", "mix_duration")


def test_propagate_rejects_bad_column_overrides():
    model = LinearModel([[1.0]], [Uniform(0.0, 1.0)])
    with pytest.raises(ValueError):
        propagate(model, RngState(seed=0), 4, columns=("a", "b"))


def test_propagate_requires_positive_sample_count():
    model = LinearModel([[1.0]], [Uniform(0.0, 1.0)])
    with pytest.raises(ValueError):
        propagate(model, RngState(seed=0), 0)
