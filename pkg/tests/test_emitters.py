import math

import numpy as np
import pandas as pd
import pytest

from feyncursor.core.cursor_kernel import amplitude, position_variance
from feyncursor.qubit.grover import bloch_trajectory, grover_params, optimal_tau, rotation_model, spectrum
from feyncursor.report.emitters import (
    bloch_frame,
    collapse_frame,
    energy_frame,
    entropy_frame,
    sample_times,
    success_frame,
    summary_frame,
    variance_frame,
    write_csv,
)


@pytest.fixture(scope="module")
def small_model():
    return grover_params(3)


def test_sample_times():
    times = sample_times(258.0, 0.5)
    assert times.size == 517
    assert times[0] == 0.0 and times[-1] == 258.0
    assert sample_times(1.0, 0.3).tolist() == pytest.approx([0.0, 0.3, 0.6, 0.9])


@pytest.mark.parametrize(
    "builder, columns",
    [
        (bloch_frame, ["t", "s1", "s3", "r", "gamma"]),
        (entropy_frame, ["t", "S_nats"]),
        (success_frame, ["t", "p_target", "p_undesired"]),
        (variance_frame, ["t", "varQ"]),
    ],
)
def test_time_series_schemas(small_model, builder, columns):
    times = sample_times(18.0, 0.5)
    frame = builder(small_model, times)
    assert list(frame.columns) == columns
    assert len(frame) == times.size


@pytest.mark.parametrize(
    "builder, columns",
    [
        (collapse_frame, ["x", "P1", "P2"]),
        (energy_frame, ["k", "E_k", "p_pre", "p1", "p2"]),
    ],
)
def test_readout_schemas(small_model, builder, columns):
    frame = builder(small_model, 3.0)
    assert list(frame.columns) == columns
    assert len(frame) == small_model.s
    assert frame.iloc[0, 0] == 1


def test_success_starts_at_prior():
    frame = success_frame(grover_params(2), sample_times(10.0, 0.5))
    assert frame.loc[0, "p_target"] == pytest.approx(0.25, abs=1e-12)


def test_not_gate_in_one_step():
    frame = success_frame(rotation_model(2, 0.0, math.pi), np.array([0.0, math.pi]))
    np.testing.assert_allclose(frame["p_target"], [1.0, 0.0], atol=1e-12)


def test_bloch_frame_polar_form(small_model):
    frame = bloch_frame(small_model, sample_times(18.0, 0.5))
    np.testing.assert_allclose(frame["r"] * np.sin(frame["gamma"]), frame["s1"], atol=1e-12)
    np.testing.assert_allclose(frame["r"] * np.cos(frame["gamma"]), frame["s3"], atol=1e-12)


def test_energy_frame_distributions(small_model):
    frame = energy_frame(small_model, 3.0)
    for column in ("p_pre", "p1", "p2"):
        assert frame[column].sum() == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.diff(frame["E_k"]) > 0)


def test_summary_frame(small_model):
    search = optimal_tau(small_model)
    frame = summary_frame(small_model, search.tau, search)
    values = dict(zip(frame["key"], frame["value"]))
    assert values["tau"] == search.tau
    assert values["tau_peak"] == search.tau
    assert values["p_max"] == search.p_max
    assert values["p_outcome1"] + values["p_outcome0"] == pytest.approx(1.0, abs=1e-12)
    assert values["lambda1"] + values["lambda2"] == pytest.approx(1.0, abs=1e-12)
    assert abs(values["mean_energy_pre"]) < 1e-8
    assert "p_max" not in set(summary_frame(small_model, search.tau)["key"])


def test_summary_at_aligned_instant():
    model = grover_params(5)
    search = optimal_tau(model)
    frame = summary_frame(model, search.tau_aligned, search)
    keys = list(frame["key"])
    assert keys[:7] == ["tau", "tau_peak", "p_max", "tau_aligned", "p_aligned",
                        "first_local_is_global", "lambda1"]
    values = dict(zip(frame["key"], frame["value"]))
    assert values["tau"] == values["tau_aligned"] == search.tau_aligned
    assert values["p_aligned"] == pytest.approx(0.85762295209386563, abs=1e-8)
    assert abs(values["gamma"]) < 1e-11
    assert abs(values["p_outcome1"] - values["lambda1"]) < 1e-10
    assert abs(values["p_outcome0"] - values["lambda2"]) < 1e-10


def test_variance_frame_matches_kernel(small_model):
    times = sample_times(18.0, 0.5)
    frame = variance_frame(small_model, times)
    expected = [position_variance(amplitude(spectrum(small_model), t)) for t in times]
    np.testing.assert_allclose(frame["varQ"], expected, rtol=1e-12, atol=1e-12)
    assert frame.loc[0, "varQ"] == pytest.approx(0.0, abs=1e-14)


def test_bloch_frame_gamma_matches_vector(small_model):
    times = sample_times(18.0, 0.5)
    frame = bloch_frame(small_model, times)
    expected = [b.gamma for b in bloch_trajectory(small_model, times)]
    np.testing.assert_allclose(frame["gamma"], expected, atol=1e-15)


def test_summary_with_absent_outcome():
    frame = summary_frame(rotation_model(5, 0.0, 0.0), 2.0)
    values = dict(zip(frame["key"], frame["value"]))
    assert values["p_outcome1"] == pytest.approx(1.0)
    assert values["mean_energy_0"] == 0.0
    assert values["tv_distance_0"] == pytest.approx(0.5)


def test_write_csv_format(tmp_path, small_model):
    path = write_csv(entropy_frame(small_model, sample_times(4.0, 0.5)), tmp_path / "entropy.csv")
    raw = path.read_bytes()
    assert raw.startswith(b"t,S_nats\n")
    assert raw.endswith(b"\n")
    assert b"\r" not in raw
    back = pd.read_csv(path)
    assert len(back) == 9

    again = write_csv(entropy_frame(small_model, sample_times(4.0, 0.5)), tmp_path / "again.csv")
    assert again.read_bytes() == raw
