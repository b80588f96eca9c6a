import math

import pytest

from feyncursor.report.validation import CheckResult, ValidationSettings, run_checks


@pytest.fixture(scope="module")
def default_results():
    return run_checks(ValidationSettings())


def test_default_suite_passes(default_results):
    failures = [r for r in default_results if not r.passed]
    assert not failures, [(r.name, r.max_error, r.detail) for r in failures]


def test_suite_covers_every_invariant(default_results):
    names = {r.name for r in default_results}
    assert {
        "amplitude_ode",
        "amplitude_norm",
        "ode_norm_drift",
        "machine_oracle",
        "energy_conservation",
        "entropy_symmetry",
        "bloch_consistency",
        "entropy_closed_form",
        "schmidt_reconstruction",
        "grover_factorization",
        "energy_eigen_residual",
        "energy_completeness",
        "outcome_eigenvalues",
        "mixture_identity",
        "outcome_normalization",
        "pre_measurement_energy",
        "energy_time_invariance",
    } <= names


def test_coarse_step_fails_ode_check():
    results = run_checks(ValidationSettings(mu=3, ode_dt=0.5, n_programs=1, n_entropy_samples=10))
    failed = {r.name for r in results if not r.passed}
    assert "amplitude_ode" in failed
    assert "grover_factorization" not in failed


def test_check_result_pass_rule():
    assert CheckResult("x", 1e-9, 1e-8).passed
    assert not CheckResult("x", 1e-7, 1e-8).passed
    assert not CheckResult("x", math.inf, 0.0).passed
    assert not CheckResult("x", math.nan, 1.0).passed
