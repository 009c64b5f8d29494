"""
Tests for regime classification, the closed-form strategies and the SRM comparator
"""

import logging
import math

import numpy as np
import pytest

from src.errors import DegenerateEnsembleError, DomainError, OutOfRegimeError
from src.measurement.ensemble import make_ensemble
from src.measurement.operators import (
    check_helstrom,
    completeness_defect,
    mirror_covariance_defect,
    success_probability,
)
from src.measurement.strategy import (
    RegimeTag,
    ansatz_parameter,
    boundary_p,
    classify_regime,
    guessing_povm,
    helstrom_pair_success,
    optimal_povm,
    optimal_success,
    raw_ansatz_parameter,
    square_root_measurement,
    srm_gap_scan,
    srm_povm,
    srm_success,
    three_element_povm,
    three_element_success,
    two_element_success,
)
from tests.conftest import EXAMPLE_A, EXAMPLE_SUCCESS, full_grid, near_corner


# ===== Regime =====

@pytest.mark.parametrize(
    "theta,expected",
    [(0.0, 1 / 3), (math.pi / 4, 1 / 3), (math.pi / 2, 1 / 2)],
)
def test_boundary_p(theta, expected):
    assert boundary_p(theta) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "theta,p,tag",
    [
        (math.pi / 3, 0.2, RegimeTag.THREE_ELEMENT),
        (math.pi / 3, 0.45, RegimeTag.TWO_ELEMENT),
        (math.pi / 4, 1 / 3, RegimeTag.BOUNDARY),
        (math.pi / 2, 0.5, RegimeTag.BOUNDARY),
        (0.0, 0.5, RegimeTag.TWO_ELEMENT),
    ],
)
def test_classify_regime(theta, p, tag):
    assert classify_regime(make_ensemble(theta, p)).tag is tag


def test_regime_tag_values():
    assert [tag.value for tag in RegimeTag] == ["TwoElement", "ThreeElement", "Boundary"]


# ===== Ansatz parameter =====

def test_ansatz_parameter_example(example):
    assert ansatz_parameter(example) == pytest.approx(EXAMPLE_A, abs=1e-6)


def test_ansatz_parameter_trine(trine):
    assert ansatz_parameter(trine) == pytest.approx(1 / math.sqrt(3), abs=1e-12)


def test_ansatz_parameter_is_one_on_boundary():
    assert ansatz_parameter(make_ensemble(math.pi / 4, 1 / 3)) == 1.0


def test_ansatz_parameter_zero_angle():
    assert ansatz_parameter(make_ensemble(0.0, 0.2)) == 0.0


def test_ansatz_parameter_two_element_regime():
    with pytest.raises(OutOfRegimeError):
        ansatz_parameter(make_ensemble(math.pi / 3, 0.45))


def test_ansatz_parameter_degenerate(degenerate):
    with pytest.raises(DegenerateEnsembleError):
        ansatz_parameter(degenerate)


def test_ansatz_parameter_within_unit_interval():
    for theta, p in full_grid(40, 40):
        e = make_ensemble(theta, p)
        if classify_regime(e).tag is RegimeTag.THREE_ELEMENT and not near_corner(theta, p):
            assert 0.0 <= raw_ansatz_parameter(e) <= 1.0 + 1e-12


# ===== Success probabilities =====

def test_trine_success(trine):
    assert optimal_success(trine) == pytest.approx(2 / 3, abs=1e-12)


def test_orthogonal_success(orthogonal):
    assert optimal_success(orthogonal) == pytest.approx(1.0, abs=1e-12)


def test_example_success(example):
    assert optimal_success(example) == pytest.approx(EXAMPLE_SUCCESS, abs=1e-12)


def test_two_element_regime_success():
    e = make_ensemble(math.pi / 3, 0.45)
    assert optimal_success(e) == pytest.approx(0.45 * (1 + math.sin(2 * math.pi / 3)), abs=1e-12)


@pytest.mark.parametrize("theta", np.linspace(math.pi / 4, math.pi / 2, 20))
def test_equal_prior_plateau(theta):
    assert optimal_success(make_ensemble(theta, 1 / 3)) == pytest.approx(2 / 3, abs=1e-12)


def test_boundary_continuity():
    for theta in np.linspace(0.02, math.pi / 2 - 0.02, 50):
        e = make_ensemble(theta, boundary_p(theta))
        assert raw_ansatz_parameter(e) == pytest.approx(1.0, abs=1e-12)
        assert three_element_success(e) == pytest.approx(two_element_success(e), abs=1e-12)


def test_dominates_guessing():
    for theta, p in full_grid(50, 50):
        e = make_ensemble(theta, p)
        assert optimal_success(e) >= max(p, 1.0 - 2.0 * p) - 1e-12


def test_dominates_ansatz_family():
    rng = np.random.default_rng(3)
    for theta, p in full_grid(15, 15):
        e = make_ensemble(theta, p)
        best = optimal_success(e)
        for a in rng.uniform(0.0, 1.0, size=10):
            assert success_probability(e, three_element_povm(a)) <= best + 1e-12


def test_closed_form_matches_pom():
    for theta in np.linspace(0.05, 1.5, 25):
        for p in np.linspace(0.01, 0.49, 25):
            e = make_ensemble(theta, p)
            result = optimal_povm(e)
            assert result.success == pytest.approx(success_probability(e, result.povm), abs=1e-11)


def test_helstrom_pair_success():
    e = make_ensemble(math.pi / 3, 0.45)
    assert helstrom_pair_success(e) == pytest.approx(optimal_success(e), abs=1e-12)
    for theta in np.linspace(0.0, math.pi / 2, 30):
        half = make_ensemble(theta, 0.5)
        assert helstrom_pair_success(half) == pytest.approx(optimal_success(half), abs=1e-12)


# ===== Optimal POM =====

def test_optimal_povm_example(example):
    result = optimal_povm(example)
    assert result.regime.tag is RegimeTag.THREE_ELEMENT
    assert result.a == pytest.approx(EXAMPLE_A, abs=1e-6)
    assert result.network_parameter == result.a
    assert not result.degenerate
    assert result.to_dict()["regime"] == "ThreeElement"


def test_optimal_povm_two_element():
    result = optimal_povm(make_ensemble(math.pi / 3, 0.45))
    assert result.a is None
    assert result.network_parameter == 1.0
    assert result.povm[2].max_abs() == 0.0


def test_optimal_povm_degenerate(degenerate, caplog):
    with caplog.at_level(logging.WARNING, logger="mirror_povm.strategy"):
        result = optimal_povm(degenerate)
    assert result.degenerate
    assert result.a == 0.0
    assert result.povm == guessing_povm()
    assert result.success == pytest.approx(1 / 3, abs=1e-15)
    assert "Degenerate" in caplog.text


def test_optimal_povm_mirror_covariant():
    for theta, p in full_grid(20, 20):
        m = optimal_povm(make_ensemble(theta, p)).povm
        assert completeness_defect(m) <= 1e-12
        assert mirror_covariance_defect(m) <= 1e-12


def test_certificate_grid():
    checked = 0
    for theta, p in full_grid(100, 100):
        if near_corner(theta, p):
            continue
        e = make_ensemble(theta, p)
        report = check_helstrom(e, optimal_povm(e).povm, tol=1e-10)
        assert report.passed, (theta, p, report.to_dict())
        checked += 1
    assert checked >= 9_999


@pytest.mark.parametrize("a", [-0.1, 1.1])
def test_three_element_povm_domain(a):
    with pytest.raises(DomainError):
        three_element_povm(a)


# ===== Square-root measurement =====

def test_srm_optimal_for_trine(trine):
    assert srm_success(trine) == pytest.approx(optimal_success(trine), abs=1e-12)


def test_srm_identifies_orthogonal_states(orthogonal):
    assert srm_success(orthogonal) == pytest.approx(1.0, abs=1e-12)


def test_srm_suboptimal_in_two_element_regime():
    e = make_ensemble(math.pi / 3, 0.45)
    assert optimal_success(e) - srm_success(e) > 1e-3


def test_srm_never_beats_optimum():
    for theta, p in full_grid(30, 30):
        e = make_ensemble(theta, p)
        assert srm_success(e) <= optimal_success(e) + 1e-12


@pytest.mark.parametrize("theta,p", [(0.0, 0.2), (0.7, 0.0)])
def test_srm_singular(theta, p):
    result = square_root_measurement(make_ensemble(theta, p))
    assert result.singular
    assert completeness_defect(result.povm) <= 1e-12


def test_srm_regular(example):
    assert not square_root_measurement(example).singular


def test_srm_povm_is_valid_measurement(example):
    povm = srm_povm(example)
    assert completeness_defect(povm) <= 1e-12
    assert mirror_covariance_defect(povm) <= 1e-12
    assert success_probability(example, povm) == pytest.approx(srm_success(example), abs=1e-12)


def test_srm_gap_scan():
    scan = srm_gap_scan(np.linspace(0.05, math.pi / 2, 20), np.linspace(0.05, 0.5, 20))
    assert scan.points_scanned == 400
    assert scan.max_gap > 1e-3

    trine_scan = srm_gap_scan([math.pi / 3], [1 / 3])
    assert trine_scan.coincidences == [(pytest.approx(math.pi / 3), pytest.approx(1 / 3))]
