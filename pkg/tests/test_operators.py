"""
Tests for 2x2 operator algebra, POM validation and the optimality certificate
"""

import math

import numpy as np
import pytest

from src.config import Config
from src.errors import DomainError, PovmError
from src.measurement.ensemble import MINUS, PLUS, QubitStateVector, make_ensemble
from src.measurement.operators import (
    Operator2,
    Povm,
    check_helstrom,
    completeness_defect,
    conditional_probabilities,
    density_matrix,
    error_probability,
    lagrange_operator,
    min_eigenvalue,
    mirror_covariance_defect,
    outcome_prob,
    projector,
    success_probability,
)
from src.measurement.strategy import (
    guessing_povm,
    optimal_povm,
    three_element_povm,
    two_element_povm,
)


# ===== Operator2 =====

def test_min_eigenvalue_matches_numpy():
    rng = np.random.default_rng(7)
    entries = rng.uniform(-1.0, 1.0, size=(10_000, 3))
    for a11, a12, a22 in entries:
        expected = np.linalg.eigvalsh(np.array([[a11, a12], [a12, a22]]))[0]
        assert min_eigenvalue(Operator2(a11, a12, a22)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "operator,expected",
    [
        (Operator2(2.0, 0.0, 3.0), 2.0),
        (Operator2(1.0, 1.0, 1.0), 0.0),
        (Operator2(0.0, 1.0, 0.0), -1.0),
        (Operator2.identity(), 1.0),
    ],
)
def test_min_eigenvalue_examples(operator, expected):
    assert min_eigenvalue(operator) == pytest.approx(expected, abs=1e-15)


def test_psd_agrees_with_trace_and_determinant():
    rng = np.random.default_rng(11)
    for a11, a12, a22 in rng.uniform(-1.0, 1.0, size=(2_000, 3)):
        o = Operator2(a11, a12, a22)
        by_invariants = o.trace >= 0.0 and o.determinant >= 0.0
        assert o.is_psd() == by_invariants


def test_algebra():
    a = Operator2(1.0, 2.0, 3.0)
    b = Operator2(0.5, -1.0, 0.25)
    assert a + b == Operator2(1.5, 1.0, 3.25)
    assert a - b == Operator2(0.5, 3.0, 2.75)
    assert 2.0 * a == a * 2.0 == Operator2(2.0, 4.0, 6.0)
    np.testing.assert_allclose(a @ b, a.to_array() @ b.to_array())
    assert a.reflected() == Operator2(1.0, -2.0, 3.0)


def test_from_array_symmetrizes():
    o = Operator2.from_array(np.array([[1.0, 0.2], [0.4, 2.0]]))
    assert (o.a11, o.a22) == (1.0, 2.0)
    assert o.a12 == pytest.approx(0.3)
    with pytest.raises(PovmError):
        Operator2.from_array(np.eye(3))


def test_projector():
    v = QubitStateVector(math.cos(0.3), math.sin(0.3))
    p = projector(v, 0.5)
    assert p.trace == pytest.approx(0.5)
    assert p.determinant == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        projector(v, -0.1)


def test_density_matrix_is_diagonal(example):
    rho = density_matrix(example)
    s2 = math.sin(example.theta) ** 2
    assert rho.a11 == pytest.approx(1.0 - 2.0 * example.p * s2, abs=1e-15)
    assert rho.a12 == pytest.approx(0.0, abs=1e-15)
    assert rho.a22 == pytest.approx(2.0 * example.p * s2, abs=1e-15)


# ===== Povm =====

def test_povm_rejects_incomplete():
    with pytest.raises(PovmError):
        Povm((projector(PLUS), Operator2.zero(), Operator2.zero()))


@pytest.mark.parametrize("excess", [1e-10, 5e-10])
def test_povm_rejects_small_completeness_defect(excess):
    with pytest.raises(PovmError):
        Povm((projector(PLUS), Operator2(0.0, 0.0, 1.0 + excess), Operator2.zero()))


def test_povm_completeness_follows_state_tol(monkeypatch):
    nearly = (projector(PLUS), Operator2(0.0, 0.0, 1.0 + 1e-10), Operator2.zero())
    monkeypatch.setattr(Config, "STATE_TOL", 1e-9)
    assert completeness_defect(Povm(nearly)) == pytest.approx(1e-10)


def test_povm_rejects_negative_element():
    with pytest.raises(PovmError):
        Povm((Operator2(1.5, 0.0, 1.0), Operator2(-0.5, 0.0, 0.0), Operator2.zero()))


@pytest.mark.parametrize("count", [1, 4])
def test_povm_rejects_element_count(count):
    elements = [Operator2.identity()] + [Operator2.zero()] * (count - 1)
    with pytest.raises(PovmError):
        Povm(tuple(elements))


def test_two_element_povm_padded():
    m = Povm((projector(PLUS), projector(MINUS)))
    assert len(m) == 2
    assert m.padded()[2] == Operator2.zero()
    assert len(m.to_rows()) == 3


def test_completeness_and_mirror_covariance():
    m = three_element_povm(0.3)
    assert completeness_defect(m) <= 1e-15
    assert mirror_covariance_defect(m) <= 1e-15

    v = QubitStateVector(math.cos(0.2), math.sin(0.2))
    w = QubitStateVector(-math.sin(0.2), math.cos(0.2))
    skewed = Povm((projector(v), projector(w), Operator2.zero()))
    assert mirror_covariance_defect(skewed) > 0.1


# ===== Probabilities =====

def test_orthogonal_states_identified_perfectly(orthogonal):
    assert success_probability(orthogonal, two_element_povm()) == pytest.approx(1.0, abs=1e-15)
    assert error_probability(orthogonal, two_element_povm()) == pytest.approx(0.0, abs=1e-15)


def test_conditional_rows_sum_to_one(example):
    table = conditional_probabilities(example, three_element_povm(0.4))
    assert len(table) == 3
    for row in table:
        assert sum(row) == pytest.approx(1.0, abs=1e-12)


def test_outcome_prob_clamped():
    assert outcome_prob(Operator2(1.0 + 1e-14, 0.0, 0.0), PLUS) == 1.0


def test_guessing_strategy_success(example):
    assert success_probability(example, guessing_povm()) == pytest.approx(1.0 - 2.0 * example.p)


def test_lagrange_operator_trace_is_success(example):
    m = three_element_povm(0.25)
    gamma = lagrange_operator(example, m)
    assert gamma.trace == pytest.approx(success_probability(example, m), abs=1e-14)


# ===== Certificate =====

def test_certificate_passes_for_trine(trine):
    report = check_helstrom(trine, optimal_povm(trine).povm)
    assert report.passed
    assert len(report.equality_residuals) == 6
    assert report.max_residual <= 1e-12
    assert report.worst_eigenvalue >= -1e-12


def test_certificate_passes_at_example(example):
    assert check_helstrom(example, optimal_povm(example).povm).passed


def test_inequality_operators_touch_zero_for_three_element(example):
    gamma = lagrange_operator(example, optimal_povm(example).povm)
    slack = [
        gamma - projector(state, prior) for prior, state in zip(example.priors, example.states)
    ]
    assert abs(slack[0].determinant) <= 1e-10
    assert abs(slack[1].determinant) <= 1e-10
    assert min_eigenvalue(slack[2]) == pytest.approx(0.0, abs=1e-10)


def test_two_element_fails_on_third_state(example):
    report = check_helstrom(example, two_element_povm())
    assert not report.passed
    assert report.min_eigenvalues[2] < -0.1
    assert report.min_eigenvalues[0] >= -1e-12
    assert report.min_eigenvalues[1] >= -1e-12


@pytest.mark.parametrize("povm", [two_element_povm(), guessing_povm(), three_element_povm(0.9)])
def test_certificate_fails_for_suboptimal(example, povm):
    report = check_helstrom(example, povm)
    assert not report.passed
    assert report.to_dict()["passed"] is False


def test_certificate_respects_tolerance(example):
    m = three_element_povm(0.16)
    assert not check_helstrom(example, m, tol=1e-10).passed
    assert check_helstrom(example, m, tol=1e-1).passed


def test_certificate_tolerates_two_element_input():
    e = make_ensemble(math.pi / 4, 0.5)
    m = Povm((projector(e.states[0]), projector(e.states[1])))
    assert check_helstrom(e, m).passed
