"""
Real Symmetric 2x2 Operator Algebra
POM validity, outcome probabilities and the minimum-error optimality certificate
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from itertools import permutations
from typing import List, Optional, Tuple

import numpy as np

from src.config import Config
from src.errors import DomainError, PovmError
from src.measurement.ensemble import MirrorEnsemble, QubitStateVector

logger = logging.getLogger("mirror_povm.operators")


@dataclass(frozen=True)
class Operator2:
    """Real symmetric 2x2 operator [[a11, a12], [a12, a22]]"""

    a11: float
    a12: float
    a22: float

    # ===== Constructors =====

    @classmethod
    def identity(cls) -> Operator2:
        return cls(1.0, 0.0, 1.0)

    @classmethod
    def zero(cls) -> Operator2:
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> Operator2:
        """Symmetric part (M + Mᵀ)/2 of a 2x2 array"""
        m = np.asarray(matrix, dtype=float)
        if m.shape != (2, 2):
            raise PovmError(f"Expected a 2x2 matrix, got shape {m.shape}")
        return cls(float(m[0, 0]), float(0.5 * (m[0, 1] + m[1, 0])), float(m[1, 1]))

    # ===== Algebra =====

    def __add__(self, other: Operator2) -> Operator2:
        return Operator2(self.a11 + other.a11, self.a12 + other.a12, self.a22 + other.a22)

    def __sub__(self, other: Operator2) -> Operator2:
        return Operator2(self.a11 - other.a11, self.a12 - other.a12, self.a22 - other.a22)

    def __mul__(self, scalar: float) -> Operator2:
        return Operator2(scalar * self.a11, scalar * self.a12, scalar * self.a22)

    __rmul__ = __mul__

    def __matmul__(self, other: Operator2) -> np.ndarray:
        """Matrix product; generally not symmetric, so returned as a 2x2 array"""
        return self.to_array() @ other.to_array()

    def to_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]], dtype=float)

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def determinant(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a12

    def max_abs(self) -> float:
        return max(abs(self.a11), abs(self.a12), abs(self.a22))

    def reflected(self) -> Operator2:
        """R O R with R = diag(1, -1)"""
        return Operator2(self.a11, -self.a12, self.a22)

    def is_psd(self, tol: float = 0.0) -> bool:
        return min_eigenvalue(self) >= -tol

    def as_rows(self) -> List[List[float]]:
        return [[self.a11, self.a12], [self.a12, self.a22]]


def projector(v: QubitStateVector, weight: float = 1.0) -> Operator2:
    """
    Weighted rank-1 projector weight·|v><v|

    Args:
        v: State vector
        weight: Non-negative weight

    Returns:
        Operator2 with trace weight·‖v‖²

    Raises:
        DomainError: If weight is negative
    """
    if weight < 0.0:
        raise DomainError("weight", weight, "weight >= 0")
    return Operator2(
        weight * v.c_plus * v.c_plus,
        weight * v.c_plus * v.c_minus,
        weight * v.c_minus * v.c_minus,
    )


def min_eigenvalue(o: Operator2) -> float:
    """Smaller root of the characteristic polynomial, in closed form"""
    mean = 0.5 * (o.a11 + o.a22)
    radius = math.hypot(0.5 * (o.a11 - o.a22), o.a12)
    return mean - radius


def density_matrix(e: MirrorEnsemble) -> Operator2:
    """ρ = Σ p_i|ψ_i><ψ_i| which is diag(1 - 2p sin²θ, 2p sin²θ) for this family"""
    rho = Operator2.zero()
    for state, prior in zip(e.states, e.priors):
        rho = rho + projector(state, prior)
    return rho


@dataclass(frozen=True)
class Povm:
    """
    Ordered POM elements summing to the identity

    Two-element measurements are accepted and read as three elements with an
    explicit zero third element (see padded()).
    """

    elements: Tuple[Operator2, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) not in (2, 3):
            raise PovmError(
                f"A POM for three signal states needs 2 or 3 elements, got {len(self.elements)}"
            )
        tol = Config.STATE_TOL
        defect = completeness_defect(self)
        if defect > tol:
            raise PovmError(f"POM elements do not sum to the identity (defect {defect:.3e})")
        for index, element in enumerate(self.elements):
            lowest = min_eigenvalue(element)
            if lowest < -tol:
                raise PovmError(
                    f"POM element {index + 1} is not positive semidefinite "
                    f"(smallest eigenvalue {lowest:.3e})"
                )

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, index: int) -> Operator2:
        return self.elements[index]

    def padded(self) -> Tuple[Operator2, Operator2, Operator2]:
        if len(self.elements) == 3:
            return self.elements
        return (self.elements[0], self.elements[1], Operator2.zero())

    def to_rows(self) -> List[List[List[float]]]:
        return [element.as_rows() for element in self.padded()]


def completeness_defect(m: Povm) -> float:
    """Largest absolute entry of Σπ_j - I"""
    total = Operator2.zero()
    for element in m.elements:
        total = total + element
    return (total - Operator2.identity()).max_abs()


def mirror_covariance_defect(m: Povm) -> float:
    """Largest entry of |Rπ1R - π2| and |Rπ3R - π3|"""
    pi1, pi2, pi3 = m.padded()
    return max((pi1.reflected() - pi2).max_abs(), (pi3.reflected() - pi3).max_abs())


def outcome_prob(element: Operator2, state: QubitStateVector) -> float:
    """Born probability <ψ|π|ψ>, clamped to [0, 1]"""
    c_p, c_m = state.c_plus, state.c_minus
    value = element.a11 * c_p * c_p + 2.0 * element.a12 * c_p * c_m + element.a22 * c_m * c_m
    return min(1.0, max(0.0, value))


def _checked_elements(e: MirrorEnsemble, m: Povm) -> Tuple[Operator2, Operator2, Operator2]:
    if len(m) not in (2, 3):
        raise PovmError(f"Element-count mismatch: {len(m)} elements for {len(e.states)} states")
    return m.padded()


def success_probability(e: MirrorEnsemble, m: Povm) -> float:
    """
    Probability of naming the right state, Σ_j p_j <ψ_j|π_j|ψ_j>

    Args:
        e: Signal ensemble
        m: Measurement whose j-th element names state j

    Returns:
        Success probability in [0, 1]

    Raises:
        PovmError: If the element count does not match the three states
    """
    elements = _checked_elements(e, m)
    total = sum(
        prior * outcome_prob(element, state)
        for prior, element, state in zip(e.priors, elements, e.states)
    )
    return min(1.0, max(0.0, total))


def error_probability(e: MirrorEnsemble, m: Povm) -> float:
    """1 - success_probability"""
    return 1.0 - success_probability(e, m)


def conditional_probabilities(e: MirrorEnsemble, m: Povm) -> List[List[float]]:
    """Table p(j|i): row i is the outcome distribution for signal state i"""
    elements = _checked_elements(e, m)
    return [[outcome_prob(element, state) for element in elements] for state in e.states]


@dataclass(frozen=True)
class CertificateReport:
    """
    Result of evaluating the minimum-error optimality conditions

    equality_residuals holds (j, k, max|π_j(p_jρ_j - p_kρ_k)π_k|) for j ≠ k,
    1-based; min_eigenvalues holds the smallest eigenvalue of
    Σ_j p_jρ_jπ_j - p_kρ_k for k = 1, 2, 3.
    """

    equality_residuals: Tuple[Tuple[int, int, float], ...]
    min_eigenvalues: Tuple[float, float, float]
    passed: bool
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(residual for _, _, residual in self.equality_residuals)

    @property
    def worst_eigenvalue(self) -> float:
        return min(self.min_eigenvalues)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "worst_eigenvalue": self.worst_eigenvalue,
            "equality_residuals": [
                {"j": j, "k": k, "residual": residual}
                for j, k, residual in self.equality_residuals
            ],
            "min_eigenvalues": list(self.min_eigenvalues),
        }


def lagrange_operator(e: MirrorEnsemble, m: Povm) -> Operator2:
    """Symmetrized Σ_j p_j ρ_j π_j (the dual matrix a candidate POM induces)"""
    elements = _checked_elements(e, m)
    total = np.zeros((2, 2))
    for prior, element, state in zip(e.priors, elements, e.states):
        total += projector(state, prior) @ element
    return Operator2.from_array(total)


def check_helstrom(e: MirrorEnsemble, m: Povm, tol: Optional[float] = None) -> CertificateReport:
    """
    Evaluate the minimum-error conditions for a candidate POM

    Args:
        e: Signal ensemble
        m: Candidate measurement
        tol: Acceptance tolerance (default Config.CERT_TOL)

    Returns:
        CertificateReport carrying every residual and eigenvalue
    """
    tol = Config.CERT_TOL if tol is None else tol
    elements = [element.to_array() for element in _checked_elements(e, m)]
    weighted = [prior * projector(state).to_array() for prior, state in zip(e.priors, e.states)]

    # j == k is vacuous and skipped
    residuals = []
    for j, k in permutations(range(3), 2):
        product = elements[j] @ (weighted[j] - weighted[k]) @ elements[k]
        residuals.append((j + 1, k + 1, float(np.max(np.abs(product)))))

    gamma = lagrange_operator(e, m)
    eigenvalues = tuple(
        min_eigenvalue(gamma - Operator2.from_array(weighted[k])) for k in range(3)
    )

    passed = all(r <= tol for _, _, r in residuals) and all(ev >= -tol for ev in eigenvalues)
    report = CertificateReport(tuple(residuals), eigenvalues, passed, tol)
    if not passed:
        logger.debug(
            f"Certificate failed at theta={e.theta:.6g} p={e.p:.6g}: "
            f"max residual {report.max_residual:.3e}, worst eigenvalue {report.worst_eigenvalue:.3e}"
        )
    return report
