"""
Closed-Form Minimum-Error Strategy
Regime classification, ansatz parameter, optimal POMs, success probabilities,
and the square-root ("pretty good") measurement used as a comparator
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from src.config import Config
from src.errors import DegenerateEnsembleError, DomainError, OutOfRegimeError
from src.measurement.ensemble import MirrorEnsemble, make_ensemble
from src.measurement.operators import (
    Operator2,
    Povm,
    density_matrix,
    success_probability,
)

logger = logging.getLogger("mirror_povm.strategy")


class RegimeTag(str, Enum):
    TWO_ELEMENT = "TwoElement"
    THREE_ELEMENT = "ThreeElement"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class Regime:
    """Which strategy is optimal, and where the crossover sits for this θ"""

    tag: RegimeTag
    boundary_p: float


@dataclass(frozen=True)
class StrategyResult:
    """
    Optimal measurement for one ensemble

    a is None in the TwoElement regime. degenerate marks the θ = 0, p = 1/3
    corner where all states coincide and the guessing strategy is returned.
    """

    regime: Regime
    a: Optional[float]
    povm: Povm
    success: float
    degenerate: bool = False

    @property
    def network_parameter(self) -> float:
        """Parameter of the optical network realizing this POM (a = 1 is the two-element strategy)"""
        return 1.0 if self.a is None else self.a

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.tag.value,
            "boundary_p": self.regime.boundary_p,
            "a": self.a,
            "degenerate": self.degenerate,
            "success": self.success,
            "povm": self.povm.to_rows(),
        }


@dataclass(frozen=True)
class SrmResult:
    """Square-root measurement; singular marks a rank-deficient ρ (θ = 0 or p = 0)"""

    povm: Povm
    success: float
    singular: bool


@dataclass(frozen=True)
class SrmGapScan:
    """Where the square-root measurement falls furthest behind, and where it is optimal"""

    max_gap: float
    max_gap_point: Tuple[float, float]
    coincidences: List[Tuple[float, float]] = field(default_factory=list)
    points_scanned: int = 0


# ===== Regime =====

def boundary_p(theta: float) -> float:
    """Crossover prior 1/(2 + cosθ(cosθ + sinθ))"""
    cos_t = math.cos(theta)
    return 1.0 / (2.0 + cos_t * (cos_t + math.sin(theta)))


def classify_regime(e: MirrorEnsemble, tie_tol: Optional[float] = None) -> Regime:
    """
    Decide whether the two- or three-element strategy is optimal

    Args:
        e: Signal ensemble
        tie_tol: Width of the Boundary band around the crossover (default Config.TIE_TOL)

    Returns:
        Regime with its tag and the crossover prior for e.theta
    """
    tie_tol = Config.TIE_TOL if tie_tol is None else tie_tol
    crossover = boundary_p(e.theta)
    if e.p > crossover + tie_tol:
        tag = RegimeTag.TWO_ELEMENT
    elif e.p < crossover - tie_tol:
        tag = RegimeTag.THREE_ELEMENT
    else:
        tag = RegimeTag.BOUNDARY
    return Regime(tag, crossover)


def _ansatz_terms(e: MirrorEnsemble) -> Tuple[float, float]:
    cos_t, sin_t = e.cos_theta, e.sin_theta
    numerator = e.p * cos_t * sin_t
    denominator = 1.0 - e.p * (2.0 + cos_t * cos_t)
    return numerator, denominator


def raw_ansatz_parameter(e: MirrorEnsemble) -> float:
    """p cosθ sinθ / (1 - p(2 + cos²θ)) with no regime checks"""
    numerator, denominator = _ansatz_terms(e)
    return numerator / denominator


def is_degenerate(e: MirrorEnsemble, regime: Regime, tol: Optional[float] = None) -> bool:
    """True at the θ ≈ 0, p ≈ 1/3 corner where the ansatz parameter is 0/0"""
    tol = Config.DEGENERACY_TOL if tol is None else tol
    if regime.tag is RegimeTag.TWO_ELEMENT:
        return False
    numerator, denominator = _ansatz_terms(e)
    # The θ ≈ π/2, p ≈ 1/2 corner is also 0/0 but there a = 1 is well defined
    return numerator <= tol and denominator <= tol and e.sin_theta <= e.cos_theta


def ansatz_parameter(
    e: MirrorEnsemble,
    tie_tol: Optional[float] = None,
    tol: Optional[float] = None,
) -> float:
    """
    Parameter a of the three-element ansatz

    Args:
        e: Signal ensemble
        tie_tol: Boundary band (default Config.TIE_TOL)
        tol: Degeneracy threshold for the 0/0 corner (default Config.DEGENERACY_TOL)

    Returns:
        a in [0, 1]; exactly 1 on the regime boundary

    Raises:
        OutOfRegimeError: In the TwoElement regime
        DegenerateEnsembleError: At θ = 0, p = 1/3
    """
    regime = classify_regime(e, tie_tol)
    if regime.tag is RegimeTag.TWO_ELEMENT:
        raise OutOfRegimeError(
            f"p={e.p:.12g} exceeds the crossover {regime.boundary_p:.12g} at theta={e.theta:.12g}\n"
            "  The two-element strategy is optimal; the ansatz parameter is undefined"
        )
    if is_degenerate(e, regime, tol):
        raise DegenerateEnsembleError(
            f"Ansatz parameter is 0/0 at theta={e.theta:.3g}, p={e.p:.12g}: all states coincide"
        )
    if regime.tag is RegimeTag.BOUNDARY:
        return 1.0
    return min(1.0, max(0.0, raw_ansatz_parameter(e)))


# ===== POM Builders =====

def three_element_povm(a: float) -> Povm:
    """
    Mirror-symmetric ansatz POM

    π1,2 = |φ1,2><φ1,2| with |φ1,2> = (a|+> ± |->)/√2 and π3 = (1 - a²)|+><+|.
    """
    if not 0.0 <= a <= 1.0:
        raise DomainError("a", a, "[0, 1]")
    half_a = 0.5 * a
    return Povm((
        Operator2(half_a * a, half_a, 0.5),
        Operator2(half_a * a, -half_a, 0.5),
        Operator2(1.0 - a * a, 0.0, 0.0),
    ))


def two_element_povm() -> Povm:
    """Projectors onto (|+> ± |->)/√2 with an explicit zero third element"""
    return three_element_povm(1.0)


def guessing_povm() -> Povm:
    """Always name state 3"""
    return Povm((Operator2.zero(), Operator2.zero(), Operator2.identity()))


# ===== Success Probabilities =====

def two_element_success(e: MirrorEnsemble) -> float:
    """p(1 + sin2θ)"""
    return e.p * (1.0 + math.sin(2.0 * e.theta))


def three_element_success(e: MirrorEnsemble) -> float:
    """(1-2p)[p sin²θ + 1 - 2p - p cos²θ] / (1 - 2p - p cos²θ)"""
    cos_t, sin_t = e.cos_theta, e.sin_theta
    q = 1.0 - 2.0 * e.p
    denominator = q - e.p * cos_t * cos_t
    return q * (e.p * sin_t * sin_t + denominator) / denominator


def optimal_success(e: MirrorEnsemble, tie_tol: Optional[float] = None) -> float:
    """
    Closed-form minimum-error success probability

    Args:
        e: Signal ensemble
        tie_tol: Boundary band (default Config.TIE_TOL)

    Returns:
        Success probability in [0, 1]
    """
    regime = classify_regime(e, tie_tol)
    if is_degenerate(e, regime):
        value = max(e.p, 1.0 - 2.0 * e.p)
    elif regime.tag is RegimeTag.THREE_ELEMENT:
        value = three_element_success(e)
    else:
        value = two_element_success(e)
    return min(1.0, max(0.0, value))


def helstrom_pair_success(e: MirrorEnsemble) -> float:
    """Two-state Helstrom success for ψ1, ψ2 carrying weight p each, from their overlap"""
    overlap = e.states[0].dot(e.states[1])
    return e.p * (1.0 + math.sqrt(max(0.0, 1.0 - overlap * overlap)))


def optimal_povm(e: MirrorEnsemble, tie_tol: Optional[float] = None) -> StrategyResult:
    """
    Minimum-error measurement for the ensemble

    Args:
        e: Signal ensemble
        tie_tol: Boundary band (default Config.TIE_TOL)

    Returns:
        StrategyResult with regime, a, POM and closed-form success
    """
    regime = classify_regime(e, tie_tol)
    success = optimal_success(e, tie_tol)

    if regime.tag is RegimeTag.TWO_ELEMENT:
        return StrategyResult(regime, None, two_element_povm(), success)

    if is_degenerate(e, regime):
        logger.warning(
            f"Degenerate ensemble at theta={e.theta:.3g}, p={e.p:.12g}: "
            "all states coincide, returning the guessing strategy"
        )
        return StrategyResult(regime, 0.0, guessing_povm(), success, degenerate=True)

    a = ansatz_parameter(e, tie_tol)
    logger.debug(f"{regime.tag.value} at theta={e.theta:.6g} p={e.p:.6g}: a={a:.12g}")
    return StrategyResult(regime, a, three_element_povm(a), success)


# ===== Square-Root Measurement =====

def square_root_measurement(e: MirrorEnsemble, tol: Optional[float] = None) -> SrmResult:
    """
    π_i = ρ^{-1/2} p_i|ψ_i><ψ_i| ρ^{-1/2}

    ρ is diagonal for this family, so the inverse square root is taken entry-wise.
    A zero diagonal entry is pseudo-inverted to 0 and the resulting identity defect
    (supported on the null space of ρ) is added to π3.
    """
    tol = Config.STATE_TOL if tol is None else tol
    rho = density_matrix(e)
    d_plus = 1.0 / math.sqrt(rho.a11) if rho.a11 > tol else 0.0
    d_minus = 1.0 / math.sqrt(rho.a22) if rho.a22 > tol else 0.0
    singular = d_plus == 0.0 or d_minus == 0.0

    elements = [
        Operator2(
            prior * d_plus * d_plus * state.c_plus * state.c_plus,
            prior * d_plus * d_minus * state.c_plus * state.c_minus,
            prior * d_minus * d_minus * state.c_minus * state.c_minus,
        )
        for prior, state in zip(e.priors, e.states)
    ]

    if singular:
        total = elements[0] + elements[1] + elements[2]
        elements[2] = elements[2] + (Operator2.identity() - total)
        logger.debug(
            f"Singular ρ at theta={e.theta:.3g}, p={e.p:.3g}: "
            "identity defect added to the third SRM element"
        )

    povm = Povm(tuple(elements))
    return SrmResult(povm, success_probability(e, povm), singular)


def srm_povm(e: MirrorEnsemble) -> Povm:
    return square_root_measurement(e).povm


def srm_success(e: MirrorEnsemble) -> float:
    return square_root_measurement(e).success


def srm_gap_scan(
    thetas: Iterable[float],
    ps: Iterable[float],
    tol: float = 1e-9,
) -> SrmGapScan:
    """
    Scan optimal_success - srm_success over a (θ, p) grid

    Args:
        thetas: θ values (radians)
        ps: p values
        tol: Gap below which the SRM counts as coinciding with the optimum

    Returns:
        SrmGapScan with the largest gap and every coincidence point found
    """
    ps = list(ps)
    best_gap, best_point = -math.inf, (math.nan, math.nan)
    coincidences: List[Tuple[float, float]] = []
    count = 0
    for theta in thetas:
        for p in ps:
            e = make_ensemble(theta, p)
            gap = optimal_success(e) - srm_success(e)
            count += 1
            if gap > best_gap:
                best_gap, best_point = gap, (e.theta, e.p)
            if abs(gap) <= tol:
                coincidences.append((e.theta, e.p))

    logger.info(
        f"SRM scan over {count} points: max gap {best_gap:.6g} at theta={best_point[0]:.6g}, "
        f"p={best_point[1]:.6g}; {len(coincidences)} coincidence points"
    )
    return SrmGapScan(best_gap, best_point, coincidences, count)
