"""
Mirror-Symmetric Signal Ensemble
Three real qubit states |ψ1,2> = cosθ|+> ± sinθ|->, |ψ3> = |+> with priors (p, p, 1-2p)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

from src.config import Config
from src.errors import DomainError

logger = logging.getLogger("mirror_povm.ensemble")

THETA_MAX = math.pi / 2
P_MAX = 0.5


@dataclass(frozen=True)
class QubitStateVector:
    """Real pure qubit state c_plus|+> + c_minus|->"""

    c_plus: float
    c_minus: float

    def __post_init__(self):
        norm_sq = self.c_plus * self.c_plus + self.c_minus * self.c_minus
        if abs(norm_sq - 1.0) > Config.STATE_TOL:
            raise DomainError(
                "state norm²", norm_sq, f"1 within {Config.STATE_TOL:g}"
            )

    def dot(self, other: QubitStateVector) -> float:
        """Real inner product <self|other>"""
        return self.c_plus * other.c_plus + self.c_minus * other.c_minus

    def as_tuple(self) -> Tuple[float, float]:
        return (self.c_plus, self.c_minus)

    def close_to(self, other: QubitStateVector, tol: float, up_to_sign: bool = False) -> bool:
        """Entry-wise comparison, optionally up to a global sign"""
        same = (
            abs(self.c_plus - other.c_plus) <= tol
            and abs(self.c_minus - other.c_minus) <= tol
        )
        if same or not up_to_sign:
            return same
        return (
            abs(self.c_plus + other.c_plus) <= tol
            and abs(self.c_minus + other.c_minus) <= tol
        )


PLUS = QubitStateVector(1.0, 0.0)
MINUS = QubitStateVector(0.0, 1.0)


@dataclass(frozen=True)
class MirrorEnsemble:
    """
    The (θ, p) family of three mirror-symmetric states

    Validated on construction: 0 ≤ θ ≤ π/2 and 0 ≤ p ≤ 1/2. The third prior is
    computed as 1 - 2p so the priors sum to one exactly.
    """

    theta: float
    p: float
    states: Tuple[QubitStateVector, QubitStateVector, QubitStateVector] = field(
        init=False, repr=False
    )
    priors: Tuple[float, float, float] = field(init=False, repr=False)

    def __post_init__(self):
        if not (isinstance(self.theta, (int, float)) and 0.0 <= self.theta <= THETA_MAX):
            raise DomainError("theta", self.theta, "[0, π/2] radians")
        if not (isinstance(self.p, (int, float)) and 0.0 <= self.p <= P_MAX):
            raise DomainError("p", self.p, "[0, 1/2]")

        cos_t = math.cos(self.theta)
        sin_t = math.sin(self.theta)
        states = (
            QubitStateVector(cos_t, sin_t),
            QubitStateVector(cos_t, -sin_t),
            PLUS,
        )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "priors", (self.p, self.p, 1.0 - 2.0 * self.p))

    @property
    def cos_theta(self) -> float:
        return math.cos(self.theta)

    @property
    def sin_theta(self) -> float:
        return math.sin(self.theta)


def make_ensemble(theta: float, p: float) -> MirrorEnsemble:
    """
    Build the mirror-symmetric ensemble

    Args:
        theta: Half-angle between |ψ1> and |ψ2>, radians in [0, π/2]
        p: Prior of |ψ1> and of |ψ2>, in [0, 1/2]

    Returns:
        MirrorEnsemble with states and priors filled in

    Raises:
        DomainError: If theta or p is out of range (no clamping)
    """
    ensemble = MirrorEnsemble(float(theta), float(p))
    logger.debug(f"Built ensemble theta={ensemble.theta:.12g} p={ensemble.p:.12g}")
    return ensemble


def degrees_to_radians(theta_deg: float) -> float:
    """90° maps onto π/2 exactly"""
    return float(theta_deg) / 90.0 * THETA_MAX


def from_degrees(theta_deg: float, p: float) -> MirrorEnsemble:
    """Same as make_ensemble with θ given in degrees"""
    if not 0.0 <= theta_deg <= 90.0:
        raise DomainError("theta (degrees)", theta_deg, "[0, 90] degrees")
    return make_ensemble(degrees_to_radians(theta_deg), p)


def trine_ensemble() -> MirrorEnsemble:
    """Trine states: θ = π/3 with equal priors 1/3"""
    return make_ensemble(math.pi / 3, 1.0 / 3.0)


def mirror_reflect(v: QubitStateVector) -> QubitStateVector:
    """Apply R = diag(1, -1): |+> → |+>, |-> → -|->"""
    return QubitStateVector(v.c_plus, -v.c_minus)


def overlaps(e: MirrorEnsemble) -> Tuple[float, float, float]:
    """
    Pairwise overlaps of the signal states

    Returns:
        (<ψ1|ψ2>, <ψ1|ψ3>, <ψ2|ψ3>) which equal (cos2θ, cosθ, cosθ)
    """
    psi1, psi2, psi3 = e.states
    return (psi1.dot(psi2), psi1.dot(psi3), psi2.dot(psi3))


def is_mirror_symmetric(e: MirrorEnsemble, tol: float = 1e-12) -> bool:
    """Check that R maps the state set onto itself under the permutation (1↔2, 3↦3)"""
    psi1, psi2, psi3 = e.states
    return (
        mirror_reflect(psi1).close_to(psi2, tol, up_to_sign=True)
        and mirror_reflect(psi2).close_to(psi1, tol, up_to_sign=True)
        and mirror_reflect(psi3).close_to(psi3, tol, up_to_sign=True)
    )
