"""
Measurement theory: signal ensembles, 2x2 operator algebra, closed-form optimal strategies
"""

from src.measurement.ensemble import MirrorEnsemble, QubitStateVector, make_ensemble
from src.measurement.operators import Operator2, Povm, check_helstrom, success_probability
from src.measurement.strategy import optimal_povm, optimal_success, square_root_measurement

__all__ = [
    "MirrorEnsemble",
    "QubitStateVector",
    "make_ensemble",
    "Operator2",
    "Povm",
    "check_helstrom",
    "success_probability",
    "optimal_povm",
    "optimal_success",
    "square_root_measurement",
]
