"""
Independent brute-force verification: primal and dual searches
"""

from src.verification.oracle import dual_certificate_search, primal_grid_search, sandwich

__all__ = [
    "dual_certificate_search",
    "primal_grid_search",
    "sandwich",
]
