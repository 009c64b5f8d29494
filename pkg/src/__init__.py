"""
mirror-povm - Minimum-error discrimination of three mirror-symmetric qubit states
Version: 0.1
"""

__version__ = "0.1.0"
__author__ = "mirror-povm developers"
