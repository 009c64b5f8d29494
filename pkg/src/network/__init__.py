"""
Optical network realization of the three-element measurement
"""
