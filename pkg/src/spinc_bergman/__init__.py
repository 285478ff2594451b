"""Symbolic and numeric verification of the second coefficient of the spin^c Bergman kernel expansion."""

__version__ = "0.1.0"
