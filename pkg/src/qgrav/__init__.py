"""Qubit toolkit for gravity-environment states, channels, process games and an SR latch."""

from .qmat import DensityOperator, InvalidStateError, InvariantViolation

__all__ = ["DensityOperator", "InvalidStateError", "InvariantViolation"]
__version__ = "0.1.0"
