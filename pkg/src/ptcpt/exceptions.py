"""Exception types raised by ptcpt."""

import numpy as np


class NonDiagonalizableError(np.linalg.LinAlgError):
    """Matrix has no complete eigenbasis (defective or singular eigenvectors)."""


class BrokenSymmetryError(ValueError):
    """Parameter lies outside the unbroken PT band |alpha| < pi/2."""


class NormalizationError(ValueError):
    """State has vanishing CPT norm and cannot be normalized."""
