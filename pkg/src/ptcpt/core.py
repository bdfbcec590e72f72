"""Single-qubit PT-symmetric machinery and the CPT inner product.

The Hamiltonian family is

    H(s, alpha) = s * [[i sin(alpha), 1], [1, -i sin(alpha)]]

with parity ``P = sigma_x`` and time reversal ``T`` acting as entrywise complex
conjugation. ``T`` is antilinear, so it is never represented as a matrix: it
appears only as ``numpy.conj`` inside the operations below.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import BrokenSymmetryError, NormalizationError
from .linalg import as_matrix, as_vector, outer

PARITY = np.array([[0, 1], [1, 0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)

# |alpha| must stay this far inside pi/2; the eigenvector normalization
# 1/sqrt(2 cos alpha) diverges at the exceptional point.
ALPHA_LIMIT = math.pi / 2 * (1 - 1e-9)


class Prescription(str, enum.Enum):
    """Which inner product turns amplitudes into probabilities."""

    HILBERT = "hilbert"
    CPT = "cpt"


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise BrokenSymmetryError(f"alpha must be finite, got {alpha}")
    if abs(alpha) >= ALPHA_LIMIT:
        raise BrokenSymmetryError(f"alpha outside unbroken PT band: |{alpha}| >= pi/2")
    return alpha


@dataclass(frozen=True)
class PTHamiltonian:
    """The two-level PT-symmetric Hamiltonian with energy scale ``s``."""

    s: float
    alpha: float

    def __post_init__(self):
        s = float(self.s)
        if not math.isfinite(s) or s == 0.0:
            raise ValueError(f"s must be finite and nonzero, got {self.s}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    @property
    def matrix(self) -> np.ndarray:
        return hamiltonian_matrix(self)

    @property
    def e_plus(self) -> float:
        return self.s * math.cos(self.alpha)

    @property
    def e_minus(self) -> float:
        return -self.e_plus

    @property
    def tau(self) -> float:
        """Evolution time ``pi / (E+ - E-)``, at which ``U(tau) = -i C``."""
        return math.pi / (self.e_plus - self.e_minus)


def hamiltonian_matrix(h: PTHamiltonian) -> np.ndarray:
    sa = math.sin(h.alpha)
    return h.s * np.array([[1j * sa, 1], [1, -1j * sa]], dtype=complex)


@dataclass(frozen=True)
class Spectrum2:
    e_plus: float
    e_minus: float
    psi_plus: np.ndarray = field(repr=False)
    psi_minus: np.ndarray = field(repr=False)

    def pairs(self) -> list[tuple[float, np.ndarray]]:
        return [(self.e_plus, self.psi_plus), (self.e_minus, self.psi_minus)]


def eigensystem(h: PTHamiltonian) -> Spectrum2:
    """Closed-form eigenpairs, CPT-normalized.

    ``psi+ = (e^{i a/2}, e^{-i a/2}) / sqrt(2 cos a)`` and
    ``psi- = i (e^{-i a/2}, -e^{i a/2}) / sqrt(2 cos a)``. The factor ``i`` on
    ``psi-`` is what makes ``psi+ psi+^T + psi- psi-^T`` equal the C operator
    and gives ``(psi+)* . psi- = tan(alpha)``.
    """
    a = h.alpha
    norm = 1 / math.sqrt(2 * math.cos(a))
    half = np.exp(0.5j * a)
    psi_plus = norm * np.array([half, half.conjugate()])
    psi_minus = 1j * norm * np.array([half.conjugate(), -half])
    return Spectrum2(h.e_plus, h.e_minus, psi_plus, psi_minus)


def c_operator(alpha: float) -> np.ndarray:
    """Closed form ``C = [[i sin a, 1], [1, -i sin a]] / cos a``."""
    alpha = check_alpha(alpha)
    sa, ca = math.sin(alpha), math.cos(alpha)
    return np.array([[1j * sa, 1], [1, -1j * sa]], dtype=complex) / ca


def build_c_spectral(spec: Spectrum2) -> np.ndarray:
    """``C = sum_n psi_n psi_n^T`` (plain transpose, no conjugation)."""
    return sum(np.outer(v, v) for _, v in spec.pairs())


@dataclass(frozen=True)
class CPTFrame:
    """Parity, C and C^dagger = TCT for a 2- or 4-dimensional system."""

    p_op: np.ndarray = field(repr=False)
    c_op: np.ndarray = field(repr=False)
    c_dagger_op: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = as_matrix(self.p_op, square=True)
        c = as_matrix(self.c_op, shape=p.shape)
        cd = as_matrix(self.c_dagger_op, shape=p.shape)
        if p.shape[0] not in (2, 4):
            raise ValueError("frames are defined for dimension 2 or 4")
        for name, val in (("p_op", p), ("c_op", c), ("c_dagger_op", cd)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def dim(self) -> int:
        return self.p_op.shape[0]

    @property
    def metric(self) -> np.ndarray:
        """Hermitian positive operator ``eta`` with ``<a|b>_CPT = a^dag eta b``."""
        return (self.c_op @ self.p_op).T

    def cpt(self, v) -> np.ndarray:
        """Apply the antilinear map ``C P T``."""
        return self.c_op @ self.p_op @ np.conj(as_vector(v, self.dim))


def cpt_frame(h: PTHamiltonian) -> CPTFrame:
    c = build_c_spectral(eigensystem(h))
    return CPTFrame(PARITY, c, np.conj(c))


def time_reverse(v) -> np.ndarray:
    return np.conj(as_vector(v))


def pt_inner(a, b) -> complex:
    """Indefinite ``(PT a)^T b`` product (single qubit)."""
    a = as_vector(a, 2)
    b = as_vector(b, 2)
    return complex((PARITY @ np.conj(a)) @ b)


def phi_of(state, frame: CPTFrame) -> np.ndarray:
    """Dual state ``Phi = C^dagger P psi``."""
    state = as_vector(state)
    if state.shape[0] != frame.dim:
        raise ValueError(f"state of dimension {state.shape[0]} in a {frame.dim}-dim frame")
    return frame.c_dagger_op @ frame.p_op @ state


def inner(a, b, frame: CPTFrame, p: Prescription = Prescription.CPT) -> complex:
    """Inner product under either prescription.

    CPT: ``(C P conj(a))^T b``; Hilbert: ``conj(a)^T b``.
    """
    a = as_vector(a)
    b = as_vector(b, a.shape[0])
    if a.shape[0] != frame.dim:
        raise ValueError(f"state of dimension {a.shape[0]} in a {frame.dim}-dim frame")
    p = Prescription(p)
    if p is Prescription.CPT:
        return complex(frame.cpt(a) @ b)
    return complex(np.conj(a) @ b)


def dual_inner(phi, psi) -> complex:
    """Hilbert-style pairing ``<Phi|psi>`` of a dual state with a state."""
    return complex(np.vdot(phi, psi))


def transition_probability(a, b, frame: CPTFrame) -> float:
    """``|<Phi_a|b>|^2 / (<Phi_a|a> <Phi_b|b>)``."""
    a = as_vector(a, frame.dim)
    b = as_vector(b, frame.dim)
    phi_a = phi_of(a, frame)
    phi_b = phi_of(b, frame)
    na = dual_inner(phi_a, a)
    nb = dual_inner(phi_b, b)
    if abs(na) < 1e-14 or abs(nb) < 1e-14:
        raise NormalizationError("state outside CPT-normalizable sector")
    return float(abs(dual_inner(phi_a, b)) ** 2 / abs(na * nb))


def density_matrix(
    states: Sequence,
    weights: Sequence[float],
    frame: CPTFrame,
    p: Prescription = Prescription.CPT,
) -> np.ndarray:
    """Weighted mixture of ``|psi><Phi|`` (CPT) or ``|psi><psi|`` (Hilbert)."""
    if len(states) != len(weights) or not states:
        raise ValueError("need one weight per state")
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and nonnegative")
    if abs(w.sum() - 1) > 1e-12:
        raise ValueError(f"weights must sum to 1, got {w.sum()}")
    p = Prescription(p)
    rho = np.zeros((frame.dim, frame.dim), dtype=complex)
    for psi, wi in zip(states, w):
        psi = as_vector(psi, frame.dim)
        bra = phi_of(psi, frame) if p is Prescription.CPT else psi
        rho += wi * outer(psi, bra)
    return rho
