"""Two-qubit systems where Alice (first factor), and optionally Bob, evolve
under PT-symmetric Hamiltonians.

Basis ordering is ``|00>, |01>, |10>, |11>`` with Alice as the first factor.
The shared initial state is the Bell state ``(|00> + |11>)/sqrt(2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    IDENTITY2,
    PARITY,
    CPTFrame,
    PTHamiltonian,
    cpt_frame,
    eigensystem,
    hamiltonian_matrix,
)
from .linalg import as_vector, spectral_exp

BELL_STATE = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
BELL_STATE.setflags(write=False)

# eigenbasis used for Bob's trivial (identity) Hamiltonian
_BOB_BASIS = (
    np.array([1, 1], dtype=complex) / math.sqrt(2),
    np.array([1, -1], dtype=complex) / math.sqrt(2),
)


class AliceChoice(str, enum.Enum):
    """Local operation applied before evolution: identity or a bit flip."""

    PLUS = "+"
    MINUS = "-"

    @property
    def operator(self) -> np.ndarray:
        return IDENTITY2.copy() if self is AliceChoice.PLUS else PARITY.copy()


@dataclass(frozen=True)
class BipartiteSystem:
    side_a: PTHamiltonian
    side_b: Optional[PTHamiltonian] = None

    @classmethod
    def one_sided(cls, alpha: float, s: float = 1.0) -> "BipartiteSystem":
        return cls(PTHamiltonian(s, alpha))

    @classmethod
    def two_sided(cls, alpha_a: float, alpha_b: float, s_a: float = 1.0, s_b: float = 1.0) -> "BipartiteSystem":
        return cls(PTHamiltonian(s_a, alpha_a), PTHamiltonian(s_b, alpha_b))

    @property
    def is_two_sided(self) -> bool:
        return self.side_b is not None

    @property
    def alphas(self) -> tuple[float, ...]:
        if self.side_b is None:
            return (self.side_a.alpha,)
        return (self.side_a.alpha, self.side_b.alpha)

    @property
    def tau(self) -> float:
        return self.side_a.tau

    def hamiltonian(self) -> np.ndarray:
        """``H_A (x) I`` one-sided, or the product ``H_A (x) H_B`` two-sided.

        The two-sided product form is informational; evolution in the
        two-sided case is ``U_A(tau_A) (x) U_B(tau_B)``.
        """
        h_a = hamiltonian_matrix(self.side_a)
        h_b = IDENTITY2 if self.side_b is None else hamiltonian_matrix(self.side_b)
        return np.kron(h_a, h_b)

    @property
    def lifted_p(self) -> np.ndarray:
        return lift_frame(self)[0]

    @property
    def lifted_c_dagger(self) -> np.ndarray:
        return lift_frame(self)[1]

    def frame(self) -> CPTFrame:
        fa = cpt_frame(self.side_a)
        if self.side_b is None:
            return CPTFrame(np.kron(fa.p_op, IDENTITY2), np.kron(fa.c_op, IDENTITY2), np.kron(fa.c_dagger_op, IDENTITY2))
        fb = cpt_frame(self.side_b)
        return CPTFrame(
            np.kron(fa.p_op, fb.p_op),
            np.kron(fa.c_op, fb.c_op),
            np.kron(fa.c_dagger_op, fb.c_dagger_op),
        )


@dataclass(frozen=True)
class FinalStatePair:
    psi_f: np.ndarray = field(repr=False)
    phi_f: np.ndarray = field(repr=False)
    alphas: tuple[float, ...]
    choices: tuple[AliceChoice, ...]


def lift_frame(sys: BipartiteSystem) -> tuple[np.ndarray, np.ndarray]:
    """4x4 parity and C^dagger: ``X (x) I`` one-sided, ``X_A (x) X_B`` two-sided."""
    f = sys.frame()
    return f.p_op.copy(), f.c_dagger_op.copy()


def composite_eigensystem(sys: BipartiteSystem) -> list[tuple[float, np.ndarray]]:
    """CPT-normalized eigenpairs of the composite Hamiltonian from 2x2 factors.

    One-sided: ``psi_{1,2} = psi+ (x) (1, +-1)/sqrt2`` with energy ``s cos a``
    and ``psi_{3,4} = psi- (x) (1, +-1)/sqrt2`` with energy ``-s cos a``.
    Two-sided: products ``psi_A (x) psi_B`` with energies ``E_A * E_B``.
    """
    spec_a = eigensystem(sys.side_a)
    if sys.side_b is None:
        return [(e, np.kron(v, w)) for e, v in spec_a.pairs() for w in _BOB_BASIS]
    spec_b = eigensystem(sys.side_b)
    return [(ea * eb, np.kron(va, vb)) for ea, va in spec_a.pairs() for eb, vb in spec_b.pairs()]


def evolution_operator(h: PTHamiltonian, t: float | None = None) -> np.ndarray:
    """``exp(-i H t)`` by spectral decomposition; ``t`` defaults to ``h.tau``."""
    t = h.tau if t is None else float(t)
    return spectral_exp(hamiltonian_matrix(h), -1j * t)


def _finish(sys: BipartiteSystem, psi_f: np.ndarray, choices) -> FinalStatePair:
    p4, cd4 = lift_frame(sys)
    return FinalStatePair(psi_f, cd4 @ p4 @ psi_f, sys.alphas, tuple(choices))


def evolve_entangled(sys: BipartiteSystem, choice: AliceChoice, initial=None) -> FinalStatePair:
    """``psi_f = (U(tau) A (x) I) psi_0`` and its dual ``C^dag_4 P_4 psi_f``.

    ``initial`` defaults to the Bell state; any normalized 4-vector may be
    given (e.g. ``|00>`` for the separable control).
    """
    if sys.is_two_sided:
        raise ValueError("evolve_entangled needs a one-sided system; use evolve_entangled_two_sided")
    choice = AliceChoice(choice)
    psi0 = BELL_STATE if initial is None else as_vector(initial, 4)
    u = evolution_operator(sys.side_a)
    psi_f = np.kron(u @ choice.operator, IDENTITY2) @ psi0
    return _finish(sys, psi_f, (choice,))


def evolve_product(
    sys: BipartiteSystem, choice_a: AliceChoice, choice_b: AliceChoice = AliceChoice.PLUS, initial=None
) -> FinalStatePair:
    """``(U_A(tau_A) A_i (x) U_B(tau_B) A_j) psi_0`` for a two-sided system."""
    if not sys.is_two_sided:
        raise ValueError("evolve_product needs a two-sided system")
    choice_a, choice_b = AliceChoice(choice_a), AliceChoice(choice_b)
    psi0 = BELL_STATE if initial is None else as_vector(initial, 4)
    u_a = evolution_operator(sys.side_a)
    u_b = evolution_operator(sys.side_b)
    psi_f = np.kron(u_a @ choice_a.operator, u_b @ choice_b.operator) @ psi0
    return _finish(sys, psi_f, (choice_a, choice_b))


def final_state_closed_form(alpha: float, choice: AliceChoice) -> np.ndarray:
    """Closed-form one-sided final state at ``tau``."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    if AliceChoice(choice) is AliceChoice.PLUS:
        v = [sa, -1j, -1j, -sa]
    else:
        v = [-1j, sa, -sa, -1j]
    return np.array(v, dtype=complex) / (math.sqrt(2) * ca)


def final_phi_closed_form(choice: AliceChoice) -> np.ndarray:
    """Dual of the one-sided final state; independent of alpha."""
    if AliceChoice(choice) is AliceChoice.PLUS:
        v = [0, -1j, -1j, 0]
    else:
        v = [-1j, 0, 0, -1j]
    return np.array(v, dtype=complex) / math.sqrt(2)


def final_state_two_sided_closed_form(alpha_a: float, alpha_b: float, choice_a: AliceChoice, choice_b: AliceChoice) -> np.ndarray:
    """Closed-form two-sided final states.

    Only the relative choice matters: ``(+,+)`` and ``(-,-)`` coincide, as do
    ``(+,-)`` and ``(-,+)``, because ``sx (x) sx`` fixes the Bell state and
    ``sx (x) I`` and ``I (x) sx`` act on it identically.
    """
    sa, sb = math.sin(alpha_a), math.sin(alpha_b)
    norm = 1 / (math.sqrt(2) * math.cos(alpha_a) * math.cos(alpha_b))
    if AliceChoice(choice_a) is AliceChoice(choice_b):
        v = [sa * sb - 1, -1j * sa + 1j * sb, -1j * sb + 1j * sa, -1 + sa * sb]
    else:
        v = [-1j * sa - 1j * sb, -1 - sa * sb, -1 - sa * sb, 1j * sa + 1j * sb]
    return norm * np.array(v, dtype=complex)


def final_phi_two_sided_closed_form(choice_a: AliceChoice, choice_b: AliceChoice) -> np.ndarray:
    if AliceChoice(choice_a) is AliceChoice(choice_b):
        v = [-1, 0, 0, -1]
    else:
        v = [0, -1, -1, 0]
    return np.array(v, dtype=complex) / math.sqrt(2)


def evolve_entangled_two_sided(sys: BipartiteSystem, choice_a: AliceChoice, choice_b: AliceChoice) -> FinalStatePair:
    """Two-sided final state from the closed form, with its lifted dual.

    :func:`evolve_product` computes the same state by explicit evolution.
    """
    if not sys.is_two_sided:
        raise ValueError("evolve_entangled_two_sided needs a two-sided system")
    choice_a, choice_b = AliceChoice(choice_a), AliceChoice(choice_b)
    psi_f = final_state_two_sided_closed_form(sys.side_a.alpha, sys.side_b.alpha, choice_a, choice_b)
    return _finish(sys, psi_f, (choice_a, choice_b))


def evolve_lifted(sys: BipartiteSystem, choice: AliceChoice, initial=None) -> np.ndarray:
    """One-sided final state via ``exp(-i H_4 tau)`` on the 4x4 Hamiltonian.

    Independent of :func:`evolve_entangled`: the 4x4 exponential uses the
    Kronecker-factored eigensystem of ``H (x) I``.
    """
    if sys.is_two_sided:
        raise ValueError("evolve_lifted needs a one-sided system")
    psi0 = BELL_STATE if initial is None else as_vector(initial, 4)
    h4 = sys.hamiltonian()
    u4 = spectral_exp(h4, -1j * sys.tau)
    return u4 @ np.kron(AliceChoice(choice).operator, IDENTITY2) @ psi0
