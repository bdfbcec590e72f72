"""No-signaling, entanglement and CHSH experiments under both prescriptions.

Probabilities are exact expectation values; nothing is sampled. Under the
Hilbert prescription a final state ``psi_f`` gives
``<psi_f|Pi|psi_f> / <psi_f|psi_f>``; under the CPT prescription the dual
``Phi_f = C^dag P psi_f`` is used at both ends, ``<Phi_f|Pi|Phi_f> / <Phi_f|Phi_f>``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .composite import (
    BELL_STATE,
    AliceChoice,
    BipartiteSystem,
    evolution_operator,
    evolve_entangled,
    evolve_product,
)
from .core import Prescription, PTHamiltonian, check_alpha
from .linalg import eig_2x2, outer, partial_trace, shannon_entropy_bits

SEPARABLE_STATE = np.array([1, 0, 0, 0], dtype=complex)
SEPARABLE_STATE.setflags(write=False)


class Outcome(str, enum.Enum):
    PLUS_Y = "+y"
    MINUS_Y = "-y"

    @property
    def ket(self) -> np.ndarray:
        sign = 1 if self is Outcome.PLUS_Y else -1
        return np.array([1, sign * 1j], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class YProjector:
    a_outcome: Outcome
    b_outcome: Outcome
    matrix: np.ndarray = field(repr=False)


def y_projector(a: Outcome, b: Outcome) -> YProjector:
    """``|a><a| (x) |b><b|`` with ``|+-y> = (|0> +- i|1>)/sqrt2``."""
    a, b = Outcome(a), Outcome(b)
    m = np.kron(outer(a.ket, a.ket), outer(b.ket, b.ket))
    return YProjector(a, b, m)


def eta_basis() -> list[np.ndarray]:
    """Common eigenbasis of the y-basis product projectors.

    ``eta_1 = |+y,-y>``, ``eta_2 = |+y,+y>``, ``eta_3 = |-y,+y>``,
    ``eta_4 = -|-y,-y>``.
    """
    return [
        np.array([1, -1j, 1j, 1], dtype=complex) / 2,
        np.array([1, 1j, 1j, -1], dtype=complex) / 2,
        np.array([1, 1j, -1j, 1], dtype=complex) / 2,
        np.array([-1, 1j, 1j, 1], dtype=complex) / 2,
    ]


def _expectation(v: np.ndarray, op: np.ndarray) -> float:
    return float((np.vdot(v, op @ v) / np.vdot(v, v)).real)


Alphas = Union[float, Sequence[float]]
Choices = Union[AliceChoice, str, Sequence[Union[AliceChoice, str]]]


def _system(alpha: Alphas) -> BipartiteSystem:
    if np.ndim(alpha) == 0:
        return BipartiteSystem.one_sided(float(alpha))
    alpha_a, alpha_b = alpha
    return BipartiteSystem.two_sided(alpha_a, alpha_b)


def _final_pair(sys: BipartiteSystem, choice: Choices, initial=None):
    if isinstance(choice, (str, AliceChoice)):
        choices = (AliceChoice(choice), AliceChoice.PLUS)
    else:
        choices = tuple(AliceChoice(c) for c in choice)
    if sys.is_two_sided:
        return evolve_product(sys, *choices, initial=initial)
    return evolve_entangled(sys, choices[0], initial=initial)


def _side_marginal(state: np.ndarray, fixed: Outcome, sum_over: str) -> float:
    fixed_proj = outer(fixed.ket, fixed.ket)
    # summing |o><o| over both outcomes of the other party gives the identity
    op = np.kron(np.eye(2), fixed_proj) if sum_over == "a" else np.kron(fixed_proj, np.eye(2))
    return _expectation(state, op)


def marginal_hilbert(alpha: float, choice: AliceChoice, b: Outcome, initial=None) -> float:
    """Bob's marginal ``sum_a <psi_f|Pi_ab|psi_f> / <psi_f|psi_f>`` (one-sided)."""
    sys = BipartiteSystem.one_sided(alpha)
    pair = evolve_entangled(sys, AliceChoice(choice), initial=initial)
    return _side_marginal(pair.psi_f, Outcome(b), "a")


def marginal_hilbert_closed_form(alpha: float, choice: AliceChoice, b: Outcome = Outcome.PLUS_Y) -> float:
    """``(1 -+ sin a)^2 / (2 (1 + sin^2 a))``; the sign flips with Alice's choice and with ``b``."""
    alpha = check_alpha(alpha)
    sign = 1 if AliceChoice(choice) is AliceChoice.PLUS else -1
    if Outcome(b) is Outcome.MINUS_Y:
        sign = -sign
    sa = math.sin(alpha)
    return (1 - sign * sa) ** 2 / (2 * (1 + sa * sa))


def marginal_cpt(alpha: Alphas, choice: Choices, outcome: Outcome, sum_over: str = "a", initial=None) -> float:
    """CPT marginal ``sum <Phi_f|Pi_ab|Phi_f>`` over one party's outcomes.

    ``alpha`` is a float (Alice only) or an ``(alpha_A, alpha_B)`` pair;
    ``choice`` is Alice's choice or an ``(A, B)`` pair of choices. With
    ``sum_over="a"`` the fixed ``outcome`` is Bob's, with ``"b"`` it is Alice's.
    """
    if sum_over not in ("a", "b"):
        raise ValueError("sum_over must be 'a' or 'b'")
    pair = _final_pair(_system(alpha), choice, initial)
    return _side_marginal(pair.phi_f, Outcome(outcome), sum_over)


def marginal_cpt_via_eta(alpha: Alphas, choice: Choices, b: Outcome) -> float:
    """Same marginal with the identity resolved in the eta basis.

    ``sum_a sum_j <Phi|Pi_ab|eta_j><eta_j|Phi>``, normalized by ``<Phi|Phi>``.
    """
    phi = _final_pair(_system(alpha), choice).phi_f
    total = 0j
    for a in Outcome:
        proj = y_projector(a, b).matrix
        for eta in eta_basis():
            total += np.vdot(phi, proj @ eta) * np.vdot(eta, phi)
    return float((total / np.vdot(phi, phi)).real)


@dataclass(frozen=True)
class JointProbabilityTable:
    """Joint y-basis outcome probabilities per setting, with marginals.

    ``entries`` maps ``(a, b, setting)`` to a probability; a setting is the
    tuple of local choices (Alice's only for one-sided systems).
    ``deviation`` is ``max |sum_a P(a,b|setting) - P(b|B)|`` where ``P(b|B)``
    is the mean over Alice's settings at fixed Bob setting.
    ``reverse_deviation`` is the same with the parties exchanged (zero when
    Bob has no choice).
    """

    prescription: Prescription
    alphas: tuple[float, ...]
    initial: str
    entries: dict
    bob_marginals: dict
    alice_marginals: dict
    deviation: float
    reverse_deviation: float
    normalization: str

    def rows(self) -> list[dict]:
        out = []
        for (a, b, setting), p in self.entries.items():
            out.append({"setting": "".join(c.value for c in setting), "a": a.value, "b": b.value, "probability": p})
        return out


_INITIAL_STATES = {"entangled": BELL_STATE, "separable": SEPARABLE_STATE}


def nosignaling_report(
    prescription: Prescription,
    alpha: float,
    alpha_b: Optional[float] = None,
    initial: str = "entangled",
) -> JointProbabilityTable:
    prescription = Prescription(prescription)
    if initial not in _INITIAL_STATES:
        raise ValueError(f"initial must be one of {sorted(_INITIAL_STATES)}, got {initial!r}")
    psi0 = _INITIAL_STATES[initial]
    sys = _system(alpha if alpha_b is None else (alpha, alpha_b))
    if sys.is_two_sided:
        settings = list(itertools.product(AliceChoice, AliceChoice))
    else:
        settings = [(c,) for c in AliceChoice]

    entries, bob, alice = {}, {}, {}
    for setting in settings:
        pair = _final_pair(sys, setting if sys.is_two_sided else setting[0], psi0)
        state = pair.phi_f if prescription is Prescription.CPT else pair.psi_f
        for a, b in itertools.product(Outcome, Outcome):
            entries[(a, b, setting)] = _expectation(state, y_projector(a, b).matrix)
        for o in Outcome:
            bob[(setting, o)] = sum(entries[(a, o, setting)] for a in Outcome)
            alice[(setting, o)] = sum(entries[(o, b, setting)] for b in Outcome)

    def spread(marginals, group_index):
        worst = 0.0
        groups = {}
        for (setting, o), p in marginals.items():
            key = (setting[group_index] if len(setting) > group_index else None, o)
            groups.setdefault(key, []).append(p)
        for values in groups.values():
            mean = sum(values) / len(values)
            worst = max(worst, max(abs(v - mean) for v in values))
        return worst

    # Bob's marginals grouped by Bob's own setting; Alice's by Alice's
    deviation = spread(bob, 1)
    reverse = spread(alice, 0) if sys.is_two_sided else 0.0
    state_name = "Phi_f" if prescription is Prescription.CPT else "psi_f"
    return JointProbabilityTable(
        prescription=prescription,
        alphas=sys.alphas,
        initial=initial,
        entries=entries,
        bob_marginals=bob,
        alice_marginals=alice,
        deviation=deviation,
        reverse_deviation=reverse,
        normalization=f"divided by <{state_name}|{state_name}>",
    )


# -- entanglement -----------------------------------------------------------

@dataclass(frozen=True)
class EntanglementReport:
    prescription: Prescription
    alpha: float
    reduced: np.ndarray = field(repr=False)
    eigenvalues: tuple[complex, complex]
    entropy: Optional[float]
    flag: Optional[str] = None


def entropy_from_eigenvalues(eigenvalues: Iterable[complex], tol: float = 1e-10) -> tuple[Optional[float], Optional[str]]:
    """Base-2 von Neumann entropy, or ``(None, reason)`` for a non-physical spectrum."""
    lams = list(eigenvalues)
    for lam in lams:
        if abs(complex(lam).imag) > tol or not (-tol <= complex(lam).real <= 1 + tol):
            return None, f"eigenvalue {lam} outside [0, 1]"
    return shannon_entropy_bits([min(max(complex(x).real, 0.0), 1.0) for x in lams]), None


def hilbert_reduced_density(alpha: float, t: Optional[float] = None) -> np.ndarray:
    """Bob's reduced state ``tr_A |psi(t)><psi(t)|`` with Hilbert normalization.

    ``psi(t) = (exp(-i H t) (x) I) psi_0``. The default ``t`` is
    ``pi / (2 (E+ - E-))``, half the signaling time, where the reduced state is
    ``[[1 + s c, i s], [-i s, 1 - s c]] / 2`` (``s = sin a``, ``c = cos a``). At
    ``tau`` itself the off-diagonal entry becomes ``i s / (1 + s^2)`` and the
    eigenvalues are ``(1 +- s)^2 / (2 (1 + s^2))``.
    """
    h = PTHamiltonian(1.0, alpha)
    t = h.tau / 2 if t is None else t
    psi = np.kron(evolution_operator(h, t), np.eye(2)) @ BELL_STATE
    rho = outer(psi, psi) / np.vdot(psi, psi)
    return partial_trace(rho, keep="second")


def hilbert_reduced_density_closed_form(alpha: float) -> np.ndarray:
    alpha = check_alpha(alpha)
    sa, ca = math.sin(alpha), math.cos(alpha)
    return 0.5 * np.array([[1 + sa * ca, 1j * sa], [-1j * sa, 1 - sa * ca]], dtype=complex)


def cpt_pair_density(alpha: float) -> np.ndarray:
    """Closed-form CPT density of the two final states, ``(1/2) sum |psi_f><Phi_f|``."""
    alpha = check_alpha(alpha)
    sa, ca = math.sin(alpha), math.cos(alpha)
    x = 2j * sa / ca**2
    y = (1 + sa * sa) / ca**2
    return 0.25 * np.array(
        [
            [1, x, 0, y],
            [x, 1, y, 0],
            [0, y, 1, x],
            [y, 0, x, 1],
        ],
        dtype=complex,
    )


def final_state_pair_density(alpha: float) -> np.ndarray:
    """``-(1/2) sum_f psi_f psi_f^T`` built from the evolved states.

    Agrees with :func:`cpt_pair_density` except that its ``|10><11|`` and
    ``|11><10|`` entries carry the opposite sign; both reduce to ``I/2``
    when the second factor is traced out.
    """
    sys = BipartiteSystem.one_sided(alpha)
    states = [evolve_entangled(sys, c).psi_f for c in AliceChoice]
    return -0.5 * sum(np.outer(v, v) for v in states)


def entanglement_report(alpha: float, p: Prescription) -> EntanglementReport:
    p = Prescription(p)
    alpha = check_alpha(alpha)
    if p is Prescription.HILBERT:
        reduced = hilbert_reduced_density(alpha)
    else:
        reduced = partial_trace(cpt_pair_density(alpha), keep="first")
    eigenvalues = tuple(lam for lam, _ in eig_2x2(reduced))
    entropy, flag = entropy_from_eigenvalues(eigenvalues)
    return EntanglementReport(p, alpha, reduced, eigenvalues, entropy, flag)


def hilbert_eigenvalues_closed_form(alpha: float) -> tuple[float, float]:
    """``(1 +- sqrt(1 - cos^4 a)) / 2``."""
    r = math.sqrt(1 - math.cos(alpha) ** 4)
    return (1 + r) / 2, (1 - r) / 2


# -- CHSH game --------------------------------------------------------------

def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class ChshStrategy:
    """Measurement-basis angles indexed by the input bit."""

    theta_a: tuple[float, float] = (0.0, math.pi / 4)
    theta_b: tuple[float, float] = (math.pi / 8, -math.pi / 8)
    zeta: float = math.pi / 8

    @classmethod
    def from_zeta(cls, zeta: float) -> "ChshStrategy":
        """Angles with relative differences ``(-z, z, z, 3z)`` for inputs 00, 01, 10, 11."""
        return cls((0.0, 2 * zeta), (zeta, -zeta), zeta)

    def relative_angle(self, inputs: tuple[int, int]) -> float:
        x, y = inputs
        return self.theta_a[x] - self.theta_b[y]


def chsh_final_state(strategy: ChshStrategy, inputs: tuple[int, int], alphas=(0.0, 0.0)) -> np.ndarray:
    """``(U_A R_A (x) U_B R_B) psi_0`` with each side evolved for its own ``tau``."""
    x, y = inputs
    sys = BipartiteSystem.two_sided(*alphas)
    u_a = evolution_operator(sys.side_a)
    u_b = evolution_operator(sys.side_b)
    return np.kron(u_a @ rotation(strategy.theta_a[x]), u_b @ rotation(strategy.theta_b[y])) @ BELL_STATE


def chsh_final_phi(strategy: ChshStrategy, inputs: tuple[int, int], alphas=(0.0, 0.0)) -> np.ndarray:
    """Dual ``(C_A^dag P (x) C_B^dag P) psi_f``.

    Equals ``-(cos d, sin d, -sin d, cos d)/sqrt2`` with ``d = theta_A - theta_B``
    for every ``alphas``.
    """
    sys = BipartiteSystem.two_sided(*alphas)
    f = sys.frame()
    return f.c_dagger_op @ f.p_op @ chsh_final_state(strategy, inputs, alphas)


def _computational_projector(a: int, b: int) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[2 * a + b, 2 * a + b] = 1
    return m


def chsh_marginal(
    strategy: ChshStrategy,
    inputs: tuple[int, int],
    a: int,
    b: int,
    alphas=(0.0, 0.0),
    p: Prescription = Prescription.CPT,
) -> float:
    """``P(ab|AB)`` from the computational-basis projector ``|a><a| (x) |b><b|``."""
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("outcomes are bits")
    if Prescription(p) is Prescription.CPT:
        state = chsh_final_phi(strategy, inputs, alphas)
    else:
        state = chsh_final_state(strategy, inputs, alphas)
    return _expectation(state, _computational_projector(a, b))


def chsh_probability_closed_form(delta: float, a: int, b: int) -> float:
    """``(1/2) [cos^2 d  delta_ab + sin^2 d (1 - delta_ab)]``."""
    return 0.5 * (math.cos(delta) ** 2 if a == b else math.sin(delta) ** 2)


def chsh_win_probability(zeta: float) -> float:
    """``(3 cos^2 z + sin^2 3z) / 4``."""
    return 0.25 * (3 * math.cos(zeta) ** 2 + math.sin(3 * zeta) ** 2)


def chsh_win_probability_from_marginals(
    zeta: float, alphas=(0.0, 0.0), p: Prescription = Prescription.CPT
) -> float:
    """Average over the four inputs of the probability that ``a xor b == A and B``."""
    strategy = ChshStrategy.from_zeta(zeta)
    total = 0.0
    for x, y in itertools.product((0, 1), repeat=2):
        for a, b in itertools.product((0, 1), repeat=2):
            if (a ^ b) == (x & y):
                total += chsh_marginal(strategy, (x, y), a, b, alphas, p)
    return total / 4


def chsh_optimize(lo: float = 0.0, hi: float = math.pi / 4) -> tuple[float, float]:
    """Maximize the win probability over ``zeta`` in ``[lo, hi]``.

    The objective is unimodal on ``[0, pi/4]`` with its peak at ``pi/8``.
    """
    if not hi > lo:
        raise ValueError("need hi > lo")
    res = minimize_scalar(lambda z: -chsh_win_probability(z), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    # the bounded search never evaluates the endpoints themselves
    candidates = [(float(res.x), chsh_win_probability(res.x)), (lo, chsh_win_probability(lo)),
                  (hi, chsh_win_probability(hi))]
    return max(candidates, key=lambda c: c[1])

