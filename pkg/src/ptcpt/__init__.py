"""PT-symmetric two-level systems with the CPT inner product.

Computes the quantities needed to compare Hilbert-space and CPT probability
prescriptions for one and two qubits: the C operator, CPT-normalized
eigenstates, no-signaling marginals, reduced-state entropies and CHSH win
probabilities.
"""

from .composite import (
    BELL_STATE,
    AliceChoice,
    BipartiteSystem,
    FinalStatePair,
    composite_eigensystem,
    evolve_entangled,
    evolve_entangled_two_sided,
    evolve_product,
    lift_frame,
)
from .core import (
    CPTFrame,
    Prescription,
    PTHamiltonian,
    Spectrum2,
    build_c_spectral,
    c_operator,
    cpt_frame,
    density_matrix,
    eigensystem,
    hamiltonian_matrix,
    inner,
    phi_of,
    transition_probability,
)
from .exceptions import BrokenSymmetryError, NonDiagonalizableError, NormalizationError
from .experiments import (
    ChshStrategy,
    EntanglementReport,
    JointProbabilityTable,
    Outcome,
    chsh_final_phi,
    chsh_marginal,
    chsh_optimize,
    chsh_win_probability,
    cpt_pair_density,
    entanglement_report,
    eta_basis,
    marginal_cpt,
    marginal_hilbert,
    nosignaling_report,
    y_projector,
)

__version__ = "0.1.0"
