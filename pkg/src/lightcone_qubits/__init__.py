"""Entanglement dynamics of two atoms coupled to empty and disordered cavities.

Atom 1 sees the vacuum field of an empty cavity, atom 2 a cavity whose
random susceptibility produces light-cone fluctuations. The package gives
the field correlators and spectral densities, the resulting Kossakowski
rates, the Bloch-matrix master equation with closed-form and RK4
solutions, and the Wootters concurrence.
"""

from .correlators import (
    DisorderParams,
    converged_spectral,
    self_energy,
    spectral_disorder_correction,
    spectral_free,
    spectral_numeric_oracle,
    wightman_disorder_full,
    wightman_disorder_static,
    wightman_free_static,
)
from .dynamics import (
    BLOCH_INDICES,
    BLOCH_LABELS,
    BlochState,
    Trajectory,
    bloch_rhs,
    closed_form,
    ground_state,
    integrate_rk4,
    lindblad_generator,
    rk4_step,
    werner_state,
)
from .entanglement import (
    ConcurrenceResult,
    UnphysicalStateError,
    concurrence,
    concurrence_singlet_closed_form,
    spin_flip,
    x_state_concurrence,
)
from .kossakowski import (
    CP_VALID,
    OUT_OF_MODEL,
    PAPER_EXTENDED,
    AtomParams,
    CPViolationWarning,
    KossakowskiCoeffs,
    ValidityReport,
    coeff_disordered,
    coeff_empty,
    cp_bound,
    cp_validity,
    critical_sigma,
    kossakowski_coeffs,
    kossakowski_matrix,
)
from .pauli import (
    InvalidStateError,
    bloch_to_density,
    charpoly4,
    density_to_bloch,
    det4,
    eigenvalues4,
    kron,
    pauli,
)

__version__ = "0.1.0"
