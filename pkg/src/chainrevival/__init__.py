"""Design and analysis of nearest-neighbour coupled chains with commensurate spectra."""

from .chain import (
    CouplingChain,
    MirrorSymmetry,
    assemble_matrix,
    basis_state,
    gauge_normalize,
    is_mirror_symmetric,
    normalize_state,
)
from .commensurability import (
    CommensurateLabels,
    EmptySpectrum,
    NoDynamics,
    NotCommensurate,
    NotCommensurateError,
    is_commensurate,
    rationalize_spectrum,
    revival_period,
)
from .inverse_design import (
    DegenerateDenominator,
    DegenerateRequiresZeroS,
    DesignError,
    DesignResult,
    DesignSpec,
    EqualEndsBranch,
    Family,
    InfeasibleParameters,
    design,
    design_a4,
    design_a5_equal_ends,
    design_a5_general,
    design_a7,
    design_a9,
    design_m5,
    feasible_region_scan,
)
from .dynamics import (
    Trajectory,
    TransferVerdict,
    UnnormalizedInput,
    best_split_length,
    fidelity,
    length_sensitivity_scan,
    perfect_transfer_check,
    propagate,
    revival_check,
    sample_trajectory,
)
from .geometry import (
    CouplingModel,
    WaveguideLayout,
    calibrate_model,
    couplings_from_separations,
    separations_from_couplings,
)
from .spectral import Spectrum, a4_eigenvalues_closed_form, charpoly_invariants, eigen_system

__version__ = "0.1.0"
