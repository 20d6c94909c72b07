"""Simulation and phase tuning for high-dimensional Mean King's Problem
experiments built from graph-derived linear-optical setups."""

from .errors import (
    BasisOutOfRange,
    ConstructionInconsistent,
    DegenerateOutput,
    DimensionMismatch,
    EmptyPattern,
    EmptySubset,
    MeanKingError,
    NonFiniteLoss,
    NotOddPrime,
    PhaseCountMismatch,
)
from .inference import (
    DecodeRule,
    LikelihoodTable,
    best_pair,
    decode,
    likelihoods,
    pm_values,
    pv_value,
    subset_report,
    success_m,
    success_v,
)
from .optics import (
    ClickDistribution,
    SetupModel,
    SetupRow,
    build_setup,
    click_probabilities,
    cyclic_variant,
    load_setup,
    save_setup,
    simulate,
    transfer_matrix,
)
from .qstate import (
    Ket,
    MubFamily,
    TwoPhotonState,
    bell_state,
    build_mub,
    collapsed_state,
    conjugate_ket,
    is_odd_prime,
)
from .tuner import OptimizationRun, finite_difference_check, make_objective, optimize
from .vaa import (
    MappingTable,
    VaaBasis,
    build_mapping_table,
    build_vaa_basis,
    completeness_deviation,
    mapping_function,
    mols_check,
    vaa_overlap_check,
)

__version__ = "0.1.0"
