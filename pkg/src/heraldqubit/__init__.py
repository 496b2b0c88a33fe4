"""Heralded vacuum/one-photon qubits from linear optics and on/off detectors."""

__version__ = "0.1.0"

from .detection import (
    ConditionalResult,
    DetectorModel,
    Outcome,
    condition,
    outcome_distribution,
    povm_elements,
)
from .estimators import DesignSearch, HeraldedQubitModel
from .exceptions import (
    HeraldError,
    IncompatibleStatesError,
    InfeasibleDesignError,
    InvalidArgumentError,
    InvalidDimensionError,
    NumericalInconsistencyError,
    OutOfRangeError,
    TruncationError,
    UndefinedTargetError,
    ZeroProbabilityError,
)
from .fock import (
    DensityOperator,
    FockState,
    auto_cutoff,
    coherent_state,
    fidelity_pure,
    number_state,
    partial_trace,
    tensor,
    to_density,
    vacuum,
)
from .optics import (
    ModeTransform,
    apply_transform,
    build_circuit_state,
    mz_transform,
    prepare_entangled,
)
from .scheme import (
    QubitCoefficients,
    SchemeParams,
    SchemeResult,
    TargetQubit,
    coefficients_analytic,
    fidelity_analytic,
    p_yn_analytic,
    rho_yn_analytic,
    run_analytic,
    run_numeric,
    target_state,
)
