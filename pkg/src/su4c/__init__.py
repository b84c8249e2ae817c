"""Two-qubit unitary compiler and verification toolkit.

The pipeline: an arbitrary 4x4 unitary is decomposed into four
single-qubit letters around a canonical entangling block (`decompose`),
lowered to a fixed-length calibrated pulse sequence (`lower_to_pulses`),
executed on a simulated noisy device (`run_experiment`), and validated by
state or process tomography and fidelity measures.
"""

from .circuits import (
    PULSE_COUNT,
    CircuitParams,
    LocalGate,
    circuit_to_unitary,
    compose_pulses,
    lower_to_pulses,
    r_pulse_triple,
)
from .compiler import (
    RealityViolationError,
    VerificationReport,
    class_parameters,
    decompose,
    local_invariants,
    verify,
)
from .config import DEFAULT_TOL, Tolerances, tolerances_from_env
from .experiment import (
    CALIBRATED_NOISE,
    MEASUREMENT_SETTINGS,
    STATE_LABELS,
    TOMOGRAPHY_INPUT_LABELS,
    InputStateLabel,
    MeasurementRecord,
    NoiseModel,
    apply_channel,
    exact_experiment,
    input_state,
    measure,
    run_experiment,
    setting_probabilities,
)
from .gates import (
    G_GATE,
    MAGIC,
    ClassParams,
    GateElement,
    canonical_v,
    class_spectrum,
    embed,
    from_magic,
    gate_matrix,
    r_gate,
    rz_gate,
    to_magic,
)
from .haar import SeededRng, sample_su4
from .linalg import (
    NotAProductError,
    NotUnitaryError,
    factor_tensor_product,
    is_unitary,
    joint_real_diagonalization,
    nearest_unitary,
    phase_invariant_distance,
    special_unitary_projection,
    su2_params,
)
from .tomography import (
    apply_process,
    check_density_matrix,
    entanglement_fidelity,
    mean_fidelity_from_entanglement,
    mean_state_fidelity,
    process_matrix_of_unitary,
    reconstruct_process,
    reconstruct_state,
    state_fidelity,
)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    "PULSE_COUNT",
    "CircuitParams",
    "LocalGate",
    "circuit_to_unitary",
    "compose_pulses",
    "lower_to_pulses",
    "r_pulse_triple",
    "RealityViolationError",
    "VerificationReport",
    "class_parameters",
    "decompose",
    "local_invariants",
    "verify",
    "DEFAULT_TOL",
    "Tolerances",
    "tolerances_from_env",
    "CALIBRATED_NOISE",
    "MEASUREMENT_SETTINGS",
    "STATE_LABELS",
    "TOMOGRAPHY_INPUT_LABELS",
    "InputStateLabel",
    "MeasurementRecord",
    "NoiseModel",
    "apply_channel",
    "exact_experiment",
    "input_state",
    "measure",
    "run_experiment",
    "setting_probabilities",
    "G_GATE",
    "MAGIC",
    "ClassParams",
    "GateElement",
    "canonical_v",
    "class_spectrum",
    "embed",
    "from_magic",
    "gate_matrix",
    "r_gate",
    "rz_gate",
    "to_magic",
    "SeededRng",
    "sample_su4",
    "NotAProductError",
    "NotUnitaryError",
    "factor_tensor_product",
    "is_unitary",
    "joint_real_diagonalization",
    "nearest_unitary",
    "phase_invariant_distance",
    "special_unitary_projection",
    "su2_params",
    "apply_process",
    "check_density_matrix",
    "entanglement_fidelity",
    "mean_fidelity_from_entanglement",
    "mean_state_fidelity",
    "process_matrix_of_unitary",
    "reconstruct_process",
    "reconstruct_state",
    "state_fidelity",
]
