"""Circuit-level discrete noise channels from hardware-level Lindblad noise."""

from ._kernels import active_backend
from .basis import (
    OperatorBasis,
    StructureTensor,
    custom_basis,
    frobenius_inner,
    gell_mann_basis,
    pauli_basis,
    pauli_index,
    pauli_string,
    structure_tensor,
)
from .channels import damping, dephasing, depolarizing
from .expr import parse_expr
from .gates import (
    FidelityReport,
    GateNoise,
    GateOp,
    GateSpec,
    compile_monolithic,
    compile_per_op,
    gate_fidelity_check,
    ideal_unitary,
    trace_distance,
)
from .lindblad import (
    LindbladGenerator,
    coherent_evolve,
    dissipator_apply,
    evolve,
    evolve_trajectory,
    expectation,
    validate_density,
)
from .schedule import HamiltonianSchedule, RateSchedule, SampledCoeff, zero_hamiltonian
from .separation import (
    SeparatedNoiseResult,
    XiSpectrum,
    choi_of_transform,
    global_depolarizing_lambda,
    q_trajectory,
    residual_components,
    separated,
    separated_integral,
    separated_ode,
    separated_spectral,
    steady_state,
    xi_spectrum,
)
from .superops import (
    Propagator,
    RateMatrix,
    commutator_rate,
    commute_left,
    commute_right,
    omega_of,
    propagate_m,
    schrodinger_u,
    superop_commute_identity_check,
)

__version__ = "0.1.0"
