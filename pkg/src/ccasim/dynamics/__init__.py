from .schedule import (
    ENV_CONST, ENV_SMOOTHSTEP, ENV_LINEAR,
    ENV_EIT_DARK_AMP, ENV_EIT_J_FRAC, ENV_EIT_U_FRAC, ENV_EIT_COLL_AMP,
    Envelope, CONST_ENV, smoothstep,
    Term, Channel, Segment, InstantaneousPulse, PulseSchedule,
    constant_schedule, pack_segment, PackedSegment,
    EvolutionResult, TrajectoryResult, LindbladResult,
)
from .kernels import (
    advance_dp45, advance_gl4, hamiltonian_dense,
    STATUS_DONE, STATUS_THRESHOLD, STATUS_STEPFAIL, STATUS_NOCONV,
)
from .schrodinger import evolve_schrodinger, output_times, op_observable, real_op_observable
from .lindblad import evolve_lindblad, dm_observable, real_dm_observable
from .jumps import (
    quantum_jump_trajectory, run_ensemble, ensemble_average, trajectory_rng,
)
from .trotter import trotter_schedule, effective_time_fractions

__all__ = [
    "ENV_CONST", "ENV_SMOOTHSTEP", "ENV_LINEAR",
    "ENV_EIT_DARK_AMP", "ENV_EIT_J_FRAC", "ENV_EIT_U_FRAC", "ENV_EIT_COLL_AMP",
    "Envelope", "CONST_ENV", "smoothstep",
    "Term", "Channel", "Segment", "InstantaneousPulse", "PulseSchedule",
    "constant_schedule", "pack_segment", "PackedSegment",
    "EvolutionResult", "TrajectoryResult", "LindbladResult",
    "advance_dp45", "advance_gl4", "hamiltonian_dense",
    "STATUS_DONE", "STATUS_THRESHOLD", "STATUS_STEPFAIL", "STATUS_NOCONV",
    "evolve_schrodinger", "output_times", "op_observable", "real_op_observable",
    "evolve_lindblad", "dm_observable", "real_dm_observable",
    "quantum_jump_trajectory", "run_ensemble", "ensemble_average",
    "trajectory_rng",
    "trotter_schedule", "effective_time_fractions",
]
