"""Center-of-mass balance regions for multi-contact robots.

The region is the set of CoM positions for which contact forces exist that
satisfy the centroidal equilibrium equations, linearized friction cones and
normal-force bounds, optionally for every CoM acceleration in a box. It is
computed by iterative projection with inner and outer polytope
approximations.
"""
from .admittance import AdmittanceGain, admittance_gain, com_velocity_reference
from .contact_model import (
    AccelerationSet,
    ComBounds,
    ContactPoint,
    ContactSet,
    LinearizedCone,
    LinearProgram,
    RobotSpec,
    assemble_lp,
    linearize_friction_cone,
    problem_from_dict,
    problem_to_dict,
)
from .errors import (
    BalanceRegionError,
    DegenerateRegion,
    EmptyRegion,
    SolverError,
    UnboundedProgram,
    ValidationError,
)
from .files import load_problem, save_problem
from .lp import LpSolution, LpSolver, LpStatus, solve_direction, solve_warm
from .oracle import FeasibilityOracle, oracle_feasible
from .projection import (
    IterationTrace,
    MeasureMode,
    ProjectionConfig,
    compute_region,
    sweep_linearization,
)
from .region import (
    BalanceRegion,
    RegionStatus,
    chebyshev_center,
    contains,
    read_region,
    region_from_json,
    region_off,
    region_to_json,
    write_region,
)
from .transition import (
    Profile,
    RegionStore,
    RegionWorker,
    TransitionSchedule,
    region_sequence,
    region_sequence_from_bounds,
    transition_bounds,
)

__version__ = "0.1.0"

__all__ = [
    "AccelerationSet",
    "AdmittanceGain",
    "BalanceRegion",
    "BalanceRegionError",
    "ComBounds",
    "ContactPoint",
    "ContactSet",
    "DegenerateRegion",
    "EmptyRegion",
    "FeasibilityOracle",
    "IterationTrace",
    "LinearProgram",
    "LinearizedCone",
    "LpSolution",
    "LpSolver",
    "LpStatus",
    "MeasureMode",
    "Profile",
    "ProjectionConfig",
    "RegionStatus",
    "RegionStore",
    "RegionWorker",
    "RobotSpec",
    "SolverError",
    "TransitionSchedule",
    "UnboundedProgram",
    "ValidationError",
    "admittance_gain",
    "assemble_lp",
    "chebyshev_center",
    "com_velocity_reference",
    "compute_region",
    "contains",
    "linearize_friction_cone",
    "load_problem",
    "oracle_feasible",
    "problem_from_dict",
    "problem_to_dict",
    "read_region",
    "region_from_json",
    "region_off",
    "region_sequence",
    "region_sequence_from_bounds",
    "region_to_json",
    "save_problem",
    "solve_direction",
    "solve_warm",
    "sweep_linearization",
    "transition_bounds",
    "write_region",
]
