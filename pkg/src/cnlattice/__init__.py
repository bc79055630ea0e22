"""Exact discrete barrier transform for nearest-neighbour chains on Z^d."""

from .distribution import KilledEvolution, Measure, StartOnBoundary, evolve, evolve_killed, expect
from .kernel import (
    Direction,
    DimensionMismatch,
    KernelError,
    MassViolation,
    NondegeneracyViolation,
    StepKernel,
    is_reflection_symmetric,
    step_probability,
    validate_kernel,
)
from .lattice import InvalidAnchor, NotMember, SupportPoint, SupportSet, is_member, order_index, support_set
from .montecarlo import HedgeResult, McEstimate, mc_hedge
from .transform import (
    CoefficientTable,
    LatticeFunction,
    Region,
    RegionViolation,
    Sign,
    TooLarge,
    TriangularSystem,
    build_system,
    coefficients_via_solve,
    cramer_coefficients,
    determinant,
    local_transform,
    transform_at,
)
from .verify import (
    NotSymmetric,
    UnreachablePerturbation,
    VerificationReport,
    barrier_parity,
    check_consistency,
    check_reflection,
    check_theorem,
    check_uniqueness,
)

__version__ = "0.1.0"
