"""Piecewise self-similar flows of a polytropic gas on the circle of directions."""

__version__ = "0.1.0"

from .gas import (
    GasModel,
    PhaseBounds,
    PrimitiveState,
    ConservedState,
    make_gas,
    primitive_to_conserved,
    conserved_to_primitive,
    physical_fluxes,
    in_phase_space,
)
from .polar import to_polar, from_polar, flow_angle, PolarState
from .shock import (
    Orientation,
    ShockSolution,
    hugoniot_value,
    shock_from_strength,
    classify_discontinuity,
    rh_residual,
    check_admissibility,
    deflection_angle,
    solve_shock_angle,
    max_deflection,
    max_deflection_limit,
    lax_neighborhood_bound,
)
from .pmwave import PMWave, WaveKind, pm_rhs, integrate_pm, classify_pm
from .roe import jacobian, roe_average, roe_matrix, eigensystem, genuine_nonlinearity
from .flowfield import (
    ClosureError,
    ConstantPiece,
    ShockPoint,
    ContactPoint,
    PMPiece,
    FlowField,
    ShockEvent,
    ContactEvent,
    PMEvent,
    Shooting,
    FlowDescription,
    SectorDirection,
    Sector,
    StructureReport,
    SBVDecomposition,
    build_flow,
    evaluate,
    sector_decompose,
    validate_structure,
    bv_decompose,
    shock_separation_floor,
)
from .verify import (
    AuditReport,
    weak_residual,
    entropy_residual,
    smooth_residual,
    full_audit,
)

__all__ = [
    "GasModel",
    "PhaseBounds",
    "PrimitiveState",
    "ConservedState",
    "make_gas",
    "primitive_to_conserved",
    "conserved_to_primitive",
    "physical_fluxes",
    "in_phase_space",
    "to_polar",
    "from_polar",
    "flow_angle",
    "PolarState",
    "Orientation",
    "ShockSolution",
    "hugoniot_value",
    "shock_from_strength",
    "classify_discontinuity",
    "rh_residual",
    "check_admissibility",
    "deflection_angle",
    "solve_shock_angle",
    "max_deflection",
    "max_deflection_limit",
    "lax_neighborhood_bound",
    "PMWave",
    "WaveKind",
    "pm_rhs",
    "integrate_pm",
    "classify_pm",
    "jacobian",
    "roe_average",
    "roe_matrix",
    "eigensystem",
    "genuine_nonlinearity",
    "ClosureError",
    "ConstantPiece",
    "ShockPoint",
    "ContactPoint",
    "PMPiece",
    "FlowField",
    "ShockEvent",
    "ContactEvent",
    "PMEvent",
    "Shooting",
    "FlowDescription",
    "SectorDirection",
    "Sector",
    "StructureReport",
    "SBVDecomposition",
    "build_flow",
    "evaluate",
    "sector_decompose",
    "validate_structure",
    "bv_decompose",
    "shock_separation_floor",
    "AuditReport",
    "weak_residual",
    "entropy_residual",
    "smooth_residual",
    "full_audit",
    "__version__",
]
