"""discpack: circle packings on disc triangulations.

Solve radius-label boundary-value problems (branched ones included), lay
the circles out in the plane, and probe the labels with reversible random
walks: label-derived conductances, effective-resistance growth across hex
balls, the closed-form angle-sum derivative, and ratio-map flattening
experiments.
"""

from . import _kernels
from .errors import DiscpackError
from .labels import (
    BranchSet,
    Label,
    MaxPrincipleVerdict,
    SolveReport,
    TargetAngles,
    angle,
    angle_sum,
    angle_sums,
    check_max_principle,
    is_subpacking,
    read_brs,
    read_lbl,
    solve_boundary_value,
    targets_from_branch_set,
    write_brs,
    write_lbl,
)
from .layout import (
    Packing,
    RatioMap,
    SvgOptions,
    consistency_error,
    layout_packing,
    ratio_map,
    realized_angle,
    svg_document,
    to_svg,
    total_turning,
)
from .network import (
    ConductanceComparison,
    ConductanceNetwork,
    ResistanceProfile,
    ReturnEstimate,
    TransitionKernel,
    compare_conductances,
    effective_resistance,
    label_conductances,
    monte_carlo_return,
    recurrence_profile,
    simple_network,
    superharmonic_residual,
    transition_kernel,
)
from .triangulation import (
    TriangulationComplex,
    build_complex,
    hex_ball,
    hex_ball_vertex_count,
    neighbors_cyclic,
    read_cpx,
    star,
    write_cpx,
)
from .variation import (
    FlowField,
    LabelFamily,
    angle_sum_derivative,
    angle_sum_derivative_coefficients,
    angle_sum_derivative_fd,
    flow_field_residual,
    perturbation_family,
    write_family_csv,
    write_residual_csv,
)

__version__ = "0.1.0"

KERNEL_BACKEND = _kernels.BACKEND

__all__ = [
    "BranchSet",
    "ConductanceComparison",
    "ConductanceNetwork",
    "DiscpackError",
    "FlowField",
    "KERNEL_BACKEND",
    "Label",
    "LabelFamily",
    "MaxPrincipleVerdict",
    "Packing",
    "RatioMap",
    "ResistanceProfile",
    "ReturnEstimate",
    "SolveReport",
    "SvgOptions",
    "TargetAngles",
    "TransitionKernel",
    "TriangulationComplex",
    "angle",
    "angle_sum",
    "angle_sum_derivative",
    "angle_sum_derivative_coefficients",
    "angle_sum_derivative_fd",
    "angle_sums",
    "build_complex",
    "check_max_principle",
    "compare_conductances",
    "consistency_error",
    "effective_resistance",
    "flow_field_residual",
    "hex_ball",
    "hex_ball_vertex_count",
    "is_subpacking",
    "label_conductances",
    "layout_packing",
    "monte_carlo_return",
    "neighbors_cyclic",
    "perturbation_family",
    "ratio_map",
    "read_brs",
    "read_cpx",
    "read_lbl",
    "realized_angle",
    "recurrence_profile",
    "simple_network",
    "solve_boundary_value",
    "star",
    "superharmonic_residual",
    "svg_document",
    "targets_from_branch_set",
    "to_svg",
    "total_turning",
    "transition_kernel",
    "write_brs",
    "write_cpx",
    "write_family_csv",
    "write_lbl",
    "write_residual_csv",
]
