"""Fidelity limits and program costs for storage-and-retrieval of isometry channels."""

from .estimation import (
    FidelityReport,
    SparseSymMatrix,
    box_weight,
    dominant_eigenpair,
    fidelity_matrix,
    fidelity_of_vector,
    jensen_upper_bound,
    optimal_fidelity,
)
from .pbt import PbtWeights, cptp_cost_bound, pbt_error_bound, pbt_program_cost, pbt_weights, query_complexity
from .protocol import (
    CostReport,
    ProtocolParams,
    ProtocolWeights,
    build_support,
    build_weights,
    cost_exponent,
    estimation_program_cost,
    fejer_weights,
    fidelity_lower_bound,
    fidelity_upper_bound_protocol,
    window_params,
    window_penalty,
)
from .young import (
    DiagramSet,
    DimensionRecord,
    YoungDiagram,
    add_box,
    count_stab,
    diagram,
    dim_unitary,
    enumerate_diagrams,
    remove_box,
)

__version__ = "0.1.0"

__all__ = [
    "FidelityReport",
    "SparseSymMatrix",
    "box_weight",
    "dominant_eigenpair",
    "fidelity_matrix",
    "fidelity_of_vector",
    "jensen_upper_bound",
    "optimal_fidelity",
    "PbtWeights",
    "cptp_cost_bound",
    "pbt_error_bound",
    "pbt_program_cost",
    "pbt_weights",
    "query_complexity",
    "CostReport",
    "ProtocolParams",
    "ProtocolWeights",
    "build_support",
    "build_weights",
    "cost_exponent",
    "estimation_program_cost",
    "fejer_weights",
    "fidelity_lower_bound",
    "fidelity_upper_bound_protocol",
    "window_params",
    "window_penalty",
    "DiagramSet",
    "DimensionRecord",
    "YoungDiagram",
    "add_box",
    "count_stab",
    "diagram",
    "dim_unitary",
    "enumerate_diagrams",
    "remove_box",
    "__version__",
]
