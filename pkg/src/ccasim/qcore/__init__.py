"""State spaces, operators, and basic quantum-information diagnostics."""

from .spaces import (
    PHOTON_MODE,
    COLLECTIVE_MODE,
    SPIN_HALF,
    ATOM_LEVELS,
    DENSE_DIAG_LIMIT,
    Factor,
    SpaceSpec,
    space,
    Operator,
    Ket,
    DensityMatrix,
)
from .ops import (
    annihilation_matrix,
    number_matrix,
    transition_matrix,
    tensor_product,
    embed,
    annihilation,
    number,
    transition,
    basis_ket,
    product_ket,
    partial_trace,
    expectation,
)
from .entropy import von_neumann_entropy, purity
from .collective import CollectiveSpace, RestrictedSpace

__all__ = [
    "PHOTON_MODE", "COLLECTIVE_MODE", "SPIN_HALF", "ATOM_LEVELS",
    "DENSE_DIAG_LIMIT", "Factor", "SpaceSpec", "space", "Operator", "Ket",
    "DensityMatrix", "annihilation_matrix", "number_matrix",
    "transition_matrix", "tensor_product", "embed", "annihilation", "number",
    "transition", "basis_ket", "product_ket", "partial_trace", "expectation",
    "von_neumann_entropy", "purity", "CollectiveSpace", "RestrictedSpace",
]
