"""Edge-type combinatorics for directed graphs.

Feasibility and structure of degree-constrained graph classes, exact
enumeration oracles, maximum-entropy counting bounds, type-class
probability laws, and lossy-compression rate bounds under a per-vertex
local-structure distortion.
"""

from .graphs import (
    DegreePair,
    DiGraph,
    DistortionValue,
    and_,
    complement,
    degrees,
    density,
    distortion,
    respects_restriction,
    xor,
)
from .typealg import (
    ComponentPartition,
    EdgeType,
    InvariantMasks,
    StructureMatrix,
    components_from_structure,
    gale_ryser_feasible,
    invariant_positions,
    normalize,
    reduce_by_invariants,
    restriction_necessary,
    structure_matrix,
)

__all__ = [
    "DiGraph",
    "DegreePair",
    "DistortionValue",
    "EdgeType",
    "StructureMatrix",
    "InvariantMasks",
    "ComponentPartition",
    "degrees",
    "xor",
    "and_",
    "complement",
    "distortion",
    "respects_restriction",
    "density",
    "gale_ryser_feasible",
    "normalize",
    "structure_matrix",
    "invariant_positions",
    "components_from_structure",
    "restriction_necessary",
    "reduce_by_invariants",
]

__version__ = "0.1.0"
