"""Exact lattice computations for W-structures of 4-dimensional graph-manifolds."""

from .charge import (
    apply_K,
    charge_data,
    charge_map,
    charge_report,
    intersection_orientation,
    orthogonality_criterion,
    space_B,
    space_Q,
)
from .errors import *  # noqa: F401,F403
from .invariants import (
    edge_invariants,
    intersection_lattice,
    intersection_number,
    invariant_report,
    invariant_signature,
    manifold_type,
    vertex_invariants,
)
from .jsonio import dumps_manifold, loads_manifold
from .lattice import Lattice, hnf, index, intersect, join, saturate
from .transform import adapted_basis, orthogonality_witness, orthogonalize, reglue, unwind
from .wstructure import (
    BasisChange,
    BlockSpec,
    DirectedEdge,
    Edge,
    GluingMatrix,
    GraphManifold,
    apply_basis_change,
    validate,
)

__version__ = "0.1.0"
