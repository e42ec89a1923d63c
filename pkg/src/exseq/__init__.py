"""Exact combinatorics of exceptional sequences of line bundles on
Picard-rank-2 projective bundles over projective space."""

from .varieties import (
    VarietySpec,
    Sublattice,
    QuotientMap,
    canonical_bundle,
    canonical_sublattice,
    cotangent,
    dim_variety,
    effective_cone,
    is_admissible,
    nef_cone,
    quotient_project,
    rank_k0,
    spec_from_json,
    tangent_dual,
    toric,
)
from .cohomology import (
    h_dims,
    is_acyclic,
    is_effective,
    is_immaculate,
    maculate_regions,
    oracle_cotangent,
)
from .posets import (
    ExceptionalSet,
    associated_poset,
    compute_F,
    exceptional_orders,
    exceptional_set,
    is_effective_set,
    is_exceptional_sequence,
    is_maximal,
    is_strongly_exceptional,
)
from .toric_mes import build_mes, decompose_layers, enumerate_admissible, enumerate_mes
from .x2 import classify, enumerate_mes_x2, gap_points
from .mutations import helix_left, helix_right, is_orlov_type, reduce_to_orlov
from .rouquier import compute_i0, orlov_tilting, rouquier_dimension

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
