"""Matroids from gain graphs over finite groups with Frobenius partitions.

The package builds finite groups as Cayley tables, enumerates their Frobenius
partitions, attaches group-valued gains to multigraphs, and realizes the
elementary lift of the quotient frame matroid that the partition selects. It
also produces GF(q) incidence-matrix representations for affine-group gains
and recovers the partition back from a lift over a complete gain graph.
"""

from .biased import (
    BiasedGraph,
    ClassLiftOracle,
    FrameOracle,
    GraphicOracle,
    LiftOracle,
    RankOracle,
    brylawski_lift,
    frame_circuits,
    frame_rank,
    is_linear_class,
    lift_circuits,
    lift_rank,
    matroid_axiom_check,
    minimal_dependent_sets,
    theta_property_check,
)
from .errors import LimitExceeded, RecoveryError
from .gaingraph import (
    Edge,
    GainGraph,
    Walk,
    apply_switching,
    complete_edge_id,
    complete_gain_graph,
    enumerate_cycles,
    from_signed_gains,
    gain_of_walk,
    gain_set,
    is_balanced_cycle,
    normalize_forest,
    quotient_gains,
)
from .groups import (
    FiniteGroup,
    FrobeniusPartition,
    QuotientMap,
    Subgroup,
    find_isomorphism,
    frobenius_partitions,
    from_table,
    is_isomorphic,
    is_malnormal,
    is_normal,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_field_affine,
    make_inversion_extension,
    make_semidirect,
    quotient,
    subgroups,
    validate_partition,
)
from .lifts import (
    FrobeniusContext,
    LiftedMatroid,
    bases,
    build_spike_graph,
    circuits,
    class_member,
    class_member_walks,
    contract_kernel_loop,
    contract_nonloop,
    contract_unbalanced_loop,
    cyclic_covering_pair,
    delete,
    is_elementary_lift,
    linear_class,
    matroid_rank,
    switch_invariance_check,
    verify_spike,
)
from .recovery import edge_bundle, recover_partition, switching_action_check
from .represent import (
    AffinePair,
    FieldMatrix,
    VectorOracle,
    affine_index,
    affine_pair,
    incidence_matrix,
    matrix_rank_gf,
    reorient_edge,
    reorientation_check,
    same_affine_part,
    scale_gains,
    switching_projective_check,
    verify_representation,
)

__all__ = [name for name in dir() if not name.startswith("_")]
