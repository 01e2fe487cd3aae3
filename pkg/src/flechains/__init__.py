"""Exact algebra of involutive residuated chains represented by layer groups."""

from .amalgam import (
    AmalgamFailure,
    AmalgamResult,
    StrongApWitness,
    VFormation,
    amalgamate,
    chain_strong_amalgam,
    find_strongness_violation,
    strong_ap_counterwitness,
    verify_amalgam,
)
from .bunches import (
    Bunch,
    Classification,
    EmbeddingSpec,
    bunch_classify,
    bunch_validate,
    embedding_check,
    identity_embedding,
    make_bunch,
    subbunch_check,
)
from .chains import (
    AlgElement,
    FiniteChainTable,
    FleChain,
    TableError,
    algebra_of,
    axiom_suite,
    chain_to_table,
    map_element,
    roundtrip_check,
    subalgebra_sample_report,
    table_decompose,
)
from .dirsys import (
    LABEL_I,
    LABEL_J,
    LABEL_O,
    DirectSystem,
    Skeleton,
    ds_closure,
    ds_extend_embedding_family,
    ds_prefix_limit,
    ds_transition,
    ds_validate,
)
from .ogroups import (
    DOWN,
    EQUAL,
    GREATER,
    LESS,
    TRIVIAL,
    UP,
    OGroup,
    OGroupHom,
    OrderSearchFailure,
    PushoutResult,
    SubgroupSpec,
    atom,
    box_elements,
    cone_compatibility_sample,
    full_subgroup,
    group_pushout,
    hom_apply,
    hom_compose,
    hom_embedding_check,
    hom_order_preserving,
    identity_hom,
    int_lex,
    lex_group,
    og_add,
    og_compare,
    og_cover,
    og_is_discrete,
    og_neg,
    og_sample,
    og_unit,
    order_extension_candidates,
    order_extension_search,
    rat_lex,
    subgroup_contains,
    trivial_subgroup,
    zero_hom,
)
from .report import Finding, Report

__version__ = "0.1.0"
