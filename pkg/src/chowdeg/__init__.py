"""Exact integral values of monomials in Keel's boundary generators.

The fast path is the forest algorithm (:func:`integral_value`); the slow,
independent path is repeated linear reduction (:func:`oracle_value`).
"""

from .errors import *  # noqa: F401,F403
from .keel import (
    Cut,
    LabelSet,
    Monomial,
    find_quadratic_pair,
    fulfills_quadratic_relation,
    is_clever,
    is_tree_monomial,
    parse_monomial,
    render_monomial,
)
from .loaded_tree import (
    Cluster,
    LoadedTree,
    WeightedTree,
    clusters,
    is_proper,
    monomial_to_tree,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
    tree_to_monomial,
    weighted_tree,
)
from .forest import (
    IntegralValue,
    RedundancyForest,
    forest_to_dot,
    forest_value,
    integral_value,
    redundancy_forest,
    sun_like_value,
    tree_value,
)
from .reduction import (
    EdgeCutResult,
    Quadruple,
    SignedSum,
    SplitChoice,
    cut_multi_edge,
    cut_single_edge,
    epsilon_sum,
    find_star_cut,
    is_balanced,
    linear_reduction_step,
    oracle_value,
    proper_quadruples,
    split_choices,
    tree_reduction,
    vertex_split,
)
from .identities import (
    IdentityInstance,
    PartitionConfig,
    check_identity,
    count_fiber,
    pascal_multinomial,
    phi,
)

__version__ = "0.1.0"
