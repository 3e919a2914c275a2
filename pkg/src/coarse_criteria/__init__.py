"""Coarse decision criteria: categories, maximal categorization, efficiency,
radix economy and weighted-vote aggregation, with executable checks."""

from ._accel import BACKEND
from .aggregation import (
    Tournament,
    WeightProfile,
    aggregate_choice,
    find_condorcet_cycle,
    weighted_tournament,
)
from .choice import (
    ChoiceFunction,
    WeakOrder,
    build_max_choice,
    choice_classes,
    condorcet_consistent,
    maximally_discriminates,
    n_classes,
    rationalizable,
    uses,
)
from .criteria import (
    CriteriaSet,
    discrimination_partition,
    discrimination_vector,
    maximally_categorizes,
    order_isomorphism_property,
    product_representation,
    restricted_order,
    theorem_check,
)
from .efficiency import (
    CostModel,
    Efficiency,
    EfficiencyPoint,
    binary_condition,
    coarseness_dominates,
    frontier,
    more_efficient,
    set_cost,
    verify_result1,
)
from .relations import (
    CategoryStructure,
    Domain,
    InputError,
    Relation,
    categories,
    order_isomorphic,
    validate_asymmetric,
)
from .storage import (
    StoragePlan,
    binary_always_optimal,
    decode,
    encode,
    optimal_bases,
    storage_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CategoryStructure",
    "ChoiceFunction",
    "CostModel",
    "CriteriaSet",
    "Domain",
    "Efficiency",
    "EfficiencyPoint",
    "InputError",
    "Relation",
    "StoragePlan",
    "Tournament",
    "WeakOrder",
    "WeightProfile",
    "aggregate_choice",
    "binary_always_optimal",
    "binary_condition",
    "build_max_choice",
    "categories",
    "choice_classes",
    "coarseness_dominates",
    "condorcet_consistent",
    "decode",
    "discrimination_partition",
    "discrimination_vector",
    "encode",
    "find_condorcet_cycle",
    "frontier",
    "maximally_categorizes",
    "maximally_discriminates",
    "more_efficient",
    "n_classes",
    "optimal_bases",
    "order_isomorphic",
    "order_isomorphism_property",
    "product_representation",
    "rationalizable",
    "restricted_order",
    "set_cost",
    "storage_cost",
    "theorem_check",
    "uses",
    "validate_asymmetric",
    "verify_result1",
    "weighted_tournament",
]
