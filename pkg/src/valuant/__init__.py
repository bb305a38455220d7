"""valuant: exact valuation-theoretic invariants of simple extensions of
explicitly presented valued fields."""

from .value import INFINITY, Value
from .fields import QQ, ExtensionField, FractionField, PrimeField
from .poly import Poly, poly_arith, resultant
from .basefield import PAdicField, TAdicField
from .tower import Tower, TowerElement, element_arith, extension_invariants
from .newton import NewtonPolygon, RootValuationMultiset, lower_hull, root_valuations
from .invariants import (
    DistanceProfile,
    EpsilonReport,
    PolyValuation,
    abstract_key_check,
    distances,
    epsilon_report,
    hasse_schmidt,
    j_invariant,
    pair_valuation_eval,
    truncation_eval,
)
from .maclane import AugmentedChain, MacLaneResult, approximate, chain_eval, depth_of
from .ramify import (
    CutDescriptor,
    CutIdeal,
    GroupModel,
    UNIT,
    count_ram,
    ideal_of_subgroup,
    valuation_basis_check,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "Value",
    "QQ",
    "PrimeField",
    "FractionField",
    "ExtensionField",
    "Poly",
    "poly_arith",
    "resultant",
    "TAdicField",
    "PAdicField",
    "Tower",
    "TowerElement",
    "element_arith",
    "extension_invariants",
    "NewtonPolygon",
    "RootValuationMultiset",
    "lower_hull",
    "root_valuations",
    "DistanceProfile",
    "EpsilonReport",
    "PolyValuation",
    "distances",
    "j_invariant",
    "hasse_schmidt",
    "epsilon_report",
    "pair_valuation_eval",
    "truncation_eval",
    "abstract_key_check",
    "AugmentedChain",
    "MacLaneResult",
    "approximate",
    "chain_eval",
    "depth_of",
    "GroupModel",
    "CutIdeal",
    "CutDescriptor",
    "UNIT",
    "ideal_of_subgroup",
    "count_ram",
    "valuation_basis_check",
]
