"""Core graphs for finitely generated subgroups of free groups.

Construction by folding, membership and index, Schreier bases, Hall
completions, deck transformations and intermediate covering lattices,
intersections and joins via pullbacks and pushouts, and rank bounds for
intersections in the style of the strengthened Hanna Neumann inequality.
"""

from .core import (
    LabeledCore,
    core_from_action,
    core_from_words,
    covering_to_core,
    hall_complete,
    parse_core,
    random_complete_core,
    random_core,
    write_core,
)
from .covering import (
    Covering,
    GraphMorphism,
    check_covering,
    degree,
    excise_trees,
    factor_through,
    lift_path,
    universal_ball,
)
from .errors import DomainError, ParseError, RankMismatchError, StallingsError
from .galois import (
    DeckGroup,
    deck_group,
    intermediate_lattice,
    is_galois,
    quotient_by_deck,
)
from .hn import (
    HNProfile,
    chain_of_loops,
    classical_bounds,
    excise_and_profile,
    hn_bound_rhs,
    hn_profile,
    shn_report,
)
from .lattice import (
    component_report,
    double_coset_tags,
    intersect,
    join,
    pullback,
)
from .graph import (
    Graph,
    Path,
    components,
    quotient,
    rank_and_homology,
    reduce_path,
    rose,
    spanning_forest,
    spine,
    validate_graph,
    wedge,
)
from .words import Word, concat, conjugate, fmt, free_reduce, inverse, parse

__all__ = [
    "Covering",
    "DeckGroup",
    "DomainError",
    "Graph",
    "GraphMorphism",
    "HNProfile",
    "LabeledCore",
    "ParseError",
    "Path",
    "RankMismatchError",
    "StallingsError",
    "Word",
    "chain_of_loops",
    "check_covering",
    "classical_bounds",
    "component_report",
    "components",
    "concat",
    "conjugate",
    "core_from_action",
    "core_from_words",
    "covering_to_core",
    "deck_group",
    "degree",
    "double_coset_tags",
    "excise_and_profile",
    "excise_trees",
    "factor_through",
    "fmt",
    "free_reduce",
    "hall_complete",
    "hn_bound_rhs",
    "hn_profile",
    "intermediate_lattice",
    "intersect",
    "inverse",
    "is_galois",
    "join",
    "lift_path",
    "parse",
    "parse_core",
    "pullback",
    "quotient",
    "quotient_by_deck",
    "random_complete_core",
    "random_core",
    "rank_and_homology",
    "reduce_path",
    "rose",
    "shn_report",
    "spanning_forest",
    "spine",
    "universal_ball",
    "validate_graph",
    "wedge",
    "write_core",
]
