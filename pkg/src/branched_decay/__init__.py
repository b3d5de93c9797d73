"""Rooted-tree Hopf algebra, branched rough paths and factorial decay checks."""

from .character import (COUNIT, Character, IdentityCharacter, NormParams, StarProduct,
                        TabulatedCharacter, forest_norm, is_character, random_character,
                        star, tree_norm)
from .constants import Constants, zeta
from .extension import ExtendedPath, Partition, TruncatedPath, extend, partition_sum
from .hopf import (CutTerm, HopfElement, coproduct_forest, coproduct_tree, tree_binomial)
from .lift import (IdentityPath, NonConvergenceError, PathData, lift_polynomial, lift_young,
                   weierstrass_path)
from .report import CheckReport
from .trees import (EMPTY, Forest, RootedTree, bushy, count_trees, enumerate_forests,
                    enumerate_trees, ladder, parse_forest, parse_tree, single_vertex)

__version__ = "0.1.0"

__all__ = [
    "COUNIT", "Character", "CheckReport", "Constants", "CutTerm", "EMPTY", "ExtendedPath",
    "Forest", "HopfElement", "IdentityCharacter", "IdentityPath", "NonConvergenceError",
    "NormParams", "Partition", "PathData", "RootedTree", "StarProduct", "TabulatedCharacter",
    "TruncatedPath", "bushy", "coproduct_forest", "coproduct_tree", "count_trees",
    "enumerate_forests", "enumerate_trees", "extend", "forest_norm", "is_character",
    "ladder", "lift_polynomial", "lift_young", "parse_forest", "parse_tree",
    "partition_sum", "random_character", "single_vertex", "star", "tree_binomial",
    "tree_norm", "weierstrass_path", "zeta",
]
