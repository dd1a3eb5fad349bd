"""Rare-event relations and symbolic ternary metrics on phylogenetic trees."""
from .errors import *  # noqa: F401,F403
from .tree import (Tree, canonical_form, contract_edge, lca, median, parse_tree,  # noqa: F401
                   path_between, restrict_display, serialize_tree)
from .relations import (EventRelation, admissible_rooted_trees, build_quotient,  # noqa: F401
                        central_vertices, derive_relation, enumerate_binary, expand_classes,
                        explains, is_least_resolved, minimally_resolved_component,
                        minimally_resolved_forest, reconstruct)
from .ternary import (TernaryMap, check_metric, classify_k5, derive_ternary,  # noqa: F401
                      equivalence_classes, generate_quartets, is_fully_resolved,
                      partition_signature)
from .quartets import (QuartetSystem, check_properties, displayed_quartets,  # noqa: F401
                       tree_from_quartets)

__version__ = "0.1.0"
