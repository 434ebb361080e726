"""Maximum edge-disjoint T-paths and integer free multiflows with
min-max certificates."""

from .augment import augment, augment_flow
from .graph import (InvalidInstance, MultiGraph, Multiflow, Network, TPath, TSubpartition,
                    boundary_degree, components_outside, kappa, validate_tpath)
from .labeled import build_auxiliary, build_auxiliary_flow, gamma, is_augmenting
from .search import Exhausted, find_augmenting_walk
from .solver import (extract_certificate, max_edge_disjoint_tpaths, max_integer_multiflow,
                     verify)

__all__ = [
    "Exhausted", "InvalidInstance", "MultiGraph", "Multiflow", "Network", "TPath",
    "TSubpartition", "augment", "augment_flow", "boundary_degree", "build_auxiliary",
    "build_auxiliary_flow", "components_outside", "extract_certificate",
    "find_augmenting_walk", "gamma", "is_augmenting", "kappa", "max_edge_disjoint_tpaths",
    "max_integer_multiflow", "validate_tpath", "verify",
]
