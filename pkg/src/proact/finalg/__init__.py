"""Finite groups, rings and Lie algebras as dense operation tables."""

from .constructions import (
    SplitExtension,
    Unitalization,
    abelianize,
    classical_semidirect,
    direct_product,
    direct_sum_extension,
    ideal_closure_mask,
    image_mask,
    quotient_by_ideal_closure,
    quotient_by_kernel_seeds,
    quotient_by_normal_closure,
    subring_generated,
    substructure,
    unitalize_mod_m,
    zmod_ring,
)
from .homs import count_homs, enumerate_homs, find_isomorphism
from .structures import (
    FinGroup,
    FinLieAlg,
    FinRng,
    FinSet,
    Hom,
    additive_group,
    identity_hom,
    neutral,
    same_structure,
)
from .tensor import abelian_group, cyclic_decomposition, tensor_abelian
from .words import free_object_words

__all__ = [
    "FinGroup",
    "FinLieAlg",
    "FinRng",
    "FinSet",
    "Hom",
    "SplitExtension",
    "Unitalization",
    "abelian_group",
    "abelianize",
    "additive_group",
    "classical_semidirect",
    "count_homs",
    "cyclic_decomposition",
    "direct_product",
    "direct_sum_extension",
    "enumerate_homs",
    "find_isomorphism",
    "free_object_words",
    "ideal_closure_mask",
    "identity_hom",
    "image_mask",
    "neutral",
    "quotient_by_ideal_closure",
    "quotient_by_kernel_seeds",
    "quotient_by_normal_closure",
    "same_structure",
    "subring_generated",
    "substructure",
    "tensor_abelian",
    "unitalize_mod_m",
    "zmod_ring",
]
