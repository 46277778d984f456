"""Normalization and strictification of group and ring actions with shifted indices."""

from .certificate import group_certificate, verify_certificate
from .compare import (
    compare_extensions,
    compare_through,
    conjugate_comparison,
    protomodularity_check,
    relabelled_extension,
    verify_action_bijection_smoke,
)
from .demos import order_n_demo, pairing_shift
from .group import (
    GroupStrictification,
    NormalizedGroupAction,
    ShiftedGroupAction,
    build_split_extension_tower,
    normalize_group_action,
    strictify_group_action,
)
from .ring import (
    FLAVORS,
    NonunitalStrictification,
    NormalizedRingAction,
    RingStrictification,
    ShiftedRingAction,
    commutative_ring_action,
    normalize_ring_action,
    ring_certificate,
    strictify_algebra_action,
    strictify_nonunital_action,
    strictify_ring,
    strictify_unital_ring_action,
    unital_ring_action,
)

__all__ = [
    "FLAVORS",
    "GroupStrictification",
    "NonunitalStrictification",
    "NormalizedGroupAction",
    "NormalizedRingAction",
    "RingStrictification",
    "ShiftedGroupAction",
    "ShiftedRingAction",
    "build_split_extension_tower",
    "commutative_ring_action",
    "compare_extensions",
    "compare_through",
    "conjugate_comparison",
    "group_certificate",
    "normalize_group_action",
    "normalize_ring_action",
    "order_n_demo",
    "pairing_shift",
    "protomodularity_check",
    "relabelled_extension",
    "ring_certificate",
    "strictify_algebra_action",
    "strictify_group_action",
    "strictify_nonunital_action",
    "strictify_ring",
    "strictify_unital_ring_action",
    "unital_ring_action",
    "verify_action_bijection_smoke",
    "verify_certificate",
]
