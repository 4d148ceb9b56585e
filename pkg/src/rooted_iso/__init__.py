"""Exact computations with isometries of spherically homogeneous rooted trees."""

from .isometry import (
    IsoGenerator,
    Portrait,
    apply,
    compose,
    conjugate,
    evaluate,
    inverse,
    order_at_level,
    power,
    truncate,
)
from .orbit import CanonCode, OrbitTree, canonical_code, conjugate_in_iso, find_conjugator, orbit_tree
from .tree import CapacityError, ValencySeq, children, layer

__all__ = [
    "CanonCode",
    "CapacityError",
    "IsoGenerator",
    "OrbitTree",
    "Portrait",
    "ValencySeq",
    "apply",
    "canonical_code",
    "children",
    "compose",
    "conjugate",
    "conjugate_in_iso",
    "evaluate",
    "find_conjugator",
    "inverse",
    "layer",
    "orbit_tree",
    "order_at_level",
    "power",
    "truncate",
]
