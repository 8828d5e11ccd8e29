"""Symbolic socles and irreducibility for parabolic inductions of p-adic classical groups."""

from .core import CuspidalLabel, GroupType, HalfInt, Segment, dual_dimension_of, is_good_parity, segments_linked

__all__ = [
    "CuspidalLabel",
    "GroupType",
    "HalfInt",
    "Segment",
    "dual_dimension_of",
    "is_good_parity",
    "segments_linked",
]
