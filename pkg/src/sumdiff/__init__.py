"""Exact sums, differences, form images and representation functions of finite integer sets."""

__version__ = "0.1.0"

from .errors import SumdiffError  # noqa: E402
from .intset import (  # noqa: E402
    IntSet,
    SetStats,
    affine_canonical,
    dilate,
    diffset,
    format_set,
    parse_set,
    stats,
    sumset,
    symmetry_center,
    translate,
)
from .mstd import COUNTEREXAMPLE, LiftParams, SdClass, classify, lift, ratio_sequence, search_min_mstd  # noqa: E402
from .census import CensusResult  # noqa: E402
