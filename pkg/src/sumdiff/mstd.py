"""Sum-dominance classification, the base-m lifting family and the minimal-set search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Optional

from .errors import ArithmeticOverflow, InternalError, InvalidArgument, PreconditionViolation
from .intset import (
    INT64_MAX,
    IntSet,
    diffset,
    diffset_pairs,
    mask_cards,
    sumset,
    sumset_pairs,
)

COUNTEREXAMPLE = IntSet([0, 2, 3, 4, 7, 11, 12, 14])


class SdClass(str, Enum):
    SUM_DOMINANT = "sum-dominant"
    BALANCED = "balanced"
    DIFF_DOMINANT = "difference-dominant"

    @classmethod
    def from_cards(cls, sum_card: int, diff_card: int) -> "SdClass":
        if sum_card > diff_card:
            return cls.SUM_DOMINANT
        if sum_card < diff_card:
            return cls.DIFF_DOMINANT
        return cls.BALANCED


def classify(A: IntSet) -> SdClass:
    return SdClass.from_cards(len(sumset(A, A)), len(diffset(A, A)))


def classify_pairs(A: IntSet) -> SdClass:
    """Same as :func:`classify` but through plain pair enumeration."""
    return SdClass.from_cards(len(sumset_pairs(A, A)), len(diffset_pairs(A, A)))


def classify_mask(mask: int) -> SdClass:
    return SdClass.from_cards(*mask_cards(mask))


# ------------------------------------------------------------------ lifting

@dataclass(frozen=True)
class LiftParams:
    m: int
    t: int

    def __post_init__(self):
        if self.m < 1 or self.t < 1:
            raise InvalidArgument(f"lift needs positive m and t, got m={self.m}, t={self.t}")


def lift(A: IntSet, p: LiftParams) -> IntSet:
    """All ``t``-digit base-``m`` numbers whose digits are drawn from ``A``.

    Restricted to nonnegative ``A``; requires ``m > 2*max(A)`` so that
    sums and differences of digit strings never carry.
    """
    if not len(A):
        raise InvalidArgument("cannot lift the empty set")
    if A.min < 0:
        raise PreconditionViolation("lift is implemented for nonnegative sets only")
    if p.m <= 2 * A.max:
        raise PreconditionViolation(f"base m={p.m} must exceed 2*max(A)={2 * A.max}")
    if p.m ** p.t > INT64_MAX:
        raise ArithmeticOverflow(f"m^t = {p.m}^{p.t} does not fit in 64 bits")
    current = [0]
    place = 1
    for _ in range(p.t):
        current = [c + a * place for a in A for c in current]
        place *= p.m
    return IntSet(current)


def ratio_sequence(A: IntSet, t_max: int, m: int) -> list[tuple[int, int]]:
    """``(|A_t+A_t|, |A_t-A_t|)`` for ``t = 1..t_max``, computed on the lifted sets.

    Each pair is checked against the ``t``-th powers of the base counts.
    """
    if t_max < 1:
        raise InvalidArgument("t_max must be at least 1")
    base_s, base_d = len(sumset(A, A)), len(diffset(A, A))
    out = []
    for t in range(1, t_max + 1):
        At = lift(A, LiftParams(m, t))
        s, d = len(sumset(At, At)), len(diffset(At, At))
        if (s, d) != (base_s ** t, base_d ** t):
            raise InternalError(f"power identity failed at t={t}: {(s, d)} vs {(base_s ** t, base_d ** t)}")
        out.append((s, d))
    return out


# Generators of parametrized families. Each takes a source set and keyword
# parameters and returns a new set; users may register their own.
FamilyGenerator = Callable[..., IntSet]
FAMILIES: dict[str, FamilyGenerator] = {
    "base-m": lambda A, m, t: lift(A, LiftParams(m, t)),
}


def register_family(name: str, generator: FamilyGenerator) -> None:
    if name in FAMILIES:
        raise InvalidArgument(f"family {name!r} already registered")
    FAMILIES[name] = generator


# ------------------------------------------------------------------- search

@dataclass
class SearchResult:
    sets: list[IntSet]
    examined: int
    exhaustive: bool
    bounds: dict = field(default_factory=dict)


def canonical_masks(max_card: int, max_diam: int, min_card: int = 2):
    """Yield bitmasks of affine-canonical sets (min 0, max = diameter, gcd 1).

    Order: diameter, then cardinality, then lexicographic element order.
    """
    for d in range(1, max_diam + 1):
        top = 1 | (1 << d)
        for k in range(max(min_card, 2), min(max_card, d + 1) + 1):
            for inner in combinations(range(1, d), k - 2):
                if math.gcd(d, *inner) != 1:
                    continue
                mask = top
                for i in inner:
                    mask |= 1 << i
                yield mask


def search_min_mstd(max_card: int, max_diam: int, budget: int = 10**8) -> SearchResult:
    """All affine-canonical sum-dominant sets with ``|A| <= max_card`` and diameter ``<= max_diam``.

    Sorted by (cardinality, diameter, elements). When the result is exhaustive
    an empty list certifies there is none inside the bounds.
    """
    if budget < 1:
        raise InvalidArgument("budget must be positive")
    found = []
    examined = 0
    exhaustive = True
    for mask in canonical_masks(max_card, max_diam):
        if examined >= budget:
            exhaustive = False
            break
        examined += 1
        s, d = mask_cards(mask)
        if s > d:
            found.append(IntSet.from_mask(mask))
    found.sort(key=lambda A: (len(A), A.max, A.elements))
    return SearchResult(found, examined, exhaustive, {"max_card": max_card, "max_diam": max_diam, "budget": budget})
