"""Finite sets of 64-bit integers and their sums and differences.

Sets are immutable sorted tuples. Sumsets and difference sets have two
routes: a bitmap route (shift-or over an offset bitmask, used while the
operand diameters stay under ``BITMAP_MAX_DIAMETER``) and a plain pair
enumeration route. The pair route is kept public as the reference the
bitmap route is tested against.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence

from .errors import ArithmeticOverflow, InvalidArgument, InvalidDilation

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

BITMAP_MAX_DIAMETER = 1 << 20


def check_int64(value: int, what: str = "value") -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise ArithmeticOverflow(f"{what} {value} outside signed 64-bit range")
    return value


class IntSet:
    """Immutable finite set of 64-bit integers, stored sorted."""

    __slots__ = ("_elements", "_members")

    def __init__(self, elements: Iterable[int] = ()):
        elems = sorted({int(e) for e in elements})
        for e in elems[:1] + elems[-1:]:
            check_int64(e, "element")
        self._elements = tuple(elems)
        self._members = None

    @classmethod
    def _trusted(cls, sorted_unique: Sequence[int]) -> "IntSet":
        obj = cls.__new__(cls)
        obj._elements = tuple(sorted_unique)
        obj._members = None
        return obj

    @classmethod
    def from_mask(cls, mask: int, offset: int = 0) -> "IntSet":
        return cls._trusted([offset + i for i in bits_of(mask)])

    @property
    def elements(self) -> tuple[int, ...]:
        return self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self._elements)

    def __contains__(self, x: object) -> bool:
        if self._members is None:
            self._members = frozenset(self._elements)
        return x in self._members

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntSet):
            return self._elements == other._elements
        return NotImplemented

    def __lt__(self, other: "IntSet") -> bool:
        return self._elements < other._elements

    def __hash__(self) -> int:
        return hash(self._elements)

    def __repr__(self) -> str:
        return f"IntSet({format_set(self)})"

    def __str__(self) -> str:
        return format_set(self)

    @property
    def min(self) -> int:
        if not self._elements:
            raise InvalidArgument("empty set has no minimum")
        return self._elements[0]

    @property
    def max(self) -> int:
        if not self._elements:
            raise InvalidArgument("empty set has no maximum")
        return self._elements[-1]

    @property
    def diameter(self) -> int:
        return self.max - self.min if self._elements else 0

    def to_mask(self) -> tuple[int, int]:
        """Return ``(mask, offset)`` with bit ``a - offset`` set for each element ``a``."""
        if not self._elements:
            return 0, 0
        lo = self._elements[0]
        mask = 0
        for a in self._elements:
            mask |= 1 << (a - lo)
        return mask, lo


def bits_of(mask: int) -> list[int]:
    """Positions of the set bits of a nonnegative int, ascending."""
    out = []
    if mask < (1 << 4096):
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out
    # long masks: scan the binary string once instead of repeated big-int ops
    s = bin(mask)[:1:-1]
    i = s.find("1")
    while i >= 0:
        out.append(i)
        i = s.find("1", i + 1)
    return out


@dataclass(frozen=True)
class SetStats:
    cardinality: int
    sum_card: int
    diff_card: int
    min: Optional[int]
    max: Optional[int]
    diameter: int


# ---------------------------------------------------------------- transforms

def translate(A: IntSet, x: int) -> IntSet:
    out = []
    for a in A:
        r = a + x
        if not INT64_MIN <= r <= INT64_MAX:
            raise ArithmeticOverflow(f"translating element {a} by {x} overflows")
        out.append(r)
    return IntSet._trusted(out)


def dilate(A: IntSet, y: int) -> IntSet:
    if y == 0:
        raise InvalidDilation("dilation factor must be nonzero")
    out = []
    for a in A:
        r = a * y
        if not INT64_MIN <= r <= INT64_MAX:
            raise ArithmeticOverflow(f"dilating element {a} by {y} overflows")
        out.append(r)
    if y < 0:
        out.reverse()
    return IntSet._trusted(out)


def affine_image(A: IntSet, x: int, y: int) -> IntSet:
    """The set ``x + y*A``."""
    return translate(dilate(A, y), x)


# ------------------------------------------------------- sums and differences

def _bitmap_ok(A: IntSet, B: IntSet, threshold: int) -> bool:
    return A.diameter <= threshold and B.diameter <= threshold


def _result_range(lo: int, hi: int, op: str) -> None:
    if lo < INT64_MIN or hi > INT64_MAX:
        bad = lo if lo < INT64_MIN else hi
        raise ArithmeticOverflow(f"{op} produces {bad}, outside signed 64-bit range")


def sumset(A: IntSet, B: IntSet, threshold: int = BITMAP_MAX_DIAMETER) -> IntSet:
    """``{a + b : a in A, b in B}``."""
    if not len(A) or not len(B):
        return IntSet()
    _result_range(A.min + B.min, A.max + B.max, "sumset")
    if not _bitmap_ok(A, B, threshold):
        return sumset_pairs(A, B)
    if len(B) > len(A):
        A, B = B, A
    mask, lo = A.to_mask()
    acc = 0
    for b in B:
        acc |= mask << (b - B.min)
    return IntSet.from_mask(acc, lo + B.min)


def diffset(A: IntSet, B: IntSet, threshold: int = BITMAP_MAX_DIAMETER) -> IntSet:
    """``{a - b : a in A, b in B}``."""
    if not len(A) or not len(B):
        return IntSet()
    _result_range(A.min - B.max, A.max - B.min, "difference set")
    if not _bitmap_ok(A, B, threshold):
        return diffset_pairs(A, B)
    mask, lo = A.to_mask()
    acc = 0
    for b in B:
        acc |= mask << (B.max - b)
    return IntSet.from_mask(acc, lo - B.max)


def sumset_pairs(A: IntSet, B: IntSet) -> IntSet:
    out = set()
    for a in A:
        for b in B:
            out.add(check_int64(a + b, f"sum {a}+{b}"))
    return IntSet._trusted(sorted(out))


def diffset_pairs(A: IntSet, B: IntSet) -> IntSet:
    out = set()
    for a in A:
        for b in B:
            out.add(check_int64(a - b, f"difference {a}-{b}"))
    return IntSet._trusted(sorted(out))


def mask_cards(mask: int) -> tuple[int, int]:
    """``(|A+A|, |A-A|)`` for the set whose bitmask is ``mask``.

    Hot path of the census. Only nonnegative differences are accumulated;
    the difference set is symmetric so the full count is ``2*d - 1``.
    """
    if not mask:
        return 0, 0
    s = 0
    d = 0
    m = mask
    while m:
        low = m & -m
        a = low.bit_length() - 1
        s |= mask << a
        d |= mask >> a
        m ^= low
    return s.bit_count(), 2 * d.bit_count() - 1


def stats(A: IntSet) -> SetStats:
    if not len(A):
        return SetStats(0, 0, 0, None, None, 0)
    return SetStats(
        cardinality=len(A),
        sum_card=len(sumset(A, A)),
        diff_card=len(diffset(A, A)),
        min=A.min,
        max=A.max,
        diameter=A.diameter,
    )


# ------------------------------------------------------------ normal forms

def symmetry_center(A: IntSet) -> Optional[int]:
    """Return ``z`` with ``A = z - A``, or None. Only ``min + max`` can work."""
    if not len(A):
        raise InvalidArgument("symmetry center of the empty set is undefined")
    z = A.min + A.max
    elems = A.elements
    n = len(elems)
    for i in range(n // 2 + 1):
        if elems[i] + elems[n - 1 - i] != z:
            return None
    return z


def affine_canonical(A: IntSet) -> IntSet:
    """Shift to minimum 0 and divide by the gcd of the shifted elements."""
    if len(A) < 2:
        raise InvalidArgument("affine canonical form needs at least two elements")
    lo = A.min
    shifted = [a - lo for a in A]
    g = reduce(math.gcd, shifted)
    return IntSet._trusted([s // g for s in shifted])


def is_affine_canonical(A: IntSet) -> bool:
    return len(A) >= 2 and A.min == 0 and reduce(math.gcd, A.elements) == 1


# ---------------------------------------------------------------- text I/O

_LITERAL = re.compile(r"^\{(.*)\}$", re.S)


def parse_set(text: str) -> IntSet:
    """Parse ``{0, 2, 3}``. Whitespace is ignored; duplicates are rejected."""
    compact = "".join(text.split())
    m = _LITERAL.match(compact)
    if m is None:
        raise InvalidArgument(f"malformed set literal {text!r}: expected {{a,b,...}}")
    body = m.group(1)
    if not body:
        return IntSet()
    try:
        values = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise InvalidArgument(f"malformed set literal {text!r}: non-integer entry") from None
    seen = set()
    for v in values:
        if v in seen:
            raise InvalidArgument(f"duplicate element {v} in set literal")
        seen.add(v)
    return IntSet(values)


def format_set(A: Iterable[int]) -> str:
    return "{" + ",".join(str(a) for a in A) + "}"


def set_from_json(data: object) -> IntSet:
    if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
        raise InvalidArgument("set JSON must be an array of integers")
    if any(b <= a for a, b in zip(data, data[1:])):
        raise InvalidArgument("set JSON must be strictly increasing")
    return IntSet(data)


def set_to_json(A: IntSet) -> list[int]:
    return list(A.elements)
