"""Linear forms evaluated over finite sets.

For a form ``f(x, y) = u*x + v*y`` and a finite set ``A`` the image is
``f(A) = {f(a, a') : a, a' in A}``. Images are computed by direct
enumeration into a hash set; coefficients stretch diameters, so the bitmap
route used for plain sumsets does not pay off here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .errors import BudgetExceeded, InternalError, InvalidArgument, InvalidForm
from .intset import IntSet, check_int64, symmetry_center
from .mstd import canonical_masks

DEFAULT_TUPLE_BUDGET = 10**8


@dataclass(frozen=True)
class BinaryForm:
    u: int
    v: int

    def __post_init__(self):
        if self.u == 0 or self.v == 0:
            raise InvalidForm(f"binary form needs nonzero coefficients, got ({self.u}, {self.v})")

    def __call__(self, x: int, y: int) -> int:
        return self.u * x + self.v * y

    def __str__(self) -> str:
        sign = "+" if self.v > 0 else "-"
        return f"{self.u}x {sign} {abs(self.v)}y"

    @property
    def is_normalized(self) -> bool:
        return self.u >= abs(self.v) >= 1 and math.gcd(self.u, self.v) == 1


class NormalizedBinaryForm(BinaryForm):
    def __post_init__(self):
        super().__post_init__()
        if not self.is_normalized:
            raise InvalidForm(f"({self.u}, {self.v}) violates u >= |v| >= 1, gcd(u, v) = 1")


SUM = NormalizedBinaryForm(1, 1)
DIFF = NormalizedBinaryForm(1, -1)


@dataclass(frozen=True)
class NaryForm:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) < 2:
            raise InvalidForm("an n-ary form needs at least two coefficients")
        if any(c == 0 for c in self.coeffs):
            raise InvalidForm(f"coefficients must be nonzero, got {self.coeffs}")


def normalize_steps(f: BinaryForm) -> list[tuple[int, int]]:
    """The chain ``f0, f1, f2, f3`` of the reduction (gcd, swap, sign)."""
    u0, v0 = f.u, f.v
    d = math.gcd(u0, v0)
    u1, v1 = u0 // d, v0 // d
    u2, v2 = (v1, u1) if abs(u1) < abs(v1) else (u1, v1)
    u3, v3 = (-u2, -v2) if u2 < 0 else (u2, v2)
    return [(u0, v0), (u1, v1), (u2, v2), (u3, v3)]


def normalize(f: BinaryForm) -> NormalizedBinaryForm:
    u, v = normalize_steps(f)[-1]
    return NormalizedBinaryForm(u, v)


def eval_form(f: BinaryForm, A: IntSet) -> IntSet:
    u, v = f.u, f.v
    out = set()
    for a in A:
        ua = check_int64(u * a, f"{u}*{a}")
        for b in A:
            out.add(check_int64(ua + check_int64(v * b, f"{v}*{b}"), f"f({a},{b})"))
    return IntSet._trusted(sorted(out))


def image_card(f: BinaryForm, A: IntSet) -> int:
    return len(eval_form(f, A))


def eval_nary(f: NaryForm, A: IntSet, budget: int = DEFAULT_TUPLE_BUDGET) -> IntSet:
    """``{sum c_i a_i : a_i in A}``, built one coefficient at a time.

    The budget guards the nominal ``|A|^n`` tuple count even though partial
    images collapse duplicates as they go.
    """
    needed = len(A) ** len(f.coeffs)
    if needed > budget:
        raise BudgetExceeded("tuple budget (|A|^n)", needed, budget)
    if not len(A):
        return IntSet()
    partial = {0}
    for c in f.coeffs:
        scaled = [check_int64(c * a, f"{c}*{a}") for a in A]
        partial = {check_int64(s + t, "partial sum") for s in partial for t in scaled}
    return IntSet._trusted(sorted(partial))


# ------------------------------------------------------------------ witnesses

def orosz_witnesses(u: int, v: int) -> tuple[IntSet, IntSet]:
    """Sets ``A``, ``B`` separating ``ux + vy`` from ``ux - vy`` in both directions.

    Needs ``u > v >= 1`` and ``gcd(u, v) = 1``. For ``u = 2`` fixed sets are used.
    """
    if not (u > v >= 1) or math.gcd(u, v) != 1:
        raise InvalidArgument(f"need u > v >= 1 with gcd(u, v) = 1, got ({u}, {v})")
    if u == 2:
        A = IntSet([0, 3, 4, 6])
        B = IntSet([0, 4, 6, 7])
    else:
        uu, vv, uv = u * u, v * v, u * v
        A = IntSet([0, uu - vv, uu, uu + uv])
        B = IntSet([0, uu - uv, uu - vv, uu])
    f, g = BinaryForm(u, v), BinaryForm(u, -v)
    if not (image_card(f, A) > image_card(g, A) and image_card(f, B) < image_card(g, B)):
        raise InternalError(f"witness check failed for ({u}, {v})")
    return A, B


# ------------------------------------------------------------------- triples

@dataclass
class TripleResult:
    A: Optional[IntSet]
    B: Optional[IntSet]
    C: Optional[IntSet]
    examined: int
    exhaustive: bool

    def complete(self) -> bool:
        return self.A is not None and self.B is not None and self.C is not None


def find_triple(
    f: BinaryForm,
    g: BinaryForm,
    max_diam: int,
    max_card: int,
    budget: int = 10**7,
) -> TripleResult:
    """Search affine-canonical sets for ``|f|>|g|``, ``|f|<|g|`` and ``|f|=|g|`` witnesses.

    Candidates run by diameter, then cardinality, then lexicographically; the
    first hit fills each slot. Every returned set is re-checked.
    """
    nf, ng = normalize(f), normalize(g)
    if nf == ng:
        raise InvalidArgument(f"{f} and {g} normalize to the same form {nf}")
    if max_card < 2:
        raise InvalidArgument("max_card must be at least 2")
    slots: dict[str, Optional[IntSet]] = {"A": None, "B": None, "C": None}
    examined = 0
    exhaustive = True
    seed_symmetric = {nf, ng} == {SUM, DIFF}
    for mask in canonical_masks(max_card, max_diam):
        if all(slots.values()):
            break
        if examined >= budget:
            exhaustive = False
            break
        examined += 1
        S = IntSet.from_mask(mask)
        if seed_symmetric and slots["C"] is None and symmetry_center(S) is not None:
            slots["C"] = S
            if slots["A"] is not None and slots["B"] is not None:
                break
        cf, cg = image_card(nf, S), image_card(ng, S)
        key = "A" if cf > cg else "B" if cf < cg else "C"
        if slots[key] is None:
            slots[key] = S
    _verify_triple(nf, ng, slots)
    return TripleResult(slots["A"], slots["B"], slots["C"], examined, exhaustive)


def _verify_triple(f: BinaryForm, g: BinaryForm, slots: dict) -> None:
    checks = {"A": lambda a, b: a > b, "B": lambda a, b: a < b, "C": lambda a, b: a == b}
    for key, S in slots.items():
        if S is None:
            continue
        if not checks[key](image_card(f, S), image_card(g, S)) or (key == "C" and len(S) < 2):
            raise InternalError(f"slot {key} witness {S} does not verify")


def parse_coeffs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InvalidArgument(f"malformed coefficient list {text!r}") from None
