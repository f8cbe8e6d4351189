"""Representation functions ``r_{A,h}(n)`` and counting functions of finite sets.

``r_{A,h}(n)`` counts nondecreasing ``h``-tuples from ``A`` with sum ``n``,
i.e. multisets of size ``h``. Profiles are computed from power-sum
convolutions ``P(x^j)`` via the Newton recurrence
``h * H_h = sum_{j=1..h} P(x^j) * H_{h-j}``, which turns ordered-tuple
convolution counts into multiset counts exactly.
"""

from __future__ import annotations

import bisect
import json
import os
import warnings
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterator, Optional, Union

import numpy as np

from .errors import BudgetExceeded, InternalError, InvalidArgument, UnsupportedOrder
from .intset import IntSet, check_int64

INF = "inf"
DEFAULT_PROFILE_LIMIT = 10**7

TargetValue = Union[int, str]


# ------------------------------------------------------------- counting

def rep_count(A: IntSet, h: int, n: int) -> int:
    """Number of nondecreasing ``h``-tuples from ``A`` summing to ``n`` (direct enumeration)."""
    if h < 1:
        raise InvalidArgument(f"order h must be at least 1, got {h}")
    elems = A.elements
    if not elems:
        return 0
    lo, hi = elems[0], elems[-1]

    def count(start: int, remaining: int, target: int) -> int:
        if remaining == 0:
            return 1 if target == 0 else 0
        total = 0
        for i in range(start, len(elems)):
            a = elems[i]
            # every later choice is >= a
            if a * remaining > target:
                break
            if target - a > hi * (remaining - 1):
                continue
            total += count(i, remaining - 1, check_int64(target - a, "partial sum"))
        return total

    if not h * lo <= n <= h * hi:
        return 0
    return count(0, h, n)


def rep_enumerate(A: IntSet, h: int) -> dict[int, int]:
    """Full profile by listing every nondecreasing tuple. Reference for :func:`rep_profile`."""
    out: dict[int, int] = {}
    for tup in combinations_with_replacement(A.elements, h):
        s = check_int64(sum(tup), "tuple sum")
        out[s] = out.get(s, 0) + 1
    return out


@dataclass
class RepProfile:
    h: int
    lo: int
    hi: int
    counts: dict[int, int]

    def values(self) -> list[int]:
        return [self.counts.get(n, 0) for n in range(self.lo, self.hi + 1)]

    def support(self) -> list[int]:
        return [n for n, c in sorted(self.counts.items()) if c]


def _dense_multiset_counts(A: IntSet, h: int) -> tuple[int, list[int]]:
    """Multiset-count polynomial ``H_h`` as ``(offset, coefficients)``."""
    lo = A.min
    shifted = [a - lo for a in A.elements]
    diam = A.diameter
    # every intermediate coefficient is at most h*|A|^h
    dtype = np.int64 if h * len(A) ** h < (1 << 62) else object

    def power_sum(j: int) -> np.ndarray:
        p = np.zeros(j * diam + 1, dtype=dtype)
        for s in shifted:
            p[j * s] += 1
        return p

    P = [None] + [power_sum(j) for j in range(1, h + 1)]
    H = [np.ones(1, dtype=dtype)]
    for order in range(1, h + 1):
        acc = np.zeros(order * diam + 1, dtype=dtype)
        for j in range(1, order + 1):
            # ordered convolution of one j-fold diagonal with H_{order-j}
            conv = np.convolve(P[j], H[order - j])
            acc[: len(conv)] += conv
        if any(int(c) % order for c in acc):
            raise InternalError("multiset correction left a non-integer count")
        H.append(acc // order)
    return h * lo, [int(c) for c in H[h]]


def rep_profile(
    A: IntSet,
    h: int,
    lo: Optional[int] = None,
    hi: Optional[int] = None,
    limit: int = DEFAULT_PROFILE_LIMIT,
    spot_checks: int = 3,
) -> RepProfile:
    """``r_{A,h}(n)`` for every ``n`` in ``[lo, hi]`` (default: the whole support range)."""
    if h < 1:
        raise InvalidArgument(f"order h must be at least 1, got {h}")
    if not len(A):
        lo = 0 if lo is None else lo
        hi = lo if hi is None else hi
        return RepProfile(h, lo, hi, {})
    span = h * A.diameter + 1
    if span > limit:
        raise BudgetExceeded("profile length h*diam(A)+1", span, limit)
    if lo is None:
        lo = h * A.min
    if hi is None:
        hi = h * A.max
    if hi < lo:
        raise InvalidArgument(f"empty interval [{lo}, {hi}]")
    check_int64(h * A.min, "h*min(A)")
    check_int64(h * A.max, "h*max(A)")
    offset, coeffs = _dense_multiset_counts(A, h)
    counts = {}
    for n in range(max(lo, offset), min(hi, offset + len(coeffs) - 1) + 1):
        c = coeffs[n - offset]
        if c:
            counts[n] = c
    profile = RepProfile(h, lo, hi, counts)
    # spot checks against direct enumeration at deterministic points
    if spot_checks:
        nonzero = sorted(counts)
        probes = {lo, hi}
        if nonzero:
            probes.update(nonzero[:: max(1, len(nonzero) // spot_checks)][:spot_checks])
        for n in sorted(probes):
            if rep_count(A, h, n) != counts.get(n, 0):
                raise InternalError(f"profile disagrees with enumeration at n={n}")
    return profile


def counting_fn(A: IntSet, x: int) -> int:
    """``|{a in A : |a| <= x}|``."""
    if x < 0:
        return 0
    elems = A.elements
    return bisect.bisect_right(elems, x) - bisect.bisect_left(elems, -x)


# --------------------------------------------------------------- targets

@dataclass
class RepTarget:
    lo: int
    hi: int
    values: dict[int, TargetValue]

    def __post_init__(self):
        if self.hi < self.lo:
            raise InvalidArgument(f"target window [{self.lo}, {self.hi}] is empty")
        missing = [n for n in range(self.lo, self.hi + 1) if n not in self.values]
        if missing:
            raise InvalidArgument(f"target is not defined at n={missing[0]} inside its window")
        for n, v in self.values.items():
            if v != INF and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise InvalidArgument(f"target value at n={n} must be a nonnegative integer or 'inf', got {v!r}")

    @classmethod
    def from_values(cls, lo: int, values: list) -> "RepTarget":
        return cls(lo, lo + len(values) - 1, {lo + i: v for i, v in enumerate(values)})

    @classmethod
    def from_json(cls, data: object) -> "RepTarget":
        if not isinstance(data, dict) or not data:
            raise InvalidArgument("target must be a nonempty JSON object")
        try:
            values = {int(k): v for k, v in data.items()}
        except ValueError:
            raise InvalidArgument("target keys must be integers") from None
        return cls(min(values), max(values), values)

    @classmethod
    def load(cls, path: os.PathLike) -> "RepTarget":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InvalidArgument(f"cannot read target file {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InvalidArgument(f"target file {path} is not valid JSON: {exc.msg}") from None
        return cls.from_json(data)

    def to_json(self) -> dict:
        return {str(n): self.values[n] for n in range(self.lo, self.hi + 1)}

    @property
    def has_infinity(self) -> bool:
        return any(v == INF for v in self.values.values())


@dataclass
class VerifyRow:
    n: int
    expected: TargetValue
    observed: int
    ok: Optional[bool]  # None where the target is infinite


@dataclass
class VerifyReport:
    passed: bool
    rows: list[VerifyRow]
    warnings: list[str] = field(default_factory=list)

    @property
    def first_failure(self) -> Optional[int]:
        return next((r.n for r in self.rows if r.ok is False), None)


def verify_target(A: IntSet, h: int, target: RepTarget) -> VerifyReport:
    profile = rep_profile(A, h, target.lo, target.hi) if len(A) else None
    rows, notes = [], []
    for n in range(target.lo, target.hi + 1):
        observed = profile.counts.get(n, 0) if profile else 0
        expected = target.values[n]
        if expected == INF:
            rows.append(VerifyRow(n, expected, observed, None))
            notes.append(f"n={n}: target is infinite, observed {observed} (not checked)")
        else:
            rows.append(VerifyRow(n, expected, observed, observed == expected))
    for note in notes:
        warnings.warn(note, stacklevel=2)
    return VerifyReport(all(r.ok is not False for r in rows), rows, notes)


# -------------------------------------------------------------- realizer

@dataclass
class RealizeResult:
    set: Optional[IntSet]
    status: str  # found | none-within-bounds | budget-exhausted
    nodes: int


def candidate_order(bound: int) -> list[int]:
    """``0, -1, 1, -2, 2, ...``: increasing absolute value, negatives first."""
    out = [0]
    for a in range(1, bound + 1):
        out += [-a, a]
    return out


def _realizers(target: RepTarget, bound: int, budget: int, counter: list) -> Iterator[IntSet]:
    lo, hi = target.lo, target.hi
    want = [target.values[n] for n in range(lo, hi + 1)]
    cands = candidate_order(bound)
    have = [0] * len(want)
    chosen: list[int] = []

    def add(x: int, sign: int) -> bool:
        """Apply the pair sums x+c (c chosen) and 2x; return False if some count overshoots."""
        ok = True
        for s in [x + c for c in chosen] + [2 * x]:
            if lo <= s <= hi:
                have[s - lo] += sign
                if have[s - lo] > want[s - lo]:
                    ok = False
        return ok

    def search(start: int) -> Iterator[IntSet]:
        counter[0] += 1
        if counter[0] > budget:
            raise _BudgetHit
        if have == want:
            yield IntSet(chosen)
        for i in range(start, len(cands)):
            x = cands[i]
            fine = add(x, +1)
            if fine:
                chosen.append(x)
                yield from search(i + 1)
                chosen.pop()
            add(x, -1)

    yield from search(0)


class _BudgetHit(Exception):
    pass


def realize_on_window(target: RepTarget, h: int = 2, bound: int = 10, budget: int = 10**6) -> RealizeResult:
    """Least set in ``[-bound, bound]`` whose order-2 representation function matches the window.

    Sets are compared as sequences of candidate ranks (see :func:`candidate_order`),
    so a set precedes all of its extensions. Counts only grow as elements are
    added, which justifies pruning on overshoot.
    """
    if h != 2:
        raise UnsupportedOrder(f"realization supports h = 2 only, got h = {h}")
    if target.has_infinity:
        raise InvalidArgument("cannot realize a window containing infinite targets")
    if bound < 0:
        raise InvalidArgument("bound must be nonnegative")
    counter = [0]
    try:
        for A in _realizers(target, bound, budget, counter):
            if not verify_target(A, 2, target).passed:
                raise InternalError(f"realizer {A} does not verify")
            return RealizeResult(A, "found", counter[0])
    except _BudgetHit:
        return RealizeResult(None, "budget-exhausted", counter[0])
    return RealizeResult(None, "none-within-bounds", counter[0])


def all_realizers(target: RepTarget, bound: int, budget: int = 10**6) -> tuple[list[IntSet], bool]:
    """Every realizer in ``[-bound, bound]``; the flag is False if the budget cut the scan short."""
    if target.has_infinity:
        raise InvalidArgument("cannot realize a window containing infinite targets")
    counter = [0]
    found = []
    try:
        for A in _realizers(target, bound, budget, counter):
            found.append(A)
    except _BudgetHit:
        return found, False
    return found, True


# ---------------------------------------------------------------- density

@dataclass
class DensityFit:
    alpha: float
    intercept: float
    residual: float
    samples: list[int]
    label: str = "finite-sample diagnostic; not an asymptotic claim"


def density_fit(A: IntSet, sample_points: list[int]) -> DensityFit:
    """Least-squares slope of ``log A(x)`` against ``log x``."""
    xs = sorted(set(int(x) for x in sample_points))
    if any(x <= 0 for x in xs) or xs != [int(x) for x in sample_points]:
        raise InvalidArgument("sample points must be positive and strictly increasing")
    pts = [(x, counting_fn(A, x)) for x in xs]
    pts = [(x, c) for x, c in pts if c > 0]
    if len(pts) < 3 or len({c for _, c in pts}) < 2:
        raise InvalidArgument("density fit needs at least 3 samples with distinct, nonzero counts")
    lx = np.log([x for x, _ in pts])
    ly = np.log([c for _, c in pts])
    (slope, intercept), res, *_ = np.polyfit(lx, ly, 1, full=True)
    residual = float(res[0]) if len(res) else 0.0
    return DensityFit(float(slope), float(intercept), residual, [x for x, _ in pts])
