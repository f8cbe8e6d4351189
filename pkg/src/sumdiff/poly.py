"""Polynomial images over finite integer sets and over Z/mZ.

Two representations:

* :class:`IntValuedPoly` -- integer combination of products of binomials
  ``C(x_1, k_1) * ... * C(x_n, k_n)``; evaluated exactly over the integers.
* :class:`IntPoly` -- integer coefficients in the monomial basis; the only
  kind accepted modulo ``m``.

Conversion between them goes through rational monomial coefficients.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    BudgetExceeded,
    InternalError,
    InvalidArgument,
    InvalidPolynomial,
    InvalidPolynomialForModulus,
)
from .intset import IntSet, check_int64

DEFAULT_TUPLE_BUDGET = 10**8

Exps = tuple[int, ...]


def binom_eval(x: int, k: int) -> int:
    """``x(x-1)...(x-k+1) / k!`` for any integer ``x``."""
    if k < 0:
        raise InvalidArgument(f"binomial order must be nonnegative, got {k}")
    if x >= 0:
        value = math.comb(x, k)
    else:
        value = (-1) ** k * math.comb(k - x - 1, k)
    return check_int64(value, f"C({x},{k})")


# ------------------------------------------------------- basis conversions

@lru_cache(maxsize=None)
def _binom_in_monomials(k: int) -> tuple[Fraction, ...]:
    """Monomial coefficients of C(x, k), index = power of x."""
    coeffs = [Fraction(1)]
    for j in range(k):
        # multiply by (x - j)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for p, c in enumerate(coeffs):
            nxt[p + 1] += c
            nxt[p] -= j * c
        coeffs = nxt
    fk = math.factorial(k)
    return tuple(c / fk for c in coeffs)


@lru_cache(maxsize=None)
def _power_in_binomials(j: int) -> tuple[int, ...]:
    """Binomial coefficients of x^j: ``x^j = sum_k S(j,k) k! C(x,k)``."""
    stirling = [1] + [0] * j  # S(0, k)
    for i in range(1, j + 1):
        row = [0] * (j + 1)
        for k in range(1, i + 1):
            row[k] = k * stirling[k] + stirling[k - 1]
        stirling = row
    return tuple(stirling[k] * math.factorial(k) for k in range(j + 1))


def _tensor(per_var: Sequence[Sequence], coeff) -> Iterable[tuple[Exps, object]]:
    for choice in product(*(list(enumerate(c)) for c in per_var)):
        value = coeff
        for _, c in choice:
            if not c:
                value = 0
                break
            value *= c
        if value:
            yield tuple(i for i, _ in choice), value


def _clean(terms: dict) -> dict:
    return {e: c for e, c in sorted(terms.items()) if c}


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial in the monomial basis. ``terms`` maps exponent tuples to coefficients."""

    variables: tuple[str, ...]
    terms: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.variables:
            raise InvalidPolynomial("polynomial needs at least one variable")
        for e, c in self.terms.items():
            if len(e) != len(self.variables) or not isinstance(c, int):
                raise InvalidPolynomial(f"bad term {e}: {c}")
        object.__setattr__(self, "terms", _clean(self.terms))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, p in zip(point, e):
                term *= x ** p
            total += term
        return total

    def evaluate_mod(self, point: Sequence[int], m: int) -> int:
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, p in zip(point, e):
                term = term * pow(x, p, m)
            total += term
        return total % m

    def to_binomial(self) -> "IntValuedPoly":
        out: dict[Exps, int] = {}
        for e, c in self.terms.items():
            for ks, v in _tensor([_power_in_binomials(p) for p in e], c):
                out[ks] = out.get(ks, 0) + v
        return IntValuedPoly(self.variables, out)

    def to_text(self) -> str:
        return _format_terms(self.variables, self.terms, _monomial_factor)


@dataclass(frozen=True)
class IntValuedPoly:
    """``sum coeff * prod C(x_i, k_i)`` with integer coefficients."""

    variables: tuple[str, ...]
    terms: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.variables:
            raise InvalidPolynomial("polynomial needs at least one variable")
        for e, c in self.terms.items():
            if len(e) != len(self.variables) or not isinstance(c, int):
                raise InvalidPolynomial(f"bad term {e}: {c}")
            if any(k < 0 for k in e):
                raise InvalidPolynomial(f"negative binomial order in {e}")
        object.__setattr__(self, "terms", _clean(self.terms))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def evaluate(self, point: Sequence[int]) -> int:
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= binom_eval(x, k)
            total += term
        return check_int64(total, "polynomial value")

    def to_monomial(self) -> IntPoly:
        """Monomial-basis form; raises if some coefficient is not an integer."""
        rational: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            for ps, v in _tensor([_binom_in_monomials(k) for k in e], Fraction(c)):
                rational[ps] = rational.get(ps, Fraction(0)) + v
        out = {}
        for ps, v in rational.items():
            if v.denominator != 1:
                raise InvalidPolynomialForModulus(
                    f"{self.to_text()} has non-integer monomial coefficient {v}; it cannot be reduced mod m"
                )
            out[ps] = int(v)
        return IntPoly(self.variables, out)

    def to_text(self) -> str:
        return _format_terms(self.variables, self.terms, _binomial_factor)


AnyPoly = Union[IntPoly, IntValuedPoly]


# ------------------------------------------------------------- text format

def _monomial_factor(name: str, p: int) -> Optional[str]:
    if p == 0:
        return None
    return name if p == 1 else f"{name}^{p}"


def _binomial_factor(name: str, k: int) -> Optional[str]:
    return None if k == 0 else f"C({name},{k})"


def _format_terms(variables, terms, factor) -> str:
    if not terms:
        return "0"
    pieces = []
    for e, c in sorted(terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0]))):
        factors = [s for s in (factor(v, p) for v, p in zip(variables, e)) if s]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|\(|\)|,))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise InvalidPolynomial(f"unexpected character at position {pos} in {text!r}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


@dataclass
class ParsedPoly:
    regime: str  # "binomial" or "monomial"
    poly: AnyPoly


def parse_poly(text: str) -> ParsedPoly:
    """Parse ``3*C(x,2)*C(y,1)`` or ``2*x^2*y - y``.

    Any ``C(var, k)`` factor puts the expression in the binomial regime; in
    that case plain powers are converted to the binomial basis too.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise InvalidPolynomial("empty polynomial")
    pos = 0
    raw_terms: list[tuple[int, list[tuple[str, str, int]]]] = []
    uses_binomial = False

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise InvalidPolynomial(f"expected {expected or 'token'} at token {pos} in {text!r}, got {tok!r}")
        pos += 1
        return tok

    def integer():
        tok = take()
        if not tok.isdigit():
            raise InvalidPolynomial(f"expected an integer in {text!r}, got {tok!r}")
        return int(tok)

    sign = 1
    if peek() in ("+", "-"):
        sign = -1 if take() == "-" else 1
    while True:
        coeff = sign
        factors = []
        while True:
            tok = peek()
            if tok is None:
                raise InvalidPolynomial(f"dangling operator in {text!r}")
            if tok.isdigit():
                coeff *= integer()
            elif tok == "C" and pos + 1 < len(tokens) and tokens[pos + 1] == "(":
                take("C")
                take("(")
                name = take()
                if not re.match(r"[A-Za-z_]", name):
                    raise InvalidPolynomial(f"expected a variable inside C(...) in {text!r}")
                take(",")
                k = integer()
                take(")")
                factors.append(("C", name, k))
                uses_binomial = True
            elif re.match(r"[A-Za-z_]", tok):
                name = take()
                p = 1
                if peek() == "^":
                    take("^")
                    p = integer()
                factors.append(("^", name, p))
            else:
                raise InvalidPolynomial(f"unexpected {tok!r} in {text!r}")
            if peek() == "*":
                take("*")
                continue
            break
        raw_terms.append((coeff, factors))
        tok = peek()
        if tok is None:
            break
        if tok not in ("+", "-"):
            raise InvalidPolynomial(f"unexpected {tok!r} in {text!r}")
        sign = -1 if take() == "-" else 1

    names = sorted({name for _, fs in raw_terms for _, name, _ in fs})
    if not names:
        raise InvalidPolynomial(f"{text!r} has no variables")
    index = {n: i for i, n in enumerate(names)}
    rational: dict[Exps, Fraction] = {}
    for coeff, factors in raw_terms:
        # each variable's factors multiply into one univariate polynomial
        per_var = [[Fraction(1)] for _ in names]
        for kind, name, val in factors:
            uni = list(_binom_in_monomials(val)) if kind == "C" else [Fraction(0)] * val + [Fraction(1)]
            i = index[name]
            per_var[i] = _mul_uni(per_var[i], uni)
        for ps, v in _tensor(per_var, Fraction(coeff)):
            rational[ps] = rational.get(ps, Fraction(0)) + v
    mono = IntPoly(tuple(names), {})  # validates variables
    if not uses_binomial:
        return ParsedPoly("monomial", IntPoly(mono.variables, {e: int(c) for e, c in rational.items()}))
    return ParsedPoly("binomial", _rational_to_binomial(tuple(names), rational))


def _mul_uni(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _rational_to_binomial(variables, rational: dict) -> IntValuedPoly:
    out: dict[Exps, Fraction] = {}
    for e, c in rational.items():
        for ks, v in _tensor([_power_in_binomials(p) for p in e], c):
            out[ks] = out.get(ks, Fraction(0)) + v
    ints = {}
    for ks, v in out.items():
        if v.denominator != 1:
            raise InternalError(f"binomial coefficient {v} is not an integer")
        ints[ks] = int(v)
    return IntValuedPoly(variables, ints)


def as_int_valued(p: AnyPoly) -> IntValuedPoly:
    return p if isinstance(p, IntValuedPoly) else p.to_binomial()


def as_monomial(p: AnyPoly) -> IntPoly:
    return p if isinstance(p, IntPoly) else p.to_monomial()


# ------------------------------------------------------------- evaluation

def _check_budget(size: int, nvars: int, budget: int) -> None:
    needed = size ** nvars
    if needed > budget:
        raise BudgetExceeded("tuple budget (|A|^n)", needed, budget)


def eval_poly_set(f: AnyPoly, A: IntSet, budget: int = DEFAULT_TUPLE_BUDGET) -> IntSet:
    """Exact image ``{f(a_1, ..., a_n) : a_i in A}``."""
    f = as_int_valued(f)
    _check_budget(len(A), f.nvars, budget)
    elems = list(A)
    # per-term table of binomial values, indexed [term][var][element]
    terms = list(f.terms.items())
    tables = [[[binom_eval(a, k) for a in elems] for k in e] for e, _ in terms]
    out = set()
    for idx in product(range(len(elems)), repeat=f.nvars):
        total = 0
        for (e, c), tab in zip(terms, tables):
            term = c
            for i, row in zip(idx, tab):
                term *= row[i]
                if not term:
                    break
            total += term
        out.add(check_int64(total, "polynomial value"))
    return IntSet._trusted(sorted(out))


@dataclass(frozen=True)
class ModSet:
    m: int
    residues: tuple[int, ...]

    def __post_init__(self):
        if self.m < 2:
            raise InvalidArgument(f"modulus must be at least 2, got {self.m}")
        res = tuple(self.residues)
        if any(not 0 <= r < self.m for r in res) or len(set(res)) != len(res):
            raise InvalidArgument(f"residues must be distinct and in [0, {self.m - 1}]")
        object.__setattr__(self, "residues", tuple(sorted(res)))

    @classmethod
    def reduce(cls, values: Iterable[int], m: int) -> "ModSet":
        return cls(m, tuple(sorted({v % m for v in values})))

    @classmethod
    def from_mask(cls, mask: int, m: int) -> "ModSet":
        return cls(m, tuple(i for i in range(m) if mask >> i & 1))

    def __len__(self) -> int:
        return len(self.residues)

    def __iter__(self):
        return iter(self.residues)


def _mod_image_mask(f: IntPoly, residues: Sequence[int], m: int) -> int:
    terms = list(f.terms.items())
    tables = [[[c * pow(r, p, m) % m if i == 0 else pow(r, p, m) for r in residues]
               for i, p in enumerate(e)] for e, c in terms]
    acc = 0
    if not terms:
        return 1 if residues else 0
    for idx in product(range(len(residues)), repeat=f.nvars):
        total = 0
        for tab in tables:
            term = 1
            for i, row in zip(idx, tab):
                term = term * row[i]
            total += term
        acc |= 1 << (total % m)
    return acc


def eval_poly_mod(f: AnyPoly, A: ModSet, budget: int = DEFAULT_TUPLE_BUDGET) -> ModSet:
    """Image of ``A`` under ``f`` with all arithmetic mod ``A.m``."""
    f = as_monomial(f)
    _check_budget(len(A), f.nvars, budget)
    if not len(A):
        return ModSet(A.m, ())
    return ModSet.from_mask(_mod_image_mask(f, A.residues, A.m), A.m)


def _mod_card(f: IntPoly, residues: Sequence[int], m: int) -> int:
    if not residues:
        return 0
    return _mod_image_mask(f, residues, m).bit_count()


# ---------------------------------------------------------------- M(f, g)

@dataclass
class MfgReport:
    f: str
    g: str
    m: int
    status: str  # member | non-member-exhaustive | unknown-budget
    witness: Optional[ModSet]
    f_card: Optional[int] = None
    g_card: Optional[int] = None
    examined: int = 0
    source: Optional[str] = None


def known_integer_witnesses() -> list[tuple[str, IntSet]]:
    """Integer sets worth reducing mod m before any blind scan."""
    from .forms import orosz_witnesses
    from .mstd import COUNTEREXAMPLE

    out = [("mstd-counterexample", COUNTEREXAMPLE)]
    for u in range(2, 11):
        for v in range(1, u):
            if math.gcd(u, v) == 1:
                A, B = orosz_witnesses(u, v)
                out.append((f"orosz-A({u},{v})", A))
                out.append((f"orosz-B({u},{v})", B))
    return out


def probe_mfg(
    f: AnyPoly,
    g: AnyPoly,
    m: int,
    max_card: Optional[int] = None,
    max_subsets: int = 1 << 20,
    seed: int = 0,
    extra_witnesses: Sequence[IntSet] = (),
    tuple_budget: int = DEFAULT_TUPLE_BUDGET,
) -> MfgReport:
    """Look for ``A`` in Z/mZ with ``|f(A)| > |g(A)|``.

    Order: reductions of known integer witnesses, then a full scan of all
    ``2^m`` subsets when that fits in ``max_subsets``, otherwise uniform
    random subsets. ``non-member-exhaustive`` is reported only after a
    complete scan.
    """
    if m < 2:
        raise InvalidArgument(f"modulus must be at least 2, got {m}")
    fm, gm = as_monomial(f), as_monomial(g)
    label_f, label_g = fm.to_text(), gm.to_text()
    examined = 0

    def fits(res) -> bool:
        return max_card is None or len(res) <= max_card

    def check(res) -> Optional[tuple[int, int]]:
        for p in (fm, gm):
            _check_budget(len(res), p.nvars, tuple_budget)
        cf, cg = _mod_card(fm, res, m), _mod_card(gm, res, m)
        return (cf, cg) if cf > cg else None

    def member(res, cards, source) -> MfgReport:
        witness = ModSet(m, tuple(res))
        # re-verify through the public evaluation path
        cf, cg = len(eval_poly_mod(fm, witness)), len(eval_poly_mod(gm, witness))
        if (cf, cg) != cards or not cf > cg:
            raise InternalError(f"witness {witness} failed re-verification")
        return MfgReport(label_f, label_g, m, "member", witness, cf, cg, examined, source)

    seeds = [(f"user-{i}", S) for i, S in enumerate(extra_witnesses)] + known_integer_witnesses()
    for source, S in seeds:
        res = ModSet.reduce(S, m).residues
        if not fits(res):
            continue
        examined += 1
        cards = check(res)
        if cards:
            return member(res, cards, source)

    full = max_card is None or max_card >= m
    if (1 << m) <= max_subsets:
        for mask in range(1, 1 << m):
            res = [i for i in range(m) if mask >> i & 1]
            if not fits(res):
                continue
            examined += 1
            cards = check(res)
            if cards:
                return member(res, cards, "exhaustive-scan")
        status = "non-member-exhaustive" if full else "unknown-budget"
        return MfgReport(label_f, label_g, m, status, None, examined=examined)

    rng = random.Random(seed)
    for _ in range(max_subsets):
        mask = rng.getrandbits(m)
        res = [i for i in range(m) if mask >> i & 1]
        if not res or not fits(res):
            continue
        examined += 1
        cards = check(res)
        if cards:
            return member(res, cards, f"random(seed={seed})")
    return MfgReport(label_f, label_g, m, "unknown-budget", None, examined=examined)


@dataclass
class ModTriple:
    m: int
    A: Optional[ModSet]
    B: Optional[ModSet]
    C: Optional[ModSet]
    exhaustive: bool


def find_mod_triple(f: AnyPoly, g: AnyPoly, m: int, max_subsets: int = 1 << 20) -> ModTriple:
    """First subsets of Z/mZ (in mask order) with ``|f|>|g|``, ``|f|<|g|`` and ``|f|=|g|``, ``|C|>1``."""
    if (1 << m) > max_subsets:
        raise BudgetExceeded("subset budget (2^m)", 1 << m, max_subsets)
    fm, gm = as_monomial(f), as_monomial(g)
    slots: dict[str, Optional[ModSet]] = {"A": None, "B": None, "C": None}
    for mask in range(1, 1 << m):
        res = [i for i in range(m) if mask >> i & 1]
        cf, cg = _mod_card(fm, res, m), _mod_card(gm, res, m)
        key = "A" if cf > cg else "B" if cf < cg else ("C" if len(res) > 1 else None)
        if key and slots[key] is None:
            slots[key] = ModSet(m, tuple(res))
            if all(slots.values()):
                break
    return ModTriple(m, slots["A"], slots["B"], slots["C"], True)
