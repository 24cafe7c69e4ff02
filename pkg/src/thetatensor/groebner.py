"""Polynomials over tensor-indexed variables and their Groebner machinery.

Variables are labelled by 1-based multi-indices ``a`` with ``x[1,...,1]``
the largest variable and ``x[n1,...,nd]`` the smallest; monomials are
ordered by graded reverse lexicographic order (grevlex).  The module
builds the explicit reduced Groebner bases of the rank-1 ideal and of the
nuclear p-norm ideals (p = 1, even, inf), performs generic multivariate
division, provides the fast combinatorial normal forms for the rank-1 and
sign-tensor ideals, and verifies bases through Buchberger's criterion.

Coefficients are kept exact (ints / fractions) throughout; all built
bases are monic with integer tails, so division never leaves the
integers there.  Float coefficients are accepted and propagate normally.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

from thetatensor.tensors import MultiIndex, Shape, bar_wedge_vee, wedge_vee

INF = math.inf

#: p-value marking the rank-1 ideal (binomial relations only, no norm relation).
RANK1 = 0


def _exact_div(a, b):
    """a / b staying in the integers when the division is exact."""
    if isinstance(a, Integral) and isinstance(b, Integral):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    if isinstance(a, (Fraction, Integral)) and isinstance(b, (Fraction, Integral)):
        return Fraction(a) / Fraction(b)
    return a / b


class Monomial:
    """Product of variables x_a with nonnegative exponents, sparse."""

    __slots__ = ("_pairs", "degree", "_hash")

    def __init__(self, pairs=()):
        acc: dict[MultiIndex, int] = {}
        for a, e in pairs:
            a = tuple(a)
            e = int(e)
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                acc[a] = acc.get(a, 0) + e
        items = tuple(sorted(acc.items()))
        self._pairs = items
        self.degree = sum(e for _, e in items)
        self._hash = hash(items)

    @staticmethod
    def one() -> "Monomial":
        return _ONE

    @staticmethod
    def variable(a: MultiIndex) -> "Monomial":
        return Monomial(((tuple(a), 1),))

    @staticmethod
    def from_indices(indices) -> "Monomial":
        """Product of degree-1 variables, one per listed multi-index."""
        return Monomial((tuple(a), 1) for a in indices)

    @property
    def exponents(self) -> dict[MultiIndex, int]:
        return dict(self._pairs)

    def indices(self) -> list[MultiIndex]:
        """Variable labels expanded with multiplicity."""
        out = []
        for a, e in self._pairs:
            out.extend([a] * e)
        return out

    def is_one(self) -> bool:
        return not self._pairs

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not self._pairs:
            return other
        if not other._pairs:
            return self
        return Monomial(self._pairs + other._pairs)

    def divides(self, other: "Monomial") -> bool:
        them = dict(other._pairs)
        return all(them.get(a, 0) >= e for a, e in self._pairs)

    def __floordiv__(self, other: "Monomial") -> "Monomial":
        """Quotient self / other; other must divide self."""
        mine = dict(self._pairs)
        for a, e in other._pairs:
            have = mine.get(a, 0) - e
            if have < 0:
                raise ValueError(f"{other} does not divide {self}")
            if have:
                mine[a] = have
            else:
                mine.pop(a, None)
        return Monomial(mine.items())

    def lcm(self, other: "Monomial") -> "Monomial":
        mine = dict(self._pairs)
        for a, e in other._pairs:
            mine[a] = max(mine.get(a, 0), e)
        return Monomial(mine.items())

    def gcd_is_one(self, other: "Monomial") -> bool:
        them = dict(other._pairs)
        return all(a not in them for a, _ in self._pairs)

    def evaluate(self, point) -> float:
        """Evaluate at a map multi-index -> value (dict or callable)."""
        get = point.__getitem__ if hasattr(point, "__getitem__") else point
        val = 1.0
        for a, e in self._pairs:
            val *= get(a) ** e
        return val

    def _cmp(self, other: "Monomial") -> int:
        """Grevlex: -1 if self < other, 0 if equal, 1 if self > other."""
        if self.degree != other.degree:
            return -1 if self.degree < other.degree else 1
        # exponent difference is examined from the smallest variable
        # (lex-largest multi-index) inward; a negative entry there makes
        # the left monomial the larger one
        i = len(self._pairs) - 1
        j = len(other._pairs) - 1
        while i >= 0 or j >= 0:
            ai = self._pairs[i][0] if i >= 0 else None
            bj = other._pairs[j][0] if j >= 0 else None
            if ai == bj:
                d = self._pairs[i][1] - other._pairs[j][1]
                if d:
                    return 1 if d < 0 else -1
                i -= 1
                j -= 1
            elif bj is None or (ai is not None and ai > bj):
                return -1
            else:
                return 1
        return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._pairs == other._pairs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Monomial({self})"

    def __str__(self):
        if not self._pairs:
            return "1"
        parts = []
        for a, e in self._pairs:
            v = "x[" + ",".join(str(c) for c in a) + "]"
            parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts)


_ONE = Monomial()


def grevlex_compare(m1: Monomial, m2: Monomial) -> int:
    """-1, 0 or +1 as m1 <, ==, > m2 in grevlex."""
    return m1._cmp(m2)


class Polynomial:
    """Sparse polynomial: map monomial -> nonzero coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict[Monomial, object] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for m, c in items:
                c0 = acc.get(m, 0) + c
                if c0 == 0:
                    acc.pop(m, None)
                else:
                    acc[m] = c0
        self.terms = acc

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def constant(c) -> "Polynomial":
        return Polynomial({_ONE: c}) if c != 0 else Polynomial()

    @staticmethod
    def variable(a: MultiIndex) -> "Polynomial":
        return Polynomial({Monomial.variable(a): 1})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(m.degree for m in self.terms)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Polynomial":
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return Polynomial({m: _exact_div(c, lc) for m, c in self.terms.items()})

    def coefficient(self, m: Monomial):
        return self.terms.get(m, 0)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            c0 = out.get(m, 0) + c
            if c0 == 0:
                out.pop(m, None)
            else:
                out[m] = c0
        p = Polynomial()
        p.terms = out
        return p

    def __neg__(self):
        p = Polynomial()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out: dict[Monomial, object] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = m1 * m2
                    c0 = out.get(m, 0) + c1 * c2
                    if c0 == 0:
                        out.pop(m, None)
                    else:
                        out[m] = c0
            p = Polynomial()
            p.terms = out
            return p
        if other == 0:
            return Polynomial()
        p = Polynomial()
        p.terms = {m: c * other for m, c in self.terms.items()}
        return p

    __rmul__ = __mul__

    def evaluate(self, point) -> float:
        return sum(float(c) * m.evaluate(point) for m, c in self.terms.items())

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


@dataclass(frozen=True)
class IdealSpec:
    """Which nuclear p-norm ideal to build over which tensor shape.

    ``p`` is 1, an even integer >= 2, ``math.inf``, or ``RANK1`` (= 0)
    for the rank-1 binomial ideal alone.
    """

    shape: Shape
    p: float

    def __post_init__(self):
        p = self.p
        if p == RANK1 or p == 1 or p == INF:
            return
        if isinstance(p, float) and p.is_integer():
            object.__setattr__(self, "p", int(p))
            p = int(p)
        if not isinstance(p, Integral) or p < 2 or p % 2 != 0:
            raise ValueError(
                f"p must be 1, an even integer >= 2, or inf; got {p!r} "
                "(odd exponents do not cut out a bounded variety)"
            )
        object.__setattr__(self, "p", int(p))


class GroebnerBasis:
    """Ordered list of monic polynomials forming a reduced Groebner basis."""

    def __init__(self, spec: IdealSpec, elements):
        self.spec = spec
        self.elements = tuple(elements)
        self.leading_monomials = tuple(g.leading_monomial() for g in self.elements)
        self._index = _DivisorIndex(self.leading_monomials)

    @property
    def shape(self) -> Shape:
        return self.spec.shape

    @property
    def p(self):
        return self.spec.p

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def find_divisor(self, m: Monomial) -> int | None:
        """Position of a basis element whose leading monomial divides m."""
        return self._index.find(m)

    def is_standard(self, m: Monomial) -> bool:
        """True when no leading monomial of the basis divides m."""
        return self._index.find(m) is None

    def __repr__(self):
        return f"GroebnerBasis(p={self.spec.p}, shape={self.spec.shape.dims}, n={len(self)})"


class _DivisorIndex:
    """Divisibility lookup for the leading monomials of a basis.

    Pure powers x_a^e and squarefree quadratics x_a x_b (the only shapes
    occurring in the built bases) get dict lookups; anything else falls
    back to a linear scan.  The reported element is deterministic.
    """

    def __init__(self, leading_monomials):
        self.powers: dict[MultiIndex, tuple[int, int]] = {}
        self.pairs: dict[tuple[MultiIndex, MultiIndex], int] = {}
        self.other: list[tuple[Monomial, int]] = []
        for pos, lm in enumerate(leading_monomials):
            ex = lm._pairs
            if len(ex) == 1:
                a, e = ex[0]
                cur = self.powers.get(a)
                if cur is None or e < cur[0]:
                    self.powers[a] = (e, pos)
            elif len(ex) == 2 and ex[0][1] == 1 and ex[1][1] == 1:
                key = (ex[0][0], ex[1][0])
                self.pairs.setdefault(key, pos)
            else:
                self.other.append((lm, pos))

    def find(self, m: Monomial) -> int | None:
        sup = m._pairs
        for a, e in sup:
            hit = self.powers.get(a)
            if hit is not None and e >= hit[0]:
                return hit[1]
        if self.pairs:
            n = len(sup)
            for i in range(n):
                for j in range(i + 1, n):
                    hit = self.pairs.get((sup[i][0], sup[j][0]))
                    if hit is not None:
                        return hit
        for lm, pos in self.other:
            if lm.divides(m):
                return pos
        return None


def build_groebner(spec: IdealSpec) -> GroebnerBasis:
    """The explicit reduced Groebner basis for the requested ideal.

    Element order: norm relation first (when present), then binomial
    rewrites in lexicographic pair order; for the sign-tensor ideal the
    square relations come first, matching the usual listing.
    """
    shape = spec.shape
    idx = shape.indices()
    p = spec.p

    def binomials(barred: bool) -> list[Polynomial]:
        out = []
        for i, a in enumerate(idx):
            for b in idx[i + 1 :]:
                if barred:
                    keep = any(
                        ai > bi or (ai == bi and ai < ni)
                        for ai, bi, ni in zip(a, b, shape.dims)
                    )
                    lo, hi = bar_wedge_vee(a, b, shape)
                else:
                    keep = any(ai > bi for ai, bi in zip(a, b))
                    lo, hi = wedge_vee(a, b)
                if keep:
                    out.append(
                        Polynomial(
                            {
                                Monomial.from_indices((a, b)): 1,
                                Monomial.from_indices((lo, hi)): -1,
                            }
                        )
                    )
        return out

    if p == RANK1:
        elems = binomials(barred=False)
    elif p == 1:
        pair_monos = [
            Polynomial({Monomial.from_indices((a, b)): 1})
            for i, a in enumerate(idx)
            for b in idx[i + 1 :]
        ]
        sum_sq = Polynomial({Monomial(((a, 2),)): 1 for a in idx})
        sum_sq = sum_sq + Polynomial.constant(-1)
        cubes = [
            Polynomial({Monomial(((a, 3),)): 1, Monomial.variable(a): -1})
            for a in idx[1:]
        ]
        elems = pair_monos + [sum_sq] + cubes
    elif p == INF:
        squares = [
            Polynomial({Monomial(((a, 2),)): 1, _ONE: -1}) for a in idx
        ]
        elems = squares + binomials(barred=True)
    else:
        power_sum = Polynomial({Monomial(((a, p),)): 1 for a in idx})
        power_sum = power_sum + Polynomial.constant(-1)
        elems = [power_sum] + binomials(barred=False)

    return GroebnerBasis(spec, elems)


def reduce_poly(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Multivariate division remainder of f modulo G.

    The grevlex-largest monomial still in play is rewritten first; since G
    is a Groebner basis, the remainder is the unique normal form whatever
    divisor is used at each step.
    """
    work = dict(f.terms)
    done: dict[Monomial, object] = {}
    while work:
        m = max(work)
        c = work.pop(m)
        pos = G.find_divisor(m)
        if pos is None:
            done[m] = c
            continue
        g = G.elements[pos]
        lm = G.leading_monomials[pos]
        factor = _exact_div(c, g.terms[lm])
        quot = m // lm
        for mg, cg in g.terms.items():
            if mg is lm or mg == lm:
                continue
            key = quot * mg
            c0 = work.get(key, 0) - factor * cg
            if c0 == 0:
                work.pop(key, None)
            else:
                work[key] = c0
    out = Polynomial()
    out.terms = done
    return out


def normal_form_G0(m: Monomial) -> Monomial:
    """Normal form modulo the rank-1 binomial basis: sort each mode.

    The multiset of j-th coordinates over the k factor indices is sorted
    ascending and redistributed, factor by factor.
    """
    factors = m.indices()
    if len(factors) <= 1:
        return m
    cols = [sorted(col) for col in zip(*factors)]
    return Monomial.from_indices(tuple(zip(*cols)))


def normal_form_Ginf(m: Monomial, shape: Shape) -> Monomial:
    """Normal form modulo the sign-tensor basis: parity counts per mode.

    Per mode, even repetitions cancel entirely; the odd survivors are
    redistributed ascending, padded with n_j once a mode runs out.
    """
    factors = m.indices()
    k = len(factors)
    if k == 0:
        return m
    d = shape.d
    survivors: list[list[int]] = []
    min_even = None
    for j in range(d):
        counts: dict[int, int] = {}
        for a in factors:
            counts[a[j]] = counts.get(a[j], 0) + 1
        even_total = sum(c - (c % 2) for c in counts.values())
        if min_even is None or even_total < min_even:
            min_even = even_total
        survivors.append(sorted(i for i, c in counts.items() if c % 2))
    length = k - min_even
    out = []
    for r in range(length):
        out.append(
            tuple(
                survivors[j][r] if r < len(survivors[j]) else shape.dims[j]
                for j in range(d)
            )
        )
    return Monomial.from_indices(out)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """lcm(LT f, LT g)/LT(f) * f - lcm(LT f, LT g)/LT(g) * g."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of the zero polynomial is undefined")
    lmf, lmg = f.leading_monomial(), g.leading_monomial()
    lcm = lmf.lcm(lmg)
    cf, cg = f.terms[lmf], g.terms[lmg]
    out: dict[Monomial, object] = {}
    qf = lcm // lmf
    for m, c in f.terms.items():
        key = qf * m
        c0 = out.get(key, 0) + _exact_div(c, cf)
        if c0 == 0:
            out.pop(key, None)
        else:
            out[key] = c0
    qg = lcm // lmg
    for m, c in g.terms.items():
        key = qg * m
        c0 = out.get(key, 0) - _exact_div(c, cg)
        if c0 == 0:
            out.pop(key, None)
        else:
            out[key] = c0
    p = Polynomial()
    p.terms = out
    return p


def buchberger_check(G: GroebnerBasis) -> bool:
    """Every pairwise S-polynomial reduces to zero modulo G."""
    elems = G.elements
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            s = s_polynomial(elems[i], elems[j])
            if s.is_zero():
                continue
            if not reduce_poly(s, G).is_zero():
                return False
    return True


@dataclass(frozen=True)
class MonomialBasis:
    """Standard monomials of degree <= k, grevlex ascending."""

    monomials: tuple[Monomial, ...]
    k: int

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def __getitem__(self, i):
        return self.monomials[i]

    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}


def monomial_basis(G: GroebnerBasis, k: int) -> MonomialBasis:
    """All standard monomials of degree <= k for the basis G.

    Enumerates products of standard variables depth-first, pruning any
    non-standard product: divisors of standard monomials are standard, so
    nothing is missed.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    variables = [
        Monomial.variable(a)
        for a in G.shape.indices()
        if G.is_standard(Monomial.variable(a))
    ]
    found = [_ONE] if G.is_standard(_ONE) else []

    def extend(m: Monomial, start: int):
        if m.degree >= k:
            return
        for i in range(start, len(variables)):
            m2 = m * variables[i]
            if G.is_standard(m2):
                found.append(m2)
                extend(m2, i)

    if found:
        extend(_ONE, 0)
    return MonomialBasis(tuple(sorted(found)), k)


# --- text format -----------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<var>x\[(?P<idx>\d+(?:,\d+)*)\](?:\^(?P<exp>\d+))?)"
    r"|(?P<num>\d+/\d+|(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<op>[+*-])"
)


def parse_polynomial(text: str) -> Polynomial:
    """Parse ``coeff * x[i1,...,id]^e * ...`` terms joined by + and -."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial")
    pos = 0
    tokens = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise ValueError(f"cannot parse polynomial near {s[pos:pos+12]!r}")
        tokens.append(m)
        pos = m.end()

    terms: list[tuple[Monomial, object]] = []
    sign = 1
    coeff = None
    pairs: list[tuple[MultiIndex, int]] = []
    seen_factor = False

    def flush():
        nonlocal sign, coeff, pairs, seen_factor
        if not seen_factor:
            raise ValueError("empty term in polynomial")
        c = sign * (coeff if coeff is not None else 1)
        terms.append((Monomial(pairs), c))
        sign, coeff, pairs, seen_factor = 1, None, [], False

    expecting_factor = True
    for tok in tokens:
        kind = tok.lastgroup
        if kind == "op":
            op = tok.group("op")
            if op == "*":
                if not seen_factor:
                    raise ValueError("misplaced '*'")
                expecting_factor = True
            else:
                if seen_factor:
                    flush()
                if expecting_factor and seen_factor:
                    raise ValueError("misplaced sign")
                if op == "-":
                    sign = -sign
                expecting_factor = True
        elif kind == "num":
            txt = tok.group("num")
            if "/" in txt:
                val = Fraction(txt)
            elif "." in txt or "e" in txt or "E" in txt:
                val = float(txt)
            else:
                val = int(txt)
            coeff = val if coeff is None else coeff * val
            seen_factor = True
            expecting_factor = False
        else:
            a = tuple(int(c) for c in tok.group("idx").split(","))
            e = int(tok.group("exp") or 1)
            pairs.append((a, e))
            seen_factor = True
            expecting_factor = False
    if seen_factor:
        flush()
    else:
        raise ValueError("polynomial ends with a dangling operator")
    return Polynomial(terms)


def format_polynomial(p: Polynomial) -> str:
    """Render with grevlex-descending terms; inverse of parse_polynomial."""
    if p.is_zero():
        return "0"
    parts = []
    for m in sorted(p.terms, reverse=True):
        c = p.terms[m]
        neg = c < 0
        mag = -c if neg else c
        if m.is_one():
            body = str(mag)
        elif mag == 1:
            body = str(m)
        else:
            body = f"{mag}*{m}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
