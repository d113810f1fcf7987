"""Exact sparse multivariate polynomials over the rationals.

Monomials are dense exponent tuples, one entry per variable, which makes
them hashable dict keys with a canonical form.  A polynomial maps
monomials to nonzero ``Fraction`` coefficients; the zero polynomial has
an empty term map.

The module also carries the combinatorial structure this library leans
on: the multichain (square-free) decomposition of a monomial, its fine
degree, the chain product, and the monoid / graded actions of local
bijections.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .groupoids import LocalBijection

Monomial = tuple  # exponent tuple, one nonnegative int per variable


def degree(m: Monomial) -> int:
    return sum(m)

def support(m: Monomial) -> frozenset[int]:
    return frozenset(i for i, e in enumerate(m) if e > 0)

def unit_monomial(nvars: int) -> Monomial:
    return (0,) * nvars

def variable(nvars: int, i: int) -> Monomial:
    e = [0] * nvars
    e[i] = 1
    return tuple(e)

def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))

def monomials_of_degree(nvars: int, n: int):
    """All exponent tuples of total degree n (weak compositions)."""
    if nvars == 0:
        if n == 0:
            yield ()
        return
    for head in range(n + 1):
        for tail in monomials_of_degree(nvars - 1, n - head):
            yield (head,) + tail


# -- chain decomposition ----------------------------------------------------

def chain_decompose(m: Monomial) -> tuple[tuple[frozenset[int], int], ...]:
    """The unique multichain of nested layers whose product rebuilds ``m``.

    The layer at level j is ``{i : m_i >= j}``; equal consecutive layers
    are collected with a multiplicity.  Layers come out sorted by size,
    smallest (deepest) first.
    """
    if not any(m):
        return ()
    layers = []
    for j in range(1, max(m) + 1):
        layers.append(frozenset(i for i, e in enumerate(m) if e >= j))
    out = []
    for layer in reversed(layers):
        if out and out[-1][0] == layer:
            out[-1][1] += 1
        else:
            out.append([layer, 1])
    return tuple((s, k) for s, k in out)


def reconstruct(nvars: int, chain) -> Monomial:
    e = [0] * nvars
    for layer, mult in chain:
        for i in layer:
            e[i] += mult
    return tuple(e)


def fine_degree(m: Monomial) -> tuple[int, ...]:
    """Vector counting, per layer size, the layer repetitions of ``m``."""
    reps = [0] * len(m)
    for layer, mult in chain_decompose(m):
        reps[len(layer) - 1] += mult
    return tuple(reps)


def monomials_of_fine_degree(nvars: int, reps):
    """All monomials whose multichain has reps[s-1] layers of each size s."""
    total = sum((s + 1) * r for s, r in enumerate(reps))
    for m in monomials_of_degree(nvars, total):
        if fine_degree(m) == tuple(reps):
            yield m


def shape(m: Monomial) -> tuple[int, ...]:
    return tuple(sorted(m, reverse=True))


def _layers(m: Monomial) -> list[frozenset[int]]:
    return [layer for layer, mult in chain_decompose(m) for _ in range(mult)]


def star_monomials(a: Monomial, b: Monomial) -> Monomial | None:
    """Chain product of two monomials: ordinary product if the combined
    layer multiset is still a multichain, otherwise None (the term dies)."""
    for s, _ in chain_decompose(a):
        for t, _ in chain_decompose(b):
            if not (s <= t or t <= s):
                return None
    return monomial_mul(a, b)


# -- term orders ------------------------------------------------------------

@dataclass(frozen=True)
class TermOrder:
    """An admissible total order on monomials, exposed as a sort key.

    kinds:
      lex            plain lexicographic, earlier variables rank higher
      degrevlex      degree then reverse lexicographic
      shape          compare shapes by degrevlex, break ties by lex
                     (the order used for canonical orbit representatives)

    ``ranking`` permutes the variables before comparison; entry 0 names
    the highest-ranked variable.
    """

    kind: str = "shape"
    ranking: tuple[int, ...] | None = None

    def _arrange(self, m: Monomial) -> Monomial:
        if self.ranking is None:
            return m
        return tuple(m[i] for i in self.ranking)

    def key(self, m: Monomial):
        v = self._arrange(m)
        if self.kind == "lex":
            return v
        if self.kind == "degrevlex":
            return (sum(v), tuple(-e for e in reversed(v)))
        if self.kind == "shape":
            sh = tuple(sorted(v, reverse=True))
            return (sum(v), tuple(-e for e in reversed(sh)), v)
        raise ValueError(f"unknown term order kind {self.kind!r}")


SHAPE_LEX = TermOrder("shape")


# -- polynomials ------------------------------------------------------------

class Polynomial:
    """Finitely supported map from monomials to nonzero rationals."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in (terms.items() if isinstance(terms, dict) else terms):
                c = Fraction(c)
                if c:
                    clean[tuple(m)] = clean.get(tuple(m), Fraction(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}

    # construction helpers
    @staticmethod
    def zero(nvars: int) -> "Polynomial":
        return Polynomial(nvars)

    @staticmethod
    def one(nvars: int) -> "Polynomial":
        return Polynomial(nvars, {unit_monomial(nvars): 1})

    @staticmethod
    def monomial(nvars: int, m: Monomial, coeff=1) -> "Polynomial":
        return Polynomial(nvars, {tuple(m): coeff})

    @staticmethod
    def var(nvars: int, i: int) -> "Polynomial":
        return Polynomial.monomial(nvars, variable(nvars, i))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial(self.nvars, {unit_monomial(self.nvars): other})
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("polynomials over different variable sets")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial(self.nvars, {unit_monomial(self.nvars): other})
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial(self.nvars, {unit_monomial(self.nvars): other})
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.nvars, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = monomial_mul(ma, mb)
                out[m] = out.get(m, Fraction(0)) + ca * cb
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def star(self, other: "Polynomial") -> "Polynomial":
        """Chain product, extended bilinearly from the monomial rule."""
        self._check(other)
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = star_monomials(ma, mb)
                if m is not None:
                    out[m] = out.get(m, Fraction(0)) + ca * cb
        return Polynomial(self.nvars, out)

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def degree(self) -> int:
        return max((degree(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({degree(m) for m in self.terms}) <= 1

    def homogeneous_component(self, n: int) -> "Polynomial":
        return Polynomial(self.nvars, {m: c for m, c in self.terms.items() if degree(m) == n})

    def fine_components(self) -> dict[tuple[int, ...], "Polynomial"]:
        """Split into finely homogeneous parts, keyed by fine degree."""
        parts: dict[tuple[int, ...], dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(fine_degree(m), {})[m] = c
        return {fd: Polynomial(self.nvars, t) for fd, t in parts.items()}

    def is_finely_homogeneous(self) -> bool:
        return len({fine_degree(m) for m in self.terms}) <= 1

    def leading_monomial(self, order: TermOrder = SHAPE_LEX) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def sorted_terms(self, order: TermOrder = SHAPE_LEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def elementary_symmetric(d: int, nvars: int, points=None) -> Polynomial:
    """e_d on the given points (default: all variables): the sum of the
    square-free monomials x_S over the d-subsets S."""
    pts = sorted(points) if points is not None else list(range(nvars))
    if not 1 <= d <= len(pts):
        raise ValueError(f"degree {d} out of range for {len(pts)} points")
    terms = {}
    for s in itertools.combinations(pts, d):
        e = [0] * nvars
        for i in s:
            e[i] = 1
        terms[tuple(e)] = 1
    return Polynomial(nvars, terms)


# -- actions of local bijections ---------------------------------------------

def act_monomial(f: LocalBijection, m: Monomial) -> Monomial | None:
    """Image of a monomial under f, or None when the support escapes dom f."""
    if not support(m) <= f.domain:
        return None
    fd = f.as_dict()
    e = [0] * len(m)
    for i, exp in enumerate(m):
        if exp:
            e[fd[i]] = exp
    return tuple(e)


def act(f: LocalBijection, p: Polynomial) -> Polynomial:
    """Monoid action: kills the monomials whose support is not inside dom f.

    This action is multiplicative: f.(PQ) = (f.P)(f.Q).
    """
    out: dict = {}
    for m, c in p.terms.items():
        im = act_monomial(f, m)
        if im is not None:
            out[im] = out.get(im, Fraction(0)) + c
    return Polynomial(p.nvars, out)


def act_graded(f: LocalBijection, p: Polynomial) -> Polynomial:
    """Graded-basis action: kills every monomial whose support is not
    exactly dom f.  Not multiplicative."""
    out: dict = {}
    for m, c in p.terms.items():
        if support(m) == f.domain:
            im = act_monomial(f, m)
            out[im] = out.get(im, Fraction(0)) + c
    return Polynomial(p.nvars, out)


# -- derivations -------------------------------------------------------------

def derivation_D(p: Polynomial) -> Polynomial:
    """Sum of all partial derivatives; lowers degree by one."""
    out: dict = {}
    for m, c in p.terms.items():
        for i, e in enumerate(m):
            if e:
                dm = list(m)
                dm[i] -= 1
                dm = tuple(dm)
                out[dm] = out.get(dm, Fraction(0)) + c * e
    return Polynomial(p.nvars, out)


def steenrod(k: int, p: Polynomial) -> Polynomial:
    """Rational Steenrod operator sum_i x_i^{k+1} d/dx_i; raises degree by k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out: dict = {}
    for m, c in p.terms.items():
        for i, e in enumerate(m):
            if e:
                dm = list(m)
                dm[i] += k
                dm = tuple(dm)
                out[dm] = out.get(dm, Fraction(0)) + c * e
    return Polynomial(p.nvars, out)


# -- text format -------------------------------------------------------------
#
# "3/2*x1^2*x2 - x3": rational coefficient (omitted when +-1), variables
# x<index> with 1-based indices, ^ for exponents, terms joined by " + " or
# " - ".  format/parse round-trip bit-exactly.

_TOKEN = re.compile(r"\s*(?:(?P<coeff>\d+(?:/\d+)?)|x(?P<var>\d+)(?:\^(?P<exp>\d+))?|(?P<op>[*+-]))")


def format_polynomial(p: Polynomial, order: TermOrder = SHAPE_LEX) -> str:
    if not p.terms:
        return "0"
    chunks = []
    for m, c in p.sorted_terms(order):
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


def parse_polynomial(text: str, nvars: int) -> Polynomial:
    terms: list[tuple[Monomial, Fraction]] = []
    sign = 1
    coeff = None
    exps = None

    def flush():
        nonlocal sign, coeff, exps
        if coeff is None and exps is None:
            return
        c = Fraction(coeff if coeff is not None else 1) * sign
        terms.append((tuple(exps) if exps is not None else unit_monomial(nvars), c))
        sign, coeff, exps = 1, None, None

    pos = 0
    text = text.strip()
    if text == "0":
        return Polynomial.zero(nvars)
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise ValueError(f"bad polynomial syntax at position {pos}: {text[pos:]!r}")
        pos = match.end()
        if match["op"] == "+" or match["op"] == "-":
            flush()
            sign = 1 if match["op"] == "+" else -1
        elif match["op"] == "*":
            pass
        elif match["coeff"] is not None:
            coeff = Fraction(match["coeff"]) if coeff is None else coeff * Fraction(match["coeff"])
        else:
            i = int(match["var"]) - 1
            if not 0 <= i < nvars:
                raise ValueError(f"variable x{i + 1} out of range for {nvars} variables")
            if exps is None:
                exps = [0] * nvars
            exps[i] += int(match["exp"] or 1)
    flush()
    return Polynomial(nvars, terms)
