"""The algebra of a permutation groupoid, in its two bases.

The same vector space K.G carries two products: the monoid basis {f}
multiplies by extended composition, the graded basis {gr f} multiplies by
composition when the inner image matches the outer domain and kills the
pair otherwise.  The change of basis is the subset zeta transform

    f  ->  sum over A <= dom f of gr(f|A)

with inverse given by Moebius inversion over the boolean lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .groupoids import LocalBijection, PermutationGroupoid, compose_monoid
from .polynomials import Polynomial, act, act_graded

MONOID = "monoid"
GRADED = "graded"


@dataclass(frozen=True)
class AlgebraElement:
    """A finitely supported rational combination of groupoid elements."""

    groupoid: PermutationGroupoid
    basis: str
    coeffs: tuple[tuple[LocalBijection, Fraction], ...]

    @staticmethod
    def make(G: PermutationGroupoid, basis: str, coeffs) -> "AlgebraElement":
        if basis not in (MONOID, GRADED):
            raise ValueError(f"unknown basis {basis!r}")
        acc: dict[LocalBijection, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for f, c in items:
            if f not in G:
                raise ValueError(f"{f} is not an element of the groupoid")
            c = Fraction(c)
            if c:
                acc[f] = acc.get(f, Fraction(0)) + c
        acc = {f: c for f, c in acc.items() if c}
        ordered = tuple(sorted(acc.items(), key=lambda t: t[0].sort_key()))
        return AlgebraElement(G, basis, ordered)

    def as_dict(self) -> dict[LocalBijection, Fraction]:
        return dict(self.coeffs)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if self.basis != other.basis or self.groupoid != other.groupoid:
            raise ValueError("mismatched algebra elements")
        acc = self.as_dict()
        for f, c in other.coeffs:
            acc[f] = acc.get(f, Fraction(0)) + c
        return AlgebraElement.make(self.groupoid, self.basis, acc)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement.make(
            self.groupoid, self.basis, {f: c * v for f, v in self.coeffs}
        )

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        if self.basis != other.basis or self.groupoid != other.groupoid:
            raise ValueError("mismatched algebra elements")
        acc: dict[LocalBijection, Fraction] = {}
        for f, cf in self.coeffs:
            for g, cg in other.coeffs:
                if self.basis == MONOID:
                    h = compose_monoid(f, g)
                elif g.image == f.domain:
                    h = f.after(g)
                else:
                    continue
                acc[h] = acc.get(h, Fraction(0)) + cf * cg
        return AlgebraElement.make(self.groupoid, self.basis, acc)

    def apply(self, p: Polynomial) -> Polynomial:
        """Linear action on polynomials through the basis elements."""
        action = act if self.basis == MONOID else act_graded
        out = Polynomial.zero(p.nvars)
        for f, c in self.coeffs:
            out = out + c * action(f, p)
        return out


def _subsets(s: frozenset[int]):
    items = sorted(s)
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def monoid_to_graded(a: AlgebraElement) -> AlgebraElement:
    """Zeta transform f -> sum of gr(f|A) over subsets A of dom f."""
    if a.basis != MONOID:
        raise ValueError("expected a monoid-basis element")
    acc: dict[LocalBijection, Fraction] = {}
    for f, c in a.coeffs:
        for sub in _subsets(f.domain):
            g = f.restrict(sub)
            acc[g] = acc.get(g, Fraction(0)) + c
    return AlgebraElement.make(a.groupoid, GRADED, acc)


def graded_to_monoid(a: AlgebraElement) -> AlgebraElement:
    """Moebius inversion gr f -> sum of (-1)^(|dom f| - |A|) f|A."""
    if a.basis != GRADED:
        raise ValueError("expected a graded-basis element")
    acc: dict[LocalBijection, Fraction] = {}
    for f, c in a.coeffs:
        d = len(f.domain)
        for sub in _subsets(f.domain):
            g = f.restrict(sub)
            sign = -1 if (d - len(sub)) % 2 else 1
            acc[g] = acc.get(g, Fraction(0)) + sign * c
    return AlgebraElement.make(a.groupoid, MONOID, acc)
