"""Orbits of monomials under the partial groupoid action, orbit sums,
and the Reynolds projector onto the invariant ring.

A local bijection applies to a monomial only when it covers its support,
so the action is partial; orbits are the connected components of the
single-application graph.  Orbit sums are a linear basis of the
invariant ring.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import GRADED, AlgebraElement
from .groupoids import PermutationGroupoid
from .linalg import RowSpace
from .polynomials import (
    SHAPE_LEX,
    Monomial,
    Polynomial,
    TermOrder,
    act_monomial,
    degree,
    elementary_symmetric,
    monomials_of_degree,
    support,
    unit_monomial,
)


def orbit(G: PermutationGroupoid, m: Monomial) -> frozenset[Monomial]:
    """Transitive closure of single-element applications starting at ``m``."""
    m = tuple(m)
    if len(m) != G.n:
        raise ValueError("monomial has wrong number of variables")
    seen = {m}
    frontier = [m]
    while frontier:
        cur = frontier.pop()
        for f in G.applicable_to(support(cur)):
            img = act_monomial(f, cur)
            if img not in seen:
                seen.add(img)
                frontier.append(img)
    return frozenset(seen)


def leading_monomial(members, order: TermOrder = SHAPE_LEX) -> Monomial:
    """Canonical representative: the maximal member under the term order."""
    return max(members, key=order.key)


def orbit_partition(G: PermutationGroupoid, n: int) -> list[frozenset[Monomial]]:
    """Orbits of all degree-n monomials, sorted by decreasing leading monomial."""
    todo = set(monomials_of_degree(G.n, n))
    orbits = []
    while todo:
        o = orbit(G, next(iter(todo)))
        todo -= o
        orbits.append(o)
    return sorted(orbits, key=lambda o: SHAPE_LEX.key(leading_monomial(o)), reverse=True)


def orbit_count(G: PermutationGroupoid, n: int) -> int:
    """dim of the degree-n slice of the invariant ring."""
    return len(orbit_partition(G, n))


def orbit_sum(G: PermutationGroupoid, m: Monomial) -> Polynomial:
    return Polynomial(G.n, {mm: 1 for mm in orbit(G, m)})


def orbit_sums_of_degree(G: PermutationGroupoid, n: int) -> list[Polynomial]:
    """One orbit sum per orbit of degree-n monomials, by decreasing leading monomial."""
    return [Polynomial(G.n, {m: 1 for m in o}) for o in orbit_partition(G, n)]


def is_invariant(G: PermutationGroupoid, p: Polynomial) -> bool:
    """True iff the coefficients of ``p`` are constant on every orbit it meets."""
    checked: set[Monomial] = set()
    for m in p.terms:
        if m in checked:
            continue
        o = orbit(G, m)
        checked |= o
        coeffs = {p.coefficient(mm) for mm in o}
        if len(coeffs) > 1:
            return False
    return True


def orbit_decompose(G: PermutationGroupoid, p: Polynomial) -> dict[Monomial, Fraction]:
    """Write an invariant as a combination of orbit sums, keyed by the
    leading monomial of each orbit.  Raises on non-invariant input."""
    out: dict[Monomial, Fraction] = {}
    rest = dict(p.terms)
    while rest:
        m = next(iter(rest))
        o = orbit(G, m)
        coeffs = {rest.get(mm, Fraction(0)) for mm in o}
        if len(coeffs) != 1:
            raise ValueError("polynomial is not invariant")
        (c,) = coeffs
        out[leading_monomial(o)] = c
        for mm in o:
            rest.pop(mm, None)
    return out


def product_in_orbit_basis(
    G: PermutationGroupoid, a: Polynomial, b: Polynomial
) -> dict[Monomial, Fraction]:
    """Expand the product of two invariants over the orbit-sum basis.

    Keys are canonical orbit representatives (leading monomials).
    """
    if not is_invariant(G, a) or not is_invariant(G, b):
        raise ValueError("both factors must be invariant")
    return orbit_decompose(G, a * b)


# -- Reynolds operator -------------------------------------------------------

@dataclass(frozen=True)
class ReynoldsOperator:
    """Idempotent element of the groupoid algebra projecting onto invariants.

    One block per domain A: the average, in the graded basis, of all
    elements with that exact domain.
    """

    element: AlgebraElement

    def apply(self, p: Polynomial) -> Polynomial:
        return self.element.apply(p)


def reynolds(G: PermutationGroupoid) -> ReynoldsOperator:
    coeffs = {}
    for k in range(G.n + 1):
        for dom in itertools.combinations(range(G.n), k):
            block = G.with_domain(dom)
            share = Fraction(1, len(block))
            for g in block:
                coeffs[g] = share
    return ReynoldsOperator(AlgebraElement.make(G, GRADED, coeffs))


def apply_reynolds(R: ReynoldsOperator, p: Polynomial) -> Polynomial:
    return R.apply(p)


def reynolds_matrix(G: PermutationGroupoid, R: ReynoldsOperator, n: int):
    """The action of R on the degree-n monomial basis, as columns."""
    basis = sorted(monomials_of_degree(G.n, n), key=SHAPE_LEX.key, reverse=True)
    return basis, {m: R.apply(Polynomial.monomial(G.n, m)) for m in basis}


def reynolds_is_projector(G: PermutationGroupoid, R: ReynoldsOperator, n: int) -> bool:
    """Check R(R(m)) = R(m) for every degree-n monomial."""
    basis, cols = reynolds_matrix(G, R, n)
    return all(R.apply(cols[m]) == cols[m] for m in basis)


def reynolds_image_rank(G: PermutationGroupoid, R: ReynoldsOperator, n: int) -> int:
    _, cols = reynolds_matrix(G, R, n)
    space = RowSpace(SHAPE_LEX.key)
    for col in cols.values():
        space.add(col.terms)
    return space.rank


def reynolds_is_sym_morphism(G: PermutationGroupoid, dmax: int = 4) -> tuple[bool, tuple | None]:
    """Test R(e_d p) = e_d R(p) for all d and all monomials p of degree <= dmax.

    Returns the verdict and, when it fails, a witness pair (d, monomial).
    """
    R = reynolds(G)
    es = [elementary_symmetric(d, G.n) for d in range(1, G.n + 1)]
    for deg in range(dmax + 1):
        for m in monomials_of_degree(G.n, deg):
            p = Polynomial.monomial(G.n, m)
            rp = R.apply(p)
            for d, e in enumerate(es, start=1):
                if R.apply(e * p) != e * rp:
                    return False, (d, m)
    return True, None
