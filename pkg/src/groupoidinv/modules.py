"""Module structure of the invariant ring over the symmetric polynomials.

Three views are implemented:

* generators from orbit sums of strict-chain monomials, with the degree
  bound |X|(|X|+1)/2;
* degree-by-degree freeness checking by exact linear algebra, against the
  Hilbert-series prediction of a free module (the first deviation is a
  syzygy);
* the incidence-matrix test: a finely homogeneous family whose fine
  degrees match the fine Hilbert series is a basis of the chain-product
  module iff its incidence matrix against the maximal-chain (flag) orbits
  is invertible.  Entries are taken from the chain-product completion of
  each generator to flag monomials.

When the groupoid is intransitive, the symmetric polynomials on each
transitive component replace those on the whole variable set, and the
rank prediction becomes (product of component factorials) / |G(X,X)|.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .groupoids import PermutationGroupoid, underlying_group, transitive_components
from .linalg import RowSpace, is_invertible
from .orbits import leading_monomial, orbit, orbit_partition, orbit_sums_of_degree
from .polynomials import (
    SHAPE_LEX,
    Monomial,
    Polynomial,
    TermOrder,
    elementary_symmetric,
    fine_degree,
    degree as monomial_degree,
)
from .series import fine_hilbert_table


# -- chain generators ---------------------------------------------------------

@dataclass(frozen=True)
class ChainGenerator:
    """Orbit sum of a strict-chain monomial x_{S_1}...x_{S_k}, S_1 < ... < S_k."""

    chain: tuple[frozenset, ...]
    orbit_sum: Polynomial

    @property
    def degree(self) -> int:
        return sum(len(s) for s in self.chain)

    @property
    def fine_degree(self) -> tuple[int, ...]:
        reps = [0] * self.orbit_sum.nvars
        for s in self.chain:
            reps[len(s) - 1] += 1
        return tuple(reps)


def strict_chains(n: int):
    """All strictly increasing sequences of nonempty subsets of range(n)."""
    subsets = []
    for k in range(1, n + 1):
        subsets.extend(frozenset(c) for c in itertools.combinations(range(n), k))
    chains = [()]
    work = [((), frozenset())]
    while work:
        prefix, last = work.pop()
        for s in subsets:
            if (not last and s) or (last < s):
                chain = prefix + (s,)
                chains.append(chain)
                work.append((chain, s))
    return chains


def _chain_monomial(n: int, chain) -> Monomial:
    e = [0] * n
    for s in chain:
        for i in s:
            e[i] += 1
    return tuple(e)


def chain_generators(G: PermutationGroupoid) -> list[ChainGenerator]:
    """One generator per orbit of strict-chain monomials; the representative
    chain is the one of the orbit's leading monomial."""
    by_rep: dict[Monomial, tuple[frozenset, ...]] = {}
    for chain in strict_chains(G.n):
        m = _chain_monomial(G.n, chain)
        rep = leading_monomial(orbit(G, m))
        if rep not in by_rep or m == rep:
            by_rep.setdefault(rep, None)
            if m == rep:
                by_rep[rep] = chain
    gens = []
    for rep, chain in sorted(by_rep.items(), key=lambda t: SHAPE_LEX.key(t[0])):
        # the representative monomial is itself a chain monomial: orbits of
        # chain monomials consist of chain monomials with the same layer sizes
        assert chain is not None
        gens.append(ChainGenerator(chain, Polynomial(G.n, {m: 1 for m in orbit(G, rep)})))
    return gens


# -- symmetric polynomials per transitive component ----------------------------

def component_sym_generators(G: PermutationGroupoid, components=None):
    """(degree, polynomial) pairs for the elementary symmetric polynomials of
    each component of the variable set."""
    comps = components if components is not None else transitive_components(G)
    gens = []
    for comp in comps:
        for d in range(1, len(comp) + 1):
            gens.append((d, elementary_symmetric(d, G.n, comp)))
    return gens


def predicted_rank(G: PermutationGroupoid, components=None) -> int:
    comps = components if components is not None else transitive_components(G)
    num = math.prod(math.factorial(len(c)) for c in comps)
    return num // len(underlying_group(G))


def sym_hilbert_function(degrees, upto: int) -> list[int]:
    """Dimensions of the polynomial ring on independent generators of the
    given degrees (coin-counting DP)."""
    ways = [0] * (upto + 1)
    ways[0] = 1
    for d in degrees:
        for m in range(d, upto + 1):
            ways[m] += ways[m - d]
    return ways


# -- truncated freeness --------------------------------------------------------

@dataclass(frozen=True)
class FreenessReport:
    free_up_to: int
    generator_degrees: tuple[int, ...]
    generators: tuple[Polynomial, ...]
    first_syzygy_degree: int | None
    predicted_rank: int

    @property
    def is_free(self) -> bool:
        return self.first_syzygy_degree is None


def truncated_freeness(G: PermutationGroupoid, dmax: int, components=None) -> FreenessReport:
    """Select module generators degree by degree and watch for syzygies.

    At each degree the span of (positive-degree symmetric generators) times
    (lower invariants) is computed exactly; new generators are the orbit
    sums completing it to the full invariant slice, taken in decreasing
    leading-monomial order.  A syzygy shows up as the free-module
    dimension prediction exceeding the actual dimension.
    """
    sym_gens = component_sym_generators(G, components)
    sym_h = sym_hilbert_function([d for d, _ in sym_gens], dmax)
    module_basis: dict[int, list[Polynomial]] = {}
    generators: list[Polynomial] = []
    gen_degrees: list[int] = []
    first_syzygy = None
    for n in range(dmax + 1):
        invariants = orbit_sums_of_degree(G, n)
        space = RowSpace(SHAPE_LEX.key)
        for d, e in sym_gens:
            if d <= n:
                for u in module_basis.get(n - d, []):
                    space.add((e * u).terms)
        for o in invariants:
            if space.add(o.terms):
                generators.append(o)
                gen_degrees.append(n)
        predicted = sum(sym_h[n - d] for d in gen_degrees if d <= n)
        if predicted > len(invariants) and first_syzygy is None:
            first_syzygy = n
        module_basis[n] = invariants
    return FreenessReport(
        free_up_to=(first_syzygy - 1) if first_syzygy is not None else dmax,
        generator_degrees=tuple(gen_degrees),
        generators=tuple(generators),
        first_syzygy_degree=first_syzygy,
        predicted_rank=predicted_rank(G, components),
    )


# -- flags and the incidence matrix --------------------------------------------

def flag_monomial(n: int, perm) -> Monomial:
    """Monomial of the maximal chain {p_1} < {p_1,p_2} < ... : the j-th point
    of the permutation gets exponent n - j."""
    e = [0] * n
    for j, p in enumerate(perm):
        e[p] = n - j
    return tuple(e)


def flag_orbits(G: PermutationGroupoid) -> list[tuple[tuple[int, ...], ...]]:
    """Orbits of the n! maximal chains under the underlying permutation group."""
    group = underlying_group(G)
    todo = set(itertools.permutations(range(G.n)))
    orbits = []
    while todo:
        seed = min(todo)
        block = {seed}
        frontier = [seed]
        while frontier:
            sigma = frontier.pop()
            for g in group:
                image = tuple(g(p) for p in sigma)
                if image not in block:
                    block.add(image)
                    frontier.append(image)
        todo -= block
        orbits.append(tuple(sorted(block)))
    return sorted(orbits)


def incidence_matrix_freeness(G: PermutationGroupoid, family):
    """Incidence matrix of a candidate basis against the flag orbits.

    Each family member (a finely homogeneous invariant whose chain has at
    most one layer per size) is chain-multiplied by the elementary
    symmetric polynomials of the missing layer sizes; the entry at a flag
    orbit is the coefficient of its flag monomials in that completion.
    Returns (matrix, invertible).
    """
    n = G.n
    orbits = flag_orbits(G)
    if len(family) != len(orbits):
        raise ValueError(
            f"family size {len(family)} != predicted rank {len(orbits)}"
        )
    matrix = []
    for g in family:
        if not g.is_finely_homogeneous() or not g:
            raise ValueError("family members must be nonzero and finely homogeneous")
        reps = fine_degree(next(iter(g.terms)))
        if any(r > 1 for r in reps):
            raise ValueError("family member repeats a layer size; cannot complete to flags")
        completion = g
        for size in range(1, n + 1):
            if reps[size - 1] == 0:
                completion = completion.star(elementary_symmetric(size, n))
        row = []
        for block in orbits:
            values = {completion.coefficient(flag_monomial(n, sigma)) for sigma in block}
            if len(values) != 1:
                raise ValueError("completion is not constant on a flag orbit")
            row.append(values.pop())
        matrix.append(row)
    return matrix, is_invertible(matrix)


# -- fine prescription and the search for a free family -------------------------

@dataclass(frozen=True)
class FreeFamilySearch:
    found: tuple[Polynomial, ...] | None
    prescription: dict
    families_tested: int
    reason: str


def fine_prescription(G: PermutationGroupoid, box: int = 2) -> dict[tuple[int, ...], int]:
    """Formal fine-degree multiset of a would-be module basis: the fine
    Hilbert table times the product over layer sizes of (1 - t_s).

    Computed on the box 0 <= r_s <= ``box``; prescriptions of actual free
    modules are supported on 0/1 vectors (one generator per chain shape).
    """
    n = G.n
    table = fine_hilbert_table(G, (box,) * n)
    prescription = {}
    for reps in itertools.product(range(box + 1), repeat=n):
        total = 0
        for mask in itertools.product((0, 1), repeat=n):
            shifted = tuple(r - m for r, m in zip(reps, mask))
            if any(r < 0 for r in shifted):
                continue
            total += (-1) ** sum(mask) * table[shifted]
        if total:
            prescription[reps] = total
    return prescription


def search_free_family(G: PermutationGroupoid, box: int = 2) -> FreeFamilySearch:
    """Exhaustive search for a basis candidate matching the fine prescription.

    Candidates are drawn from orbit sums of each prescribed fine degree;
    every combination is run through the incidence-matrix test.  A
    negative or non-chain prescription already rules every family out,
    which is reported as exhaustion with zero candidates.
    """
    prescription = fine_prescription(G, box)
    if any(v < 0 for v in prescription.values()):
        return FreeFamilySearch(None, prescription, 0, "negative fine multiplicity")
    if any(any(r > 1 for r in reps) for reps in prescription):
        return FreeFamilySearch(None, prescription, 0, "prescription repeats a layer size")
    if sum(prescription.values()) != len(flag_orbits(G)):
        return FreeFamilySearch(None, prescription, 0, "prescription size differs from rank")
    pools = []
    for reps, count in sorted(prescription.items()):
        deg = sum((s + 1) * r for s, r in enumerate(reps))
        sums = [
            o for o in orbit_sums_of_degree(G, deg)
            if fine_degree(next(iter(o.terms))) == reps
        ]
        if len(sums) < count:
            return FreeFamilySearch(None, prescription, 0, "not enough orbit sums in a slot")
        pools.append(list(itertools.combinations(sums, count)))
    tested = 0
    for choice in itertools.product(*pools):
        family = [g for block in choice for g in block]
        tested += 1
        _, invertible = incidence_matrix_freeness(G, family)
        if invertible:
            return FreeFamilySearch(tuple(family), prescription, tested, "invertible family found")
    return FreeFamilySearch(None, prescription, tested, "all candidate families singular")


# -- SAGBI finiteness and the initial-monoid explorer ----------------------------

def sagbi_finite(G: PermutationGroupoid, order: TermOrder | None = None) -> bool:
    """Whether the invariant ring has a finite SAGBI basis (for any admissible
    term order): exactly when G comes from a group generated by the
    transpositions it contains."""
    from .groupoids import reflection_criterion

    return reflection_criterion(G)


def initial_monoid_explorer(
    G: PermutationGroupoid, order: TermOrder, dmax: int
) -> list[Monomial]:
    """Initial monomials of orbit sums, up to degree dmax, that are not
    products of two smaller ones.  A list that keeps growing with dmax is
    empirical evidence of non-finiteness, never a proof."""
    initials: set[Monomial] = set()
    for n in range(1, dmax + 1):
        for o in orbit_partition(G, n):
            initials.add(leading_monomial(o, order))
    new = []
    for v in sorted(initials, key=order.key):
        decomposable = False
        for u in initials:
            if 0 < monomial_degree(u) < monomial_degree(v):
                w = tuple(a - b for a, b in zip(v, u))
                if all(c >= 0 for c in w) and w in initials:
                    decomposable = True
                    break
        if not decomposable:
            new.append(v)
    return new


# -- algebra generation degrees (for both products) ------------------------------

def algebra_generator_counts(G: PermutationGroupoid, dmax: int, product: str = "ordinary"):
    """Number of new algebra generators of the invariant ring per degree,
    under the ordinary or the chain product."""
    if product not in ("ordinary", "star"):
        raise ValueError("product must be 'ordinary' or 'star'")
    slices: dict[int, list[Polynomial]] = {0: [Polynomial.one(G.n)]}
    counts = {}
    for n in range(1, dmax + 1):
        invariants = orbit_sums_of_degree(G, n)
        space = RowSpace(SHAPE_LEX.key)
        for i in range(1, n):
            for p in slices[i]:
                for q in slices[n - i]:
                    prod = p * q if product == "ordinary" else p.star(q)
                    if prod:
                        space.add(prod.terms)
        counts[n] = sum(1 for o in invariants if space.add(o.terms))
        slices[n] = invariants
    return counts


def generated_subalgebra_dims(G: PermutationGroupoid, gens, dmax: int, product: str = "ordinary"):
    """Dimensions per degree of the subalgebra generated by ``gens``."""
    star = product == "star"
    slices: dict[int, RowSpace] = {0: RowSpace(SHAPE_LEX.key)}
    slices[0].add(Polynomial.one(G.n).terms)
    basis: dict[int, list[Polynomial]] = {0: [Polynomial.one(G.n)]}
    for n in range(1, dmax + 1):
        space = RowSpace(SHAPE_LEX.key)
        vecs = []
        for g in gens:
            d = g.degree()
            if not g or d == 0 or d > n:
                continue
            for p in basis.get(n - d, []):
                prod = g.star(p) if star else g * p
                if prod and space.add(prod.terms):
                    vecs.append(prod)
        slices[n] = space
        basis[n] = vecs
    return {n: slices[n].rank for n in range(dmax + 1)}
