"""Finite relational structures, brute-force isomorphism, profiles,
monomorphic decompositions, and layered (blow-up) structures.

A structure is a ground set ``range(n)`` plus an ordered list of named
relations, each a set of tuples.  Isomorphism matches relations by
position in that list (the signature is the tuple of arities).

Layered structures describe infinite blow-ups with finitely many
interchangeable-point components: a finite quotient structure with a
multiplicity (a positive integer or None for unbounded) per point.  A
finite slice with d_i points in component i realizes every subset whose
traces have those sizes, because the lifted relations only depend on
component indices; profiles are therefore computed on one canonical
realization per trace vector.  Lifted tuples take pairwise distinct
points; the block equivalence can be included as an extra binary
relation when the blow-up is meant to carry it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .polynomials import SHAPE_LEX, chain_decompose
from .series import RationalSeries, fit_series

ISO_GUARD = 10


class GuardExceeded(ValueError):
    pass


class RelationalStructure:
    """Ground set range(n) with an ordered family of named relations."""

    def __init__(self, n: int, relations):
        self.n = n
        rels = []
        for name, arity, tuples in relations:
            tuples = frozenset(tuple(t) for t in tuples)
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} does not match arity {arity}")
                if any(not 0 <= x < n for x in t):
                    raise ValueError(f"tuple {t} outside ground set")
            rels.append((str(name), int(arity), tuples))
        self.relations = tuple(rels)

    @property
    def signature(self) -> tuple[int, ...]:
        return tuple(arity for _, arity, _ in self.relations)

    def __eq__(self, other):
        return (
            isinstance(other, RelationalStructure)
            and self.n == other.n
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.n, self.relations))

    def __repr__(self):
        rels = ", ".join(f"{name}/{arity}:{len(t)}" for name, arity, t in self.relations)
        return f"RelationalStructure(n={self.n}, {rels})"


def induced(R: RelationalStructure, points) -> RelationalStructure:
    """Substructure on the given points, relabeled onto range(len(points))."""
    pts = sorted(set(points))
    if any(not 0 <= p < R.n for p in pts):
        raise ValueError("points outside ground set")
    index = {p: i for i, p in enumerate(pts)}
    keep = set(pts)
    rels = []
    for name, arity, tuples in R.relations:
        rels.append(
            (name, arity,
             frozenset(tuple(index[x] for x in t) for t in tuples if set(t) <= keep))
        )
    return RelationalStructure(len(pts), rels)


# -- color refinement ----------------------------------------------------------

def _refined_colors(R: RelationalStructure) -> list[int]:
    """Iterated color refinement; colors are canonical ranks, so equal
    structures (up to isomorphism) get equal color histograms."""
    tuples_by_elem: list[list[tuple[int, int, tuple]]] = [[] for _ in range(R.n)]
    for ri, (_, _, tuples) in enumerate(R.relations):
        for t in tuples:
            for e in set(t):
                positions = tuple(i for i, x in enumerate(t) if x == e)
                tuples_by_elem[e].append((ri, positions, t))

    def rank(signatures):
        order = {s: i for i, s in enumerate(sorted(set(signatures)))}
        return [order[s] for s in signatures]

    colors = rank(
        [tuple(sorted((ri, pos) for ri, pos, _ in tuples_by_elem[e]))
         for e in range(R.n)]
    )
    for _ in range(R.n + 1):
        sigs = []
        for e in range(R.n):
            local = sorted(
                (ri, pos, tuple(colors[x] for x in t))
                for ri, pos, t in tuples_by_elem[e]
            )
            sigs.append((colors[e], tuple(local)))
        new = rank(sigs)
        if new == colors:
            break
        colors = new
    return colors


def refinement_invariant(R: RelationalStructure):
    """Isomorphism-invariant fingerprint used to bucket structures before
    running the exact search."""
    colors = _refined_colors(R)
    histogram = tuple(sorted((c, colors.count(c)) for c in set(colors)))
    rel_profiles = []
    for _, arity, tuples in R.relations:
        rel_profiles.append(
            tuple(sorted(tuple(colors[x] for x in t) for t in tuples))
        )
    return (R.n, R.signature, histogram, tuple(rel_profiles))


# -- exact isomorphism ----------------------------------------------------------

def _find_isomorphism(R1: RelationalStructure, R2: RelationalStructure):
    """Backtracking bijection search with color pruning; None if none exists."""
    if R1.n != R2.n:
        return None
    c1, c2 = _refined_colors(R1), _refined_colors(R2)
    if sorted(c1) != sorted(c2):
        return None
    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(c2):
        by_color.setdefault(c, []).append(v)
    order = sorted(range(R1.n), key=lambda e: (len(by_color.get(c1[e], ())), c1[e], e))

    tuples_by_elem: list[list[tuple[int, tuple]]] = [[] for _ in range(R1.n)]
    for ri, (_, _, tuples) in enumerate(R1.relations):
        for t in tuples:
            for e in set(t):
                tuples_by_elem[e].append((ri, t))
    rel2 = [tuples for _, _, tuples in R2.relations]
    rel1 = [tuples for _, _, tuples in R1.relations]

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(e: int) -> bool:
        for ri, t in tuples_by_elem[e]:
            if all(x in mapping for x in t):
                if (tuple(mapping[x] for x in t) in rel2[ri]) != (t in rel1[ri]):
                    return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        e = order[i]
        for v in by_color.get(c1[e], ()):
            if v in used:
                continue
            mapping[e] = v
            used.add(v)
            if consistent(e) and extend(i + 1):
                return True
            del mapping[e]
            used.discard(v)
        return False

    # a bijection preserving R1-tuples into R2 needs equal tuple counts to
    # be an isomorphism; check cheaply up front
    if any(len(a) != len(b) for a, b in zip(rel1, rel2)):
        return None
    return dict(mapping) if extend(0) else None


def isomorphic(R1: RelationalStructure, R2: RelationalStructure, guard: int = ISO_GUARD) -> bool:
    """Exact isomorphism test by exhaustive search with refinement pruning."""
    if R1.signature != R2.signature:
        raise ValueError(f"signature mismatch: {R1.signature} vs {R2.signature}")
    if max(R1.n, R2.n) > guard:
        raise GuardExceeded(
            f"ground size {max(R1.n, R2.n)} exceeds guard {guard}; pass a larger guard to override"
        )
    if R1.n != R2.n:
        return False
    if refinement_invariant(R1) != refinement_invariant(R2):
        return False
    return _find_isomorphism(R1, R2) is not None


class IsoClassifier:
    """Groups structures into isomorphism classes, bucketing by the
    refinement invariant so exact searches only run within buckets."""

    def __init__(self):
        self.buckets: dict = {}
        self.classes: list = []

    def classify(self, R: RelationalStructure, payload=None) -> int:
        key = refinement_invariant(R)
        for idx in self.buckets.get(key, ()):
            rep, members = self.classes[idx]
            if _find_isomorphism(rep, R) is not None:
                members.append(payload)
                return idx
        idx = len(self.classes)
        self.classes.append((R, [payload]))
        self.buckets.setdefault(key, []).append(idx)
        return idx


def profile(R: RelationalStructure, n: int, guard: int = ISO_GUARD) -> int:
    """Number of isomorphism classes of induced n-point substructures."""
    if R.n > 2 * guard:
        raise GuardExceeded(f"ground size {R.n} exceeds profile guard {2 * guard}")
    classifier = IsoClassifier()
    for points in itertools.combinations(range(R.n), n):
        classifier.classify(induced(R, points), points)
    return len(classifier.classes)


# -- monomorphic parts and decompositions ---------------------------------------

def is_monomorphic_part(R: RelationalStructure, part) -> bool:
    """B is a monomorphic part when same-size subsets that agree outside B
    induce isomorphic structures."""
    inside = sorted(set(part))
    outside = [p for p in range(R.n) if p not in set(inside)]
    for d in range(len(outside) + 1):
        for base in itertools.combinations(outside, d):
            cache: dict[int, list] = {}
            for a in range(len(inside) + 1):
                for extra in itertools.combinations(inside, a):
                    cache.setdefault(a, []).append(induced(R, base + extra))
            for group in cache.values():
                rep = group[0]
                for other in group[1:]:
                    if _find_isomorphism(rep, other) is None:
                        return False
    return True


def _pair_is_part(R: RelationalStructure, x: int, y: int) -> bool:
    rest = [p for p in range(R.n) if p not in (x, y)]
    for d in range(len(rest) + 1):
        for base in itertools.combinations(rest, d):
            a = induced(R, base + (x,))
            b = induced(R, base + (y,))
            if refinement_invariant(a) != refinement_invariant(b):
                return False
            if _find_isomorphism(a, b) is None:
                return False
    return True


def canonical_decomposition(R: RelationalStructure, guard: int = ISO_GUARD) -> list[tuple[int, ...]]:
    """The partition of the ground set into largest monomorphic parts.

    Two points share a part exactly when the pair is one (subsets of parts
    are parts, intersecting parts merge), so pair tests plus union-find
    produce the coarsest decomposition.
    """
    if R.n > guard + 2:
        raise GuardExceeded(f"ground size {R.n} exceeds guard {guard + 2}")
    parent = list(range(R.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, y in itertools.combinations(range(R.n), 2):
        if find(x) != find(y) and _pair_is_part(R, x, y):
            parent[find(x)] = find(y)
    blocks: dict[int, list[int]] = {}
    for p in range(R.n):
        blocks.setdefault(find(p), []).append(p)
    return sorted(tuple(sorted(b)) for b in blocks.values())


def largest_monomorphic_part(R: RelationalStructure, x: int, guard: int = ISO_GUARD) -> tuple[int, ...]:
    for block in canonical_decomposition(R, guard):
        if x in block:
            return block
    raise ValueError(f"point {x} outside ground set")


def is_monomorphic_decomposition(R: RelationalStructure, blocks) -> bool:
    """Definition check: equal per-block trace sizes must force isomorphism."""
    blocks = [tuple(sorted(b)) for b in blocks]
    flat = sorted(p for b in blocks for p in b)
    if flat != list(range(R.n)):
        raise ValueError("blocks do not partition the ground set")
    for n in range(R.n + 1):
        groups: dict[tuple[int, ...], list] = {}
        for points in itertools.combinations(range(R.n), n):
            trace = tuple(len(set(points) & set(b)) for b in blocks)
            groups.setdefault(trace, []).append(points)
        for members in groups.values():
            rep = induced(R, members[0])
            for other in members[1:]:
                if _find_isomorphism(rep, induced(R, other)) is None:
                    return False
    return True


def refines(finer, coarser) -> bool:
    """Every block of ``finer`` lies inside a block of ``coarser``."""
    return all(
        any(set(b) <= set(c) for c in coarser) for b in finer
    )


# -- layered structures ----------------------------------------------------------

UNBOUNDED = None


@dataclass(frozen=True)
class LayeredStructure:
    """Blow-up of a finite quotient structure with per-point multiplicities.

    ``multiplicities[i]`` is a positive integer or None for an unbounded
    component.  ``include_equiv`` adds the block equivalence (all ordered
    pairs within a component) as an extra binary relation of the blow-up.
    """

    quotient: RelationalStructure
    multiplicities: tuple
    include_equiv: bool = False

    def __post_init__(self):
        if len(self.multiplicities) != self.quotient.n:
            raise ValueError("one multiplicity per quotient point required")
        for m in self.multiplicities:
            if m is not UNBOUNDED and (not isinstance(m, int) or m < 1):
                raise ValueError(f"bad multiplicity {m!r}")

    @property
    def unbounded_count(self) -> int:
        return sum(1 for m in self.multiplicities if m is UNBOUNDED)

    def cap(self, i: int, n: int) -> int:
        m = self.multiplicities[i]
        return n if m is UNBOUNDED else min(m, n)

    def trace_vectors(self, n: int):
        """All admissible trace vectors for an n-point subset."""
        k = self.quotient.n

        def rec(i, remaining):
            if i == k:
                if remaining == 0:
                    yield ()
                return
            for d in range(min(self.cap(i, n), remaining) + 1):
                for rest in rec(i + 1, remaining - d):
                    yield (d,) + rest

        yield from rec(0, n)

    def realize(self, trace) -> RelationalStructure:
        """Canonical induced structure on a subset with the given traces."""
        trace = tuple(trace)
        offsets = []
        total = 0
        for d in trace:
            offsets.append(total)
            total += d
        block = [range(offsets[i], offsets[i] + trace[i]) for i in range(len(trace))]
        rels = []
        for name, arity, tuples in self.quotient.relations:
            lifted = set()
            for t in tuples:
                for choice in itertools.product(*(block[i] for i in t)):
                    if len(set(choice)) == arity:
                        lifted.add(choice)
            rels.append((name, arity, lifted))
        if self.include_equiv:
            eq = set()
            for i in range(len(trace)):
                for a in block[i]:
                    for b in block[i]:
                        eq.add((a, b))
            rels.append(("equiv", 2, eq))
        return RelationalStructure(total, rels)


def profile_layered(L: LayeredStructure, n: int) -> int:
    """Isomorphism classes of n-point subsets of the blow-up."""
    classifier = IsoClassifier()
    for trace in L.trace_vectors(n):
        classifier.classify(L.realize(trace), trace)
    return len(classifier.classes)


def _leading_trace_vectors(L: LayeredStructure, n: int) -> set[tuple[int, ...]]:
    """Canonical (maximal) trace vector of each isomorphism class, viewed as
    monomials over the quotient points under the shape-then-lex order."""
    classifier = IsoClassifier()
    for trace in L.trace_vectors(n):
        classifier.classify(L.realize(trace), trace)
    return {
        max(members, key=SHAPE_LEX.key) for _, members in classifier.classes
    }


def check_addlayer(L: LayeredStructure, dmax: int) -> bool:
    """For every leading trace monomial m of degree <= dmax and every layer
    S of m: either S hits an exhausted finite component, or m*x_S is again
    leading."""
    leaders_by_degree = {
        n: _leading_trace_vectors(L, n) for n in range(dmax + L.quotient.n + 1)
    }
    for n in range(dmax + 1):
        for m in leaders_by_degree[n]:
            for layer, _ in chain_decompose(m):
                if any(
                    L.multiplicities[i] is not UNBOUNDED and m[i] == L.multiplicities[i]
                    for i in layer
                ):
                    continue
                bumped = tuple(e + (1 if i in layer else 0) for i, e in enumerate(m))
                if bumped not in leaders_by_degree[n + len(layer)]:
                    return False
    return True


def profile_series(L: LayeredStructure, margin: int = 10) -> RationalSeries:
    """Generating series of the profile over (1-Z)(1-Z^2)...(1-Z^k), where
    k counts the unbounded components."""
    k = L.unbounded_count
    if k < 1:
        raise ValueError("profile series needs at least one unbounded component")
    den = tuple(range(1, k + 1))
    upto = sum(den) + margin
    counts = [profile_layered(L, n) for n in range(upto + 1)]
    return fit_series(counts, den, margin)


def groupoid_blowup(G, include_equiv: bool = True) -> LayeredStructure:
    """Blow-up of the relational structure realizing a permutation groupoid,
    with every component unbounded."""
    from .groupoids import to_relational_structure

    return LayeredStructure(
        to_relational_structure(G), (UNBOUNDED,) * G.n, include_equiv
    )
