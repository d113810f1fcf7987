"""Local bijections of a finite ground set and permutation groupoids.

The ground set is always ``{0, 1, ..., n-1}``.  A local bijection is an
injective partial map; a permutation groupoid is a finite set of local
bijections containing the identity on the whole ground set and closed
under restriction, inverse, and composition of composable pairs.

Groupoids are stored extensionally (the full element set).  For the
ground sizes this library targets (n <= 6 or so) that keeps every
closure axiom directly checkable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce


@dataclass(frozen=True)
class LocalBijection:
    """An injective map between two subsets of ``range(n)``.

    ``pairs`` holds the graph of the map as ``(source, target)`` tuples
    sorted by source, which makes equal maps compare and hash equal.
    """

    n: int
    pairs: tuple[tuple[int, int], ...]

    @staticmethod
    def from_dict(n: int, mapping: dict[int, int]) -> "LocalBijection":
        for a, b in mapping.items():
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"point {a}->{b} outside ground set of size {n}")
        if len(set(mapping.values())) != len(mapping):
            raise ValueError(f"mapping {mapping} is not injective")
        return LocalBijection(n, tuple(sorted(mapping.items())))

    @staticmethod
    def identity(n: int, domain=None) -> "LocalBijection":
        pts = range(n) if domain is None else sorted(domain)
        return LocalBijection(n, tuple((p, p) for p in pts))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(b for _, b in self.pairs)

    @property
    def rank(self) -> int:
        return len(self.pairs)

    def __call__(self, x: int) -> int:
        for a, b in self.pairs:
            if a == x:
                return b
        raise KeyError(x)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def inverse(self) -> "LocalBijection":
        return LocalBijection(self.n, tuple(sorted((b, a) for a, b in self.pairs)))

    def restrict(self, subset) -> "LocalBijection":
        sub = set(subset)
        if not sub <= self.domain:
            raise ValueError(f"{sorted(sub)} not contained in domain {sorted(self.domain)}")
        return LocalBijection(self.n, tuple(p for p in self.pairs if p[0] in sub))

    def after(self, g: "LocalBijection") -> "LocalBijection":
        """Groupoid composition self o g, defined only when im g = dom self."""
        if self.n != g.n:
            raise ValueError("ground sets differ")
        if g.image != self.domain:
            raise ValueError("not composable: image of g differs from domain of f")
        m = self.as_dict()
        return LocalBijection(self.n, tuple(sorted((a, m[b]) for a, b in g.pairs)))

    def sort_key(self):
        """Canonical order: by rank, then domain, then images in domain order."""
        return (self.rank, tuple(a for a, _ in self.pairs), tuple(b for _, b in self.pairs))

    def __repr__(self):
        if not self.pairs:
            return "LocalBijection{}"
        body = " ".join(f"{a}->{b}" for a, b in self.pairs)
        return f"LocalBijection{{{body}}}"


def compose_monoid(f: LocalBijection, g: LocalBijection) -> LocalBijection:
    """Extended composition: f o g on the largest domain where f(g(x)) makes sense.

    The domain is ``g^-1(im g & dom f)``; the empty local bijection is a
    perfectly valid result.  This product turns any permutation groupoid
    into a monoid with unit the identity on the whole ground set.
    """
    if f.n != g.n:
        raise ValueError("ground sets differ")
    fd = f.as_dict()
    return LocalBijection(f.n, tuple(sorted((a, fd[b]) for a, b in g.pairs if b in fd)))


def all_local_bijections(n: int) -> list[LocalBijection]:
    """Every local bijection of ``range(n)``, i.e. the full symmetric inverse monoid."""
    out = []
    points = range(n)
    for k in range(n + 1):
        for dom in itertools.combinations(points, k):
            for img in itertools.permutations(points, k):
                out.append(LocalBijection(n, tuple(sorted(zip(dom, img)))))
    return out


class PermutationGroupoid:
    """A set of local bijections of ``range(n)`` satisfying the groupoid axioms."""

    def __init__(self, n: int, elements):
        self.n = n
        self.elements = frozenset(elements)

    def __eq__(self, other):
        return (
            isinstance(other, PermutationGroupoid)
            and self.n == other.n
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash((self.n, self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements, key=LocalBijection.sort_key))

    def __contains__(self, f):
        return f in self.elements

    def __repr__(self):
        return f"PermutationGroupoid(n={self.n}, {len(self.elements)} elements)"

    def with_domain(self, domain) -> list[LocalBijection]:
        dom = frozenset(domain)
        return sorted(
            (f for f in self.elements if f.domain == dom), key=LocalBijection.sort_key
        )

    def applicable_to(self, support) -> list[LocalBijection]:
        """Elements whose domain contains the given point set."""
        s = frozenset(support)
        return sorted(
            (f for f in self.elements if s <= f.domain), key=LocalBijection.sort_key
        )


def close(generators, n: int) -> PermutationGroupoid:
    """Smallest permutation groupoid on ``range(n)`` containing the generators.

    Worklist fixpoint over the three closure rules (inverse, restriction,
    composition of composable pairs), seeded with the identity on the full
    ground set.  Restriction is generated by single-point deletions, which
    suffices by induction on the domain size.
    """
    gens = list(generators)
    for g in gens:
        if g.n != n:
            raise ValueError("generator ground size differs from n")
    els: set[LocalBijection] = set()
    work: list[LocalBijection] = []

    def push(f):
        if f not in els:
            els.add(f)
            work.append(f)

    push(LocalBijection.identity(n))
    for g in gens:
        push(g)
    while work:
        f = work.pop()
        push(f.inverse())
        for x in f.domain:
            push(f.restrict(f.domain - {x}))
        for g in list(els):
            if g.image == f.domain:
                push(f.after(g))
            if f.image == g.domain:
                push(g.after(f))
    return PermutationGroupoid(n, els)


def is_closed(G: PermutationGroupoid) -> bool:
    """Exhaustively check the groupoid axioms for an extensional element set."""
    els = G.elements
    if LocalBijection.identity(G.n) not in els:
        return False
    for f in els:
        if f.inverse() not in els:
            return False
        for x in f.domain:
            if f.restrict(f.domain - {x}) not in els:
                return False
    for f in els:
        for g in els:
            if g.image == f.domain and f.after(g) not in els:
                return False
    return True


def underlying_group(G: PermutationGroupoid) -> frozenset[LocalBijection]:
    """The elements of full rank; these are exactly the invertible ones."""
    return frozenset(f for f in G.elements if f.rank == G.n)


def comes_from_group(G: PermutationGroupoid) -> bool:
    """True iff G is the restriction closure of its underlying permutation group."""
    return close(underlying_group(G), G.n) == G


def down_closure(perms, n: int) -> PermutationGroupoid:
    """Restriction closure of a set of permutations (given as dicts or maps)."""
    gens = []
    for p in perms:
        if isinstance(p, LocalBijection):
            gens.append(p)
        else:
            gens.append(LocalBijection.from_dict(n, dict(p)))
    for g in gens:
        if g.rank != n:
            raise ValueError("down_closure expects full permutations")
    return close(gens, n)


def restrict(G: PermutationGroupoid, subset) -> PermutationGroupoid:
    """Subgroupoid of all elements with domain and image inside ``subset``.

    The retained points are relabeled order-preservingly onto
    ``range(len(subset))`` so the result is again a groupoid on a plain
    ground set.
    """
    sub = sorted(set(subset))
    if any(not 0 <= p < G.n for p in sub):
        raise ValueError("subset not within ground set")
    index = {p: i for i, p in enumerate(sub)}
    keep = set(sub)
    els = []
    for f in G.elements:
        if f.domain <= keep and f.image <= keep:
            els.append(
                LocalBijection(len(sub), tuple(sorted((index[a], index[b]) for a, b in f.pairs)))
            )
    return PermutationGroupoid(len(sub), els)


def transitive_components(G: PermutationGroupoid) -> list[tuple[int, ...]]:
    """Partition of the points into orbits of the groupoid action on single points."""
    parent = list(range(G.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in G.elements:
        for a, b in f.pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    comps: dict[int, list[int]] = {}
    for p in range(G.n):
        comps.setdefault(find(p), []).append(p)
    return sorted(tuple(sorted(c)) for c in comps.values())


def _group_generated_by(perms: set[LocalBijection], n: int) -> set[LocalBijection]:
    els = {LocalBijection.identity(n)}
    work = list(perms)
    els.update(perms)
    while work:
        f = work.pop()
        for g in list(els):
            for h in (f.after(g), g.after(f)):
                if h not in els:
                    els.add(h)
                    work.append(h)
    return els


def reflection_criterion(G: PermutationGroupoid) -> bool:
    """True iff G comes from a permutation group generated by its transpositions."""
    if not comes_from_group(G):
        return False
    group = underlying_group(G)
    identity = LocalBijection.identity(G.n)
    transpositions = set()
    for f in group:
        moved = [a for a, b in f.pairs if a != b]
        if len(moved) == 2:
            transpositions.add(f)
    generated = _group_generated_by(transpositions, G.n) if transpositions else {identity}
    return frozenset(generated) == group


# ---------------------------------------------------------------------------
# Realization as the local isomorphisms of a relational structure.
#
# Construction: one k-ary relation per orbit of injective k-tuples, for
# every 1 <= k <= n.  Any local isomorphism h of that structure maps the
# enumeration tuple of its domain to an equivalent tuple, i.e. h is the
# restriction of a groupoid element; conversely groupoid elements preserve
# each orbit relation.  Hence the local isomorphisms recover G exactly.
# ---------------------------------------------------------------------------

TO_STRUCTURE_GUARD = 7


def injective_tuple_orbits(G: PermutationGroupoid, k: int) -> list[frozenset[tuple[int, ...]]]:
    """Orbits of injective k-tuples under the partial action of G."""
    todo = set(itertools.permutations(range(G.n), k))
    orbits = []
    while todo:
        seed = min(todo)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            t = frontier.pop()
            for f in G.applicable_to(t):
                image = tuple(f(x) for x in t)
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
        todo -= orbit
        orbits.append(frozenset(orbit))
    return sorted(orbits, key=min)


def to_relational_structure(G: PermutationGroupoid, guard: int = TO_STRUCTURE_GUARD):
    """Relational structure on the ground set whose local isomorphisms equal G."""
    from .relational import RelationalStructure

    if G.n > guard:
        raise ValueError(f"ground set of size {G.n} exceeds guard {guard}")
    relations = []
    for k in range(1, G.n + 1):
        for i, orbit in enumerate(injective_tuple_orbits(G, k)):
            relations.append((f"r{k}_{i}", k, frozenset(orbit)))
    return RelationalStructure(G.n, relations)


def local_isomorphisms(structure) -> PermutationGroupoid:
    """All local bijections of the ground set preserving every relation (brute force)."""
    els = []
    for f in all_local_bijections(structure.n):
        if _is_local_iso(structure, f):
            els.append(f)
    return PermutationGroupoid(structure.n, els)


def _is_local_iso(structure, f: LocalBijection) -> bool:
    dom = sorted(f.domain)
    fd = f.as_dict()
    for _, arity, tuples in structure.relations:
        for t in itertools.product(dom, repeat=arity):
            if (t in tuples) != (tuple(fd[x] for x in t) in tuples):
                return False
    return True
