"""Deck transformations and the lattice of intermediate coverings.

A deck transformation of a complete core is a label- and base-fiber-
preserving graph automorphism; it is pinned by the image of the base
vertex, so the deck group is found by trying every vertex as that image.
The covering is Galois exactly when every attempt succeeds, equivalently
when the subgroup is normal, and then subgroups of the deck group
correspond to the intermediate coverings, reversing order and swapping
joins with meets.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .core import LabeledCore, _canonical_with_map, write_core
from .covering import Covering, GraphMorphism, require_covering
from .errors import DomainError

Perm = tuple[int, ...]


def automorphism_to(core: LabeledCore, w: int) -> Perm | None:
    """The label automorphism sending base to w, if there is one."""
    if not core.is_complete:
        raise DomainError("core is not complete")
    n = core.n_vertices
    if not 0 <= w < n:
        raise DomainError(f"no vertex {w}")
    f = [-1] * n
    f[core.base] = w
    queue = [core.base]
    while queue:
        v = queue.pop()
        for d in range(2 * core.rank):
            a, b = core.table[v][d], core.table[f[v]][d]
            if f[a] == -1:
                f[a] = b
                queue.append(a)
            elif f[a] != b:
                return None
    if sorted(f) != list(range(n)):
        return None
    return tuple(f)


@dataclass(frozen=True)
class DeckGroup:
    core: LabeledCore
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return tuple(range(self.core.n_vertices))

    @staticmethod
    def compose(p: Perm, q: Perm) -> Perm:
        """Apply q first, then p."""
        return tuple(p[x] for x in q)

    @staticmethod
    def invert(p: Perm) -> Perm:
        out = [0] * len(p)
        for i, x in enumerate(p):
            out[x] = i
        return tuple(out)

    def closure(self, gens: frozenset[Perm]) -> frozenset[Perm]:
        got = set(gens) | {self.identity}
        frontier = list(got)
        while frontier:
            p = frontier.pop()
            for q in list(got):
                for prod in (self.compose(p, q), self.compose(q, p)):
                    if prod not in got:
                        got.add(prod)
                        frontier.append(prod)
            inv = self.invert(p)
            if inv not in got:
                got.add(inv)
                frontier.append(inv)
        return frozenset(got)

    def is_subgroup(self, perms: frozenset[Perm]) -> bool:
        return (
            self.identity in perms
            and perms <= set(self.elements)
            and self.closure(perms) == perms
        )

    def subgroups(self) -> tuple[frozenset[Perm], ...]:
        """Every subgroup, by closing generator sets one element at a time."""
        bottom = frozenset([self.identity])
        found = {bottom}
        frontier = [bottom]
        while frontier:
            h = frontier.pop()
            for g in self.elements:
                if g in h:
                    continue
                bigger = self.closure(h | {g})
                if bigger not in found:
                    found.add(bigger)
                    frontier.append(bigger)
        return tuple(sorted(found, key=lambda s: (len(s), sorted(s))))


def deck_group(core: LabeledCore) -> DeckGroup:
    """All deck transformations of a finite complete core.

    The action is free: a deck transformation fixing any vertex is the
    identity, which is re-checked here.
    """
    if not core.is_complete:
        raise DomainError("deck group needs a complete core")
    elements = []
    for w in range(core.n_vertices):
        p = automorphism_to(core, w)
        if p is not None:
            elements.append(p)
    identity = tuple(range(core.n_vertices))
    for p in elements:
        if p != identity and any(p[v] == v for v in range(core.n_vertices)):
            raise DomainError("deck action is not free; core was malformed")
    return DeckGroup(core, tuple(sorted(elements)))


def is_galois(core: LabeledCore) -> bool:
    """Whether the subgroup is normal.

    Finite index: every vertex must receive a label automorphism of the
    core from the base.  Infinite index: the trivial subgroup is normal;
    a non-trivial one of infinite index in a rose of rank at least two
    never is, which covers every core that can arise here.
    """
    if core.is_complete:
        return all(
            automorphism_to(core, w) is not None for w in range(core.n_vertices)
        )
    if core.is_trivial:
        return True
    if core.rank >= 2:
        return False
    raise DomainError("normality undecided for this incomplete core")


@dataclass(frozen=True)
class DeckQuotient:
    core: LabeledCore
    vertex_map: tuple[int, ...]
    to_quotient: Covering
    to_rose: Covering


def quotient_by_deck(core: LabeledCore, perms: frozenset[Perm]) -> DeckQuotient:
    """Quotient a complete core by a subgroup of its deck group.

    Vertices are collapsed to orbits; labels descend because deck
    transformations commute with every transition.  Both the orbit map
    and the induced map to the rose are re-verified as coverings.
    """
    if not core.is_complete:
        raise DomainError("quotients need a complete core")
    n = core.n_vertices
    identity = tuple(range(n))
    if identity not in perms:
        raise DomainError("identity missing: not a subgroup")
    for p in perms:
        if sorted(p) != list(range(n)):
            raise DomainError("not a vertex permutation")
        if DeckGroup.invert(p) not in perms:
            raise DomainError("not closed under inverse")
        if p != identity and any(p[v] == v for v in range(n)):
            raise DomainError("action is not free")
        if automorphism_to(core, p[core.base]) != p:
            raise DomainError("not a deck transformation of this core")
        for q in perms:
            if DeckGroup.compose(p, q) not in perms:
                raise DomainError("not closed under composition")

    orbit = list(range(n))

    def find(v: int) -> int:
        while orbit[v] != v:
            orbit[v] = orbit[orbit[v]]
            v = orbit[v]
        return v

    for p in perms:
        for v in range(n):
            a, b = find(v), find(p[v])
            if a != b:
                orbit[max(a, b)] = min(a, b)

    tables: dict[int, dict[int, int]] = {}
    for v in range(n):
        r = find(v)
        row = tables.setdefault(r, {})
        for d in range(2 * core.rank):
            w = find(core.table[v][d])
            if row.setdefault(d, w) != w:
                raise DomainError("labels do not descend; action is not by decks")
    quot, order = _canonical_with_map(core.rank, tables, find(core.base))
    vertex_map = tuple(order[find(v)] for v in range(n))

    # verify the orbit map as a covering of underlying graphs
    g_up, labels_up = core.to_graph()
    g_dn, labels_dn = quot.to_graph()
    arc_at = {(v, i): k for k, (v, i, _) in enumerate(labels_dn)}
    cells = [0] * g_up.n_cells
    for v in range(n):
        cells[v] = vertex_map[v]
    for k, (v, i, w) in enumerate(labels_up):
        kq = arc_at[(vertex_map[v], i)]
        cells[n + 2 * k] = quot.n_vertices + 2 * kq
        cells[n + 2 * k + 1] = quot.n_vertices + 2 * kq + 1
    to_quotient = require_covering(
        GraphMorphism(g_up, g_dn, tuple(cells)), core.base, quot.base
    )
    to_rose = quot.to_covering()
    return DeckQuotient(quot, vertex_map, to_quotient, to_rose)


@dataclass(frozen=True)
class LatticeClass:
    subgroup: tuple[Perm, ...]
    core: LabeledCore
    degree: int
    vertex_map: tuple[int, ...]


@dataclass(frozen=True)
class IntermediateLattice:
    classes: tuple[LatticeClass, ...]
    leq: tuple[tuple[bool, ...], ...]

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def bottom(self) -> int:
        """Index of the rose class."""
        return next(i for i, c in enumerate(self.classes) if c.degree == 1)

    @property
    def top(self) -> int:
        return max(range(self.count), key=lambda i: self.classes[i].degree)


def intermediate_lattice(core: LabeledCore, jobs: int = 1) -> IntermediateLattice:
    """All coverings between a finite Galois core and the rose.

    Classes are the quotients by subgroups of the deck group; the
    correspondence is verified to reverse order, to send subgroup joins
    to pushouts and intersections to pullbacks, and to satisfy
    degree = [G : H].
    """
    from .lattice import intersect, join  # local import, lattice builds on cores

    if not core.is_complete:
        raise DomainError("lattice needs a finite-index core")
    deck = deck_group(core)
    if deck.order != core.n_vertices:
        raise DomainError("core is not Galois")
    if deck.order > 24:
        raise DomainError(
            f"deck group of order {deck.order} exceeds the enumeration cap of 24"
        )
    subs = deck.subgroups()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            quots = list(pool.map(lambda h: quotient_by_deck(core, h), subs))
    else:
        quots = [quotient_by_deck(core, h) for h in subs]

    classes = []
    for h, dq in zip(subs, quots):
        deg = dq.core.index()
        if deg != deck.order // len(h):
            raise DomainError("degree does not match the subgroup index")
        classes.append(
            LatticeClass(tuple(sorted(h)), dq.core, int(deg), dq.vertex_map)
        )
    order = sorted(range(len(classes)), key=lambda i: (classes[i].degree, write_core(classes[i].core)))
    classes = [classes[i] for i in order]
    subs = [subs[i] for i in order]

    from .core import core_factor_map

    leq_rows = []
    for i, ci in enumerate(classes):
        row = []
        for j, cj in enumerate(classes):
            below = core_factor_map(cj.core, ci.core) is not None
            if below != (set(subs[j]) <= set(subs[i])):
                raise DomainError("order reversal failed")
            row.append(below)
        leq_rows.append(tuple(row))

    for i in range(len(classes)):
        for j in range(len(classes)):
            met = deck.closure(subs[i] | subs[j])
            joined = frozenset(subs[i] & subs[j])
            if quotient_by_deck(core, met).core != join(classes[i].core, classes[j].core):
                raise DomainError("subgroup join does not match the pushout")
            if quotient_by_deck(core, joined).core != intersect(
                classes[i].core, classes[j].core
            ):
                raise DomainError("subgroup meet does not match the pullback")

    return IntermediateLattice(tuple(classes), tuple(leq_rows))
