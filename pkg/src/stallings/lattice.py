"""Intersections, joins, and double cosets via product graphs.

The pullback of two cores over the same rose is the label-matched
product: vertices are all pairs, and a letter moves a pair exactly when
it moves both factors.  Its pointed component computes the intersection
of the subgroups; the remaining non-tree components compute the
intersections with conjugates, one per double coset.  The join is the
pushout: wedge the cores at their bases and fold.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import words as W
from .core import LabeledCore, _canonical_with_map, _Folder, _prune
from .errors import DomainError, RankMismatchError


@dataclass(frozen=True)
class PullbackComponent:
    vertices: tuple[tuple[int, int], ...]
    witness: tuple[int, int]
    is_pointed: bool
    is_tree: bool
    rank: int
    core: LabeledCore | None  # pruned core, present unless a stray tree


@dataclass(frozen=True)
class PullbackResult:
    c1: LabeledCore
    c2: LabeledCore
    components: tuple[PullbackComponent, ...]
    pointed_index: int

    @property
    def n_vertices(self) -> int:
        return sum(len(c.vertices) for c in self.components)


def pullback(c1: LabeledCore, c2: LabeledCore) -> PullbackResult:
    """Product of two cores over the rose, split into components.

    Every pair of factor vertices is a vertex, so the vertex count is
    exactly |V1|*|V2|; components are enumerated from lexicographically
    smallest pairs.  Non-tree components carry their pruned core, the
    pointed component keeps its base even if it hangs.
    """
    if c1.rank != c2.rank:
        raise RankMismatchError("cores live over roses of different ranks")
    rank = c1.rank
    n1, n2 = c1.n_vertices, c2.n_vertices
    base_pair = (c1.base, c2.base)

    def step(pair: tuple[int, int], d: int) -> tuple[int, int] | None:
        a = c1.table[pair[0]][d]
        b = c2.table[pair[1]][d]
        if a < 0 or b < 0:
            return None
        return (a, b)

    seen: set[tuple[int, int]] = set()
    comps: list[PullbackComponent] = []
    pointed_index = -1
    for v1 in range(n1):
        for v2 in range(n2):
            root = (v1, v2)
            if root in seen:
                continue
            cells = {root}
            queue = [root]
            arcs = 0
            while queue:
                p = queue.pop()
                for d in range(2 * rank):
                    q = step(p, d)
                    if q is None:
                        continue
                    if d % 2 == 0:
                        arcs += 1
                    if q not in cells:
                        cells.add(q)
                        queue.append(q)
            seen |= cells
            vertices = tuple(sorted(cells))
            rk = arcs - len(vertices) + 1
            pointed = base_pair in cells

            tables: dict[tuple[int, int], dict[int, int]] = {}
            for p in vertices:
                row = {}
                for d in range(2 * rank):
                    q = step(p, d)
                    if q is not None:
                        row[d] = q
                tables[p] = row
            protect = base_pair if pointed else None
            _prune(tables, protect)
            core = None
            witness = vertices[0]
            if tables:
                base = base_pair if pointed else min(tables)
                witness = base
                ids = {p: i for i, p in enumerate(sorted(tables))}
                rows = {
                    ids[p]: {d: ids[q] for d, q in row.items()}
                    for p, row in tables.items()
                }
                core = _canonical_with_map(rank, rows, ids[base])[0]
            if pointed and core is None:
                raise DomainError("pointed component lost its base")
            comp = PullbackComponent(vertices, witness, pointed, rk == 0, rk, core)
            if pointed:
                pointed_index = len(comps)
            comps.append(comp)
    return PullbackResult(c1, c2, tuple(comps), pointed_index)


def intersect(c1: LabeledCore, c2: LabeledCore) -> LabeledCore:
    """Core of the intersection: the pointed pullback component, pruned
    keeping the base pair."""
    res = pullback(c1, c2)
    comp = res.components[res.pointed_index]
    assert comp.core is not None
    return comp.core


def join(c1: LabeledCore, c2: LabeledCore) -> LabeledCore:
    """Core of the subgroup generated by both: wedge at the bases, fold,
    prune."""
    if c1.rank != c2.rank:
        raise RankMismatchError("cores live over roses of different ranks")
    folder = _Folder(c1.rank)
    for c in (c1, c2):
        ids = {c.base: 0}
        for v in range(c.n_vertices):
            if v != c.base:
                ids[v] = folder.new_vertex()
        for v, i, w in c.arcs():
            folder.add_edge(ids[v], i, ids[w])
    folder.drain()
    tables = folder.resolved()
    base = folder.find(0)
    _prune(tables, base)
    return _canonical_with_map(c1.rank, tables, base)[0]


@dataclass(frozen=True)
class DoubleCosetTag:
    component: int
    word: W.Word


def double_coset_tags(res: PullbackResult) -> tuple[DoubleCosetTag, ...]:
    """One reduced representative per non-tree component.

    For witness (w1, w2) the tag is (word of u2 -> w2 in c2) times the
    inverse of (word of u1 -> w1 in c1): the component then computes the
    intersection of the first subgroup with the tag-conjugate of the
    second.  The pointed component gets the empty word.  Distinct
    components represent distinct double cosets, so the words must come
    out pairwise distinct, which is re-checked.
    """
    tags = []
    for idx, comp in enumerate(res.components):
        if comp.is_tree:
            continue
        w1, w2 = comp.witness
        g = W.concat(res.c2.path_word_to(w2), W.inverse(res.c1.path_word_to(w1)))
        tags.append(DoubleCosetTag(idx, g))
    seen = [t.word for t in tags]
    if len(set(seen)) != len(seen):
        raise DomainError("double coset representatives collided")
    return tuple(tags)


def component_report(res: PullbackResult) -> str:
    """One line per component: id, rank, tree flag, coset tag or -."""
    tags = {t.component: t.word for t in double_coset_tags(res)}
    lines = []
    for idx, comp in enumerate(res.components):
        g = W.fmt(tags[idx]) if idx in tags else "-"
        tree = "true" if comp.is_tree else "false"
        lines.append(f"component {idx} rank={comp.rank} tree={tree} g={g}")
    return "\n".join(lines) + "\n"
