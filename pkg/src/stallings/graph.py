"""Finite combinatorial 1-complexes.

A graph is a finite set of cells ``0..n-1`` together with an involution
``inv`` and a start map ``start``.  Vertices are the fixed points of
``inv``; every other cell is an edge, paired with its reverse.  An arc
is an edge/reverse pair; its canonical representative is the
lower-indexed cell of the pair, which fixes an orientation.

Graphs built with :meth:`Graph.from_arcs` store vertices first and then
one consecutive half-edge pair per arc, but every operation here only
assumes the axioms, not that layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DomainError, ParseError


@dataclass(frozen=True)
class Graph:
    inv: tuple[int, ...]
    start: tuple[int, ...]

    @classmethod
    def from_arcs(cls, n_vertices: int, arcs: Sequence[tuple[int, int]]) -> "Graph":
        """Build a graph on vertices 0..n_vertices-1 with one arc per (s, t)."""
        if n_vertices < 0:
            raise DomainError("negative vertex count")
        inv = list(range(n_vertices))
        start = list(range(n_vertices))
        for s, t in arcs:
            if not (0 <= s < n_vertices and 0 <= t < n_vertices):
                raise DomainError(f"arc ({s}, {t}) mentions a missing vertex")
            e = len(inv)
            inv.extend((e + 1, e))
            start.extend((s, t))
        return cls(tuple(inv), tuple(start))

    @property
    def n_cells(self) -> int:
        return len(self.inv)

    def is_vertex(self, x: int) -> bool:
        return self.inv[x] == x

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n_cells) if self.inv[x] == x)

    @cached_property
    def edge_cells(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n_cells) if self.inv[x] != x)

    @cached_property
    def arc_reps(self) -> tuple[int, ...]:
        """Canonical orientation: the lower-indexed edge of each pair."""
        return tuple(e for e in self.edge_cells if e < self.inv[e])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arcs(self) -> int:
        return len(self.arc_reps)

    def t(self, e: int) -> int:
        """Terminal vertex of an edge: start of its reverse."""
        return self.start[self.inv[e]]

    @cached_property
    def _out(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edge_cells:
            table[self.start[e]].append(e)
        return {v: tuple(es) for v, es in table.items()}

    def out(self, v: int) -> tuple[int, ...]:
        """Edges leaving v, in cell order."""
        return self._out[v]

    def valency(self, v: int) -> int:
        return len(self._out[v])


@dataclass(frozen=True)
class GraphViolation:
    axiom: str
    cell: int

    def __str__(self) -> str:
        return f"cell {self.cell}: {self.axiom}"


def validate_graph(g: Graph) -> GraphViolation | None:
    """Check the axioms; return the first violation or None.

    The empty graph is rejected: a 1-complex has at least one cell.
    """
    n = len(g.inv)
    if len(g.start) != n:
        return GraphViolation("inv and start tables differ in length", -1)
    if n == 0:
        return GraphViolation("graph has no cells", -1)
    for x in range(n):
        if not (0 <= g.inv[x] < n) or not (0 <= g.start[x] < n):
            return GraphViolation("cell index out of range", x)
    for x in range(n):
        if g.inv[g.inv[x]] != x:
            return GraphViolation("inverse map is not an involution", x)
        if g.inv[x] == x:
            # fixed cells are vertices and must be fixed by start too
            if g.start[x] != x:
                return GraphViolation("involution fixes an edge", x)
        else:
            v = g.start[x]
            if g.inv[v] != v or g.start[v] != v:
                return GraphViolation("start of an edge is not a vertex", x)
    return None


def require_valid(g: Graph) -> Graph:
    bad = validate_graph(g)
    if bad is not None:
        raise DomainError(f"invalid graph: {bad}")
    return g


def components(g: Graph) -> tuple[tuple[int, ...], ...]:
    """Partition the cells into connected subgraphs, ordered by least cell."""
    require_valid(g)
    seen: set[int] = set()
    parts: list[tuple[int, ...]] = []
    for root in g.vertices:
        if root in seen:
            continue
        cells = {root}
        queue = [root]
        while queue:
            v = queue.pop()
            for e in g.out(v):
                if e in cells:
                    continue
                cells.add(e)
                cells.add(g.inv[e])
                w = g.t(e)
                if w not in cells:
                    cells.add(w)
                    queue.append(w)
        seen |= cells
        parts.append(tuple(sorted(cells)))
    parts.sort(key=lambda p: p[0])
    return tuple(parts)


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class Path:
    """A vertex together with a (possibly empty) chain of composable edges."""

    base: int
    edges: tuple[int, ...] = ()


def check_path(g: Graph, p: Path) -> None:
    if not g.is_vertex(p.base):
        raise DomainError(f"path base {p.base} is not a vertex")
    at = p.base
    for e in p.edges:
        if g.is_vertex(e):
            raise DomainError(f"path step {e} is a vertex, not an edge")
        if g.start[e] != at:
            raise DomainError(f"edge {e} does not start where the path is")
        at = g.t(e)


def path_end(g: Graph, p: Path) -> int:
    return g.t(p.edges[-1]) if p.edges else p.base


def is_reduced(g: Graph, p: Path) -> bool:
    return all(g.inv[a] != b for a, b in zip(p.edges, p.edges[1:]))


def reduce_path(g: Graph, p: Path) -> Path:
    """Freely reduce by deleting spurs; endpoints are preserved."""
    check_path(g, p)
    stack: list[int] = []
    for e in p.edges:
        if stack and stack[-1] == g.inv[e]:
            stack.pop()
        else:
            stack.append(e)
    return Path(p.base, tuple(stack))


# ---------------------------------------------------------------------------
# subgraphs, forests, rank


def is_subgraph(g: Graph, cells: Iterable[int]) -> bool:
    cs = set(cells)
    return all(0 <= x < g.n_cells and g.inv[x] in cs and g.start[x] in cs for x in cs)


def _subgraph_counts(g: Graph, cells: set[int]) -> tuple[int, int]:
    nv = sum(1 for x in cells if g.is_vertex(x))
    ne = len(cells) - nv
    return nv, ne // 2


def subgraph_is_tree(g: Graph, cells: Iterable[int]) -> bool:
    """Nonempty, connected, and with one arc less than its vertex count."""
    cs = set(cells)
    if not cs or not is_subgraph(g, cs):
        return False
    nv, na = _subgraph_counts(g, cs)
    root = min(x for x in cs if g.is_vertex(x))
    seen = {root}
    queue = [root]
    while queue:
        v = queue.pop()
        for e in g.out(v):
            if e in cs:
                w = g.t(e)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return len(seen) == nv and na == nv - 1


@dataclass(frozen=True)
class SpanningForest:
    cells: frozenset[int]
    omitted: tuple[int, ...]  # canonical representative of each omitted arc


def spanning_forest(g: Graph, trees: Sequence[Iterable[int]] = ()) -> SpanningForest:
    """A spanning forest extending the given family of disjoint trees.

    One tree per component, containing every vertex and every given tree;
    omitted arcs are listed by canonical representative in ascending order.
    """
    require_valid(g)
    given: list[set[int]] = [set(t) for t in trees]
    used: set[int] = set()
    for t in given:
        if not subgraph_is_tree(g, t):
            raise DomainError("given subgraph is not a tree")
        if t & used:
            raise DomainError("given trees are not disjoint")
        used |= t

    parent = {v: v for v in g.vertices}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forest_arcs: set[int] = set()
    for t in given:
        for e in t:
            if not g.is_vertex(e) and e < g.inv[e]:
                forest_arcs.add(e)
                a, b = find(g.start[e]), find(g.t(e))
                if a != b:
                    parent[max(a, b)] = min(a, b)
    for e in g.arc_reps:
        a, b = find(g.start[e]), find(g.t(e))
        if a != b:
            parent[max(a, b)] = min(a, b)
            forest_arcs.add(e)
    cells = set(g.vertices)
    for e in forest_arcs:
        cells.add(e)
        cells.add(g.inv[e])
    omitted = tuple(e for e in g.arc_reps if e not in forest_arcs)
    return SpanningForest(frozenset(cells), omitted)


@dataclass(frozen=True)
class Homology:
    component_ranks: tuple[int, ...]
    h0: int
    h1: int


def rank_and_homology(g: Graph) -> Homology:
    """Per-component first Betti number via omitted arcs of a spanning forest."""
    ranks = []
    for part in components(g):
        cs = set(part)
        nv, na = _subgraph_counts(g, cs)
        ranks.append(na - nv + 1)
    return Homology(tuple(ranks), len(ranks), sum(ranks))


def connected_rank(g: Graph) -> int:
    h = rank_and_homology(g)
    if h.h0 != 1:
        raise DomainError("graph is not connected")
    return h.h1


# ---------------------------------------------------------------------------
# quotients


@dataclass(frozen=True)
class Quotient:
    graph: Graph
    cell_map: tuple[int, ...]


def quotient(g: Graph, parts: Sequence[Iterable[int]]) -> Quotient:
    """Collapse each subgraph in a disjoint family to a point.

    Edges vanish exactly when they lie in one of the subgraphs; an edge
    whose endpoints both fall into the same collapsed part but which is
    not itself in the part survives as a loop.
    """
    require_valid(g)
    family = [set(p) for p in parts]
    used: set[int] = set()
    for p in family:
        if not p or not is_subgraph(g, p):
            raise DomainError("quotient part is not a nonempty subgraph")
        if p & used:
            raise DomainError("overlapping subgraphs")
        used |= p

    # vertex classes ordered by least member cell
    part_of: dict[int, int] = {}
    for i, p in enumerate(family):
        for x in p:
            part_of[x] = i
    classes: list[tuple[int, int | None]] = []  # (least cell, part index or None)
    for i, p in enumerate(family):
        classes.append((min(p), i))
    for v in g.vertices:
        if v not in part_of:
            classes.append((v, None))
    classes.sort()
    class_id: dict[int, int] = {}
    vertex_class: dict[int, int] = {}
    for new, (least, tag) in enumerate(classes):
        if tag is None:
            vertex_class[least] = new
        else:
            class_id[tag] = new

    def vmap(v: int) -> int:
        if v in part_of:
            return class_id[part_of[v]]
        return vertex_class[v]

    surviving = [e for e in g.arc_reps if e not in part_of]
    arcs = [(vmap(g.start[e]), vmap(g.t(e))) for e in surviving]
    out = Graph.from_arcs(len(classes), arcs)

    cell_map = [0] * g.n_cells
    for v in g.vertices:
        cell_map[v] = vmap(v)
    for k, e in enumerate(surviving):
        cell_map[e] = len(classes) + 2 * k
        cell_map[g.inv[e]] = len(classes) + 2 * k + 1
    for x in part_of:
        if not g.is_vertex(x):
            cell_map[x] = class_id[part_of[x]]
    return Quotient(out, tuple(cell_map))


# ---------------------------------------------------------------------------
# spine


def spine(g: Graph, v: int) -> frozenset[int]:
    """The union of all closed reduced paths at v, as a subgraph.

    Computed by repeatedly deleting valency-1 vertices other than v.  If
    the graph is a tree this leaves the single vertex v; if v hangs off
    the cyclic part, the connecting segment survives because every closed
    reduced path at v must traverse it.
    """
    require_valid(g)
    if not g.is_vertex(v):
        raise DomainError(f"{v} is not a vertex")
    if len(components(g)) != 1:
        raise DomainError("graph is not connected")
    cells = set(range(g.n_cells))
    out = {u: set(g.out(u)) for u in g.vertices}
    leaves = [u for u in g.vertices if u != v and len(out[u]) <= 1]
    while leaves:
        u = leaves.pop()
        if u not in cells or len(out[u]) > 1 or u == v:
            continue
        cells.discard(u)
        for e in list(out[u]):
            w = g.t(e)
            cells.discard(e)
            cells.discard(g.inv[e])
            out[u].discard(e)
            if w in cells:
                out[w].discard(g.inv[e])
                if w != v and len(out[w]) <= 1:
                    leaves.append(w)
    return frozenset(cells)


# ---------------------------------------------------------------------------
# sums and wedges


def disjoint_union(g1: Graph, g2: Graph) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """Renumbered disjoint union plus the two inclusion cell maps."""
    require_valid(g1)
    require_valid(g2)
    nv1, nv2 = g1.n_vertices, g2.n_vertices
    v1_of = {v: i for i, v in enumerate(g1.vertices)}
    v2_of = {v: nv1 + i for i, v in enumerate(g2.vertices)}
    arcs: list[tuple[int, int]] = []
    map1 = [0] * g1.n_cells
    map2 = [0] * g2.n_cells
    for v, i in v1_of.items():
        map1[v] = i
    for v, i in v2_of.items():
        map2[v] = i
    nv = nv1 + nv2
    for e in g1.arc_reps:
        map1[e] = nv + 2 * len(arcs)
        map1[g1.inv[e]] = nv + 2 * len(arcs) + 1
        arcs.append((v1_of[g1.start[e]], v1_of[g1.t(e)]))
    for e in g2.arc_reps:
        map2[e] = nv + 2 * len(arcs)
        map2[g2.inv[e]] = nv + 2 * len(arcs) + 1
        arcs.append((v2_of[g2.start[e]], v2_of[g2.t(e)]))
    return Graph.from_arcs(nv, arcs), tuple(map1), tuple(map2)


def wedge(
    g1: Graph, g2: Graph, pairs: Sequence[tuple[int, int]]
) -> tuple[Graph, tuple[int, ...], tuple[int, ...]]:
    """Glue g2 to g1 along a finite list of vertex pairs (v1, v2).

    Each side of the identification list must be injective so the glued
    vertex pairs form a disjoint family.
    """
    if not pairs:
        raise DomainError("wedge needs at least one vertex pair")
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise DomainError("wedge identification is not injective")
    u, map1, map2 = disjoint_union(g1, g2)
    family = [{map1[a], map2[b]} for a, b in pairs]
    q = quotient(u, family)
    comp1 = tuple(q.cell_map[map1[x]] for x in range(g1.n_cells))
    comp2 = tuple(q.cell_map[map2[x]] for x in range(g2.n_cells))
    return q.graph, comp1, comp2


def rose(rank: int) -> Graph:
    """The single-vertexed graph with one arc per generator."""
    if rank < 0:
        raise DomainError("negative rank")
    return Graph.from_arcs(1, [(0, 0)] * rank)


# ---------------------------------------------------------------------------
# text formats


def write_graph(g: Graph) -> str:
    """Canonical text form: a header line then one line per arc.

    Vertices are renumbered 0..n-1 in cell order, arcs keep canonical
    order, so writing after parsing reproduces the input byte for byte.
    """
    require_valid(g)
    vid = {v: i for i, v in enumerate(g.vertices)}
    lines = [f"graph {g.n_vertices} {g.n_arcs}"]
    for k, e in enumerate(g.arc_reps):
        lines.append(f"arc {k} {vid[g.start[e]]} {vid[g.t(e)]}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise ParseError("empty graph text")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "graph":
        raise ParseError(f"bad header line: {lines[0]!r}")
    try:
        nv, na = int(head[1]), int(head[2])
    except ValueError as exc:
        raise ParseError(f"bad header counts: {lines[0]!r}") from exc
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != na:
        raise ParseError(f"expected {na} arc lines, found {len(body)}")
    arcs: list[tuple[int, int]] = []
    for k, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != 4 or toks[0] != "arc":
            raise ParseError(f"bad arc line: {ln!r}")
        try:
            idx, s, t = int(toks[1]), int(toks[2]), int(toks[3])
        except ValueError as exc:
            raise ParseError(f"bad arc line: {ln!r}") from exc
        if idx != k:
            raise ParseError(f"arc ids must ascend from 0, got {idx} at position {k}")
        if not (0 <= s < nv and 0 <= t < nv):
            raise ParseError(f"arc endpoint out of range: {ln!r}")
        arcs.append((s, t))
    return Graph.from_arcs(nv, arcs)


def dot_graph(g: Graph) -> str:
    require_valid(g)
    vid = {v: i for i, v in enumerate(g.vertices)}
    lines = ["graph {"]
    for v in g.vertices:
        lines.append(f"  v{vid[v]};")
    for k, e in enumerate(g.arc_reps):
        lines.append(f'  v{vid[g.start[e]]} -- v{vid[g.t(e)]} [label="{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
