"""Graph morphisms and coverings.

A morphism sends cells to cells and commutes with the involution and the
start map.  A covering is a dimension-preserving morphism of connected
graphs that restricts to a bijection on the outgoing edges of every
vertex; paths, spurs and homotopies then lift uniquely once a base
vertex is chosen in the fiber.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, ParseError
from .graph import (
    Graph,
    Path,
    check_path,
    components,
    connected_rank,
    parse_graph,
    quotient,
    require_valid,
    subgraph_is_tree,
    validate_graph,
    write_graph,
)


@dataclass(frozen=True)
class GraphMorphism:
    source: Graph
    target: Graph
    cell_map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.cell_map[x]

    @property
    def dimension_preserving(self) -> bool:
        return all(
            not self.target.is_vertex(self.cell_map[e]) for e in self.source.edge_cells
        )


@dataclass(frozen=True)
class MorphismViolation:
    reason: str
    cell: int

    def __str__(self) -> str:
        return f"cell {self.cell}: {self.reason}"


def validate_morphism(m: GraphMorphism) -> MorphismViolation | None:
    for g in (m.source, m.target):
        bad = validate_graph(g)
        if bad is not None:
            return MorphismViolation(f"invalid graph: {bad}", bad.cell)
    if len(m.cell_map) != m.source.n_cells:
        return MorphismViolation("cell map length differs from source size", -1)
    n = m.target.n_cells
    for x, y in enumerate(m.cell_map):
        if not (0 <= y < n):
            return MorphismViolation("image cell out of range", x)
    for x in range(m.source.n_cells):
        if m.cell_map[m.source.inv[x]] != m.target.inv[m.cell_map[x]]:
            return MorphismViolation("map does not commute with the involution", x)
        if m.cell_map[m.source.start[x]] != m.target.start[m.cell_map[x]]:
            return MorphismViolation("map does not commute with the start map", x)
    return None


def require_morphism(m: GraphMorphism) -> GraphMorphism:
    bad = validate_morphism(m)
    if bad is not None:
        raise DomainError(f"invalid morphism: {bad}")
    return m


@dataclass(frozen=True)
class Covering:
    morphism: GraphMorphism
    base_source: int
    base_target: int

    @property
    def source(self) -> Graph:
        return self.morphism.source

    @property
    def target(self) -> Graph:
        return self.morphism.target


@dataclass(frozen=True)
class CoveringViolation:
    reason: str
    vertex: int

    def __str__(self) -> str:
        return f"vertex {self.vertex}: {self.reason}"


def check_covering(m: GraphMorphism, u: int, v: int) -> Covering | CoveringViolation:
    """Certify m as a covering with base vertices u over v, or say why not."""
    bad = validate_morphism(m)
    if bad is not None:
        return CoveringViolation(str(bad), -1)
    if not m.source.is_vertex(u) or not m.target.is_vertex(v):
        return CoveringViolation("base cell is not a vertex", u)
    if m.cell_map[u] != v:
        return CoveringViolation("base vertex does not lie over the target base", u)
    if len(components(m.source)) != 1 or len(components(m.target)) != 1:
        return CoveringViolation("source and target must be connected", -1)
    for e in m.source.edge_cells:
        if m.target.is_vertex(m.cell_map[e]):
            return CoveringViolation("an edge collapses to a vertex", m.source.start[e])
    for w in m.source.vertices:
        images = [m.cell_map[e] for e in m.source.out(w)]
        if len(set(images)) != len(images):
            return CoveringViolation("outgoing edges are not mapped injectively", w)
        if set(images) != set(m.target.out(m.cell_map[w])):
            return CoveringViolation("outgoing edges are not mapped surjectively", w)
    return Covering(m, u, v)


def require_covering(m: GraphMorphism, u: int, v: int) -> Covering:
    got = check_covering(m, u, v)
    if isinstance(got, CoveringViolation):
        raise DomainError(f"not a covering: {got}")
    return got


@dataclass(frozen=True)
class PathLift:
    path: Path
    failed_at: int | None  # index of the first unliftable step, if any

    @property
    def total(self) -> bool:
        return self.failed_at is None


def lift_path(m: GraphMorphism, p: Path, w: int) -> PathLift:
    """Lift a target path to the source starting at w.

    The morphism must be locally injective on outgoing edges (as every
    covering is); for partial sources the longest liftable prefix is
    returned together with the position of the first failure.
    """
    require_morphism(m)
    check_path(m.target, p)
    if not m.source.is_vertex(w):
        raise DomainError(f"{w} is not a vertex")
    if m.cell_map[w] != p.base:
        raise DomainError("lift start does not lie over the path base")
    at = w
    lifted: list[int] = []
    for i, e in enumerate(p.edges):
        hits = [f for f in m.source.out(at) if m.cell_map[f] == e]
        if len(hits) > 1:
            raise DomainError(f"morphism is not locally injective at vertex {at}")
        if not hits:
            return PathLift(Path(w, tuple(lifted)), i)
        lifted.append(hits[0])
        at = m.source.t(hits[0])
    return PathLift(Path(w, tuple(lifted)), None)


def degree(c: Covering) -> int:
    """Fiber size over the target base vertex."""
    return sum(
        1 for x in c.source.vertices if c.morphism.cell_map[x] == c.base_target
    )


# ---------------------------------------------------------------------------
# tree excision


@dataclass(frozen=True)
class ExcisedCovering:
    covering: Covering
    source_map: tuple[int, ...]
    target_map: tuple[int, ...]


def excise_trees(c: Covering, tree: Sequence[int]) -> ExcisedCovering:
    """Collapse a spanning tree downstairs and its preimage forest upstairs.

    Each preimage component must map homeomorphically onto the tree; the
    induced map between the quotients is again a covering of the same
    degree, and both ranks are preserved.
    """
    t_cells = set(tree)
    if not subgraph_is_tree(c.target, t_cells):
        raise DomainError("given cells are not a tree in the target")
    if not all(v in t_cells for v in c.target.vertices):
        raise DomainError("tree is not spanning")
    m = c.morphism
    pre = {x for x in range(m.source.n_cells) if m.cell_map[x] in t_cells}

    # split the preimage into components
    comps: list[set[int]] = []
    seen: set[int] = set()
    for x in sorted(pre):
        if x in seen or not m.source.is_vertex(x):
            continue
        comp = {x}
        queue = [x]
        while queue:
            v = queue.pop()
            for e in m.source.out(v):
                if e in pre and e not in comp:
                    comp.add(e)
                    comp.add(m.source.inv[e])
                    w = m.source.t(e)
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
        seen |= comp
        comps.append(comp)

    for comp in comps:
        if len(comp) != len(t_cells):
            raise DomainError("a preimage tree does not map bijectively onto the tree")
        if {m.cell_map[x] for x in comp} != t_cells:
            raise DomainError("a preimage tree does not map onto the whole tree")

    up = quotient(m.source, comps)
    down = quotient(m.target, [t_cells])
    new_map = [0] * up.graph.n_cells
    for x in range(m.source.n_cells):
        new_map[up.cell_map[x]] = down.cell_map[m.cell_map[x]]
    induced = GraphMorphism(up.graph, down.graph, tuple(new_map))
    cov = require_covering(
        induced, up.cell_map[c.base_source], down.cell_map[c.base_target]
    )
    if degree(cov) != degree(c):
        raise DomainError("excision changed the degree")
    if connected_rank(up.graph) != connected_rank(m.source) or connected_rank(
        down.graph
    ) != connected_rank(m.target):
        raise DomainError("excision changed a rank")
    return ExcisedCovering(cov, up.cell_map, down.cell_map)


# ---------------------------------------------------------------------------
# universal cover balls


@dataclass(frozen=True)
class UniversalBall:
    graph: Graph
    center: int
    boundary: tuple[int, ...]
    to_base: GraphMorphism
    paths: tuple[tuple[int, ...], ...]  # reduced edge sequence keying each vertex


def universal_ball(g: Graph, v: int, radius: int) -> UniversalBall:
    """The radius-R ball of the universal cover, rooted at a lift of v.

    Vertices are the reduced paths from v of length at most R; the result
    is a tree whose natural map to the base is a covering away from the
    boundary vertices (those at distance exactly R).
    """
    require_valid(g)
    if not g.is_vertex(v):
        raise DomainError(f"{v} is not a vertex")
    if radius < 0:
        raise DomainError("negative radius")
    if len(components(g)) != 1:
        raise DomainError("graph is not connected")

    keys: list[tuple[int, ...]] = [()]
    index: dict[tuple[int, ...], int] = {(): 0}
    arcs: list[tuple[int, int]] = []
    arc_edges: list[int] = []  # base edge covered by each arc, in arc order
    frontier = [()]
    for _ in range(radius):
        nxt: list[tuple[int, ...]] = []
        for p in frontier:
            end = g.t(p[-1]) if p else v
            for e in g.out(end):
                if p and e == g.inv[p[-1]]:
                    continue
                q = p + (e,)
                index[q] = len(keys)
                keys.append(q)
                arcs.append((index[p], index[q]))
                arc_edges.append(e)
                nxt.append(q)
        frontier = nxt

    ball = Graph.from_arcs(len(keys), arcs)
    cell_map = [0] * ball.n_cells
    for i, p in enumerate(keys):
        cell_map[i] = g.t(p[-1]) if p else v
    for k, e in enumerate(arc_edges):
        cell_map[len(keys) + 2 * k] = e
        cell_map[len(keys) + 2 * k + 1] = g.inv[e]
    to_base = GraphMorphism(ball, g, tuple(cell_map))
    require_morphism(to_base)
    boundary = tuple(i for i, p in enumerate(keys) if len(p) == radius)
    return UniversalBall(ball, 0, boundary, to_base, tuple(keys))


# ---------------------------------------------------------------------------
# factoring of coverings


def factor_through(c: Covering, r: Covering) -> Covering | None:
    """The covering q with c = r . q, if the lifting criterion holds.

    Both coverings must share target graph and base.  The map is pinned
    by sending base to base and propagating along edges; any conflict
    certifies that the image subgroup of c does not lie in that of r.
    """
    if c.target != r.target or c.base_target != r.base_target:
        raise DomainError("coverings do not share a pointed target")
    src = c.source
    mid = r.source
    f: dict[int, int] = {c.base_source: r.base_source}
    cells = [0] * src.n_cells
    cells[c.base_source] = r.base_source
    queue = [c.base_source]
    while queue:
        x = queue.pop(0)
        for e in src.out(x):
            te = c.morphism.cell_map[e]
            hits = [h for h in mid.out(f[x]) if r.morphism.cell_map[h] == te]
            # r is a covering so exactly one lift exists
            h = hits[0]
            w, fw = src.t(e), mid.t(h)
            if w in f:
                if f[w] != fw:
                    return None
            else:
                f[w] = fw
                cells[w] = fw
                queue.append(w)
            cells[e] = h
            cells[src.inv[e]] = mid.inv[h]
    q = GraphMorphism(src, mid, tuple(cells))
    return require_covering(q, c.base_source, r.base_source)


# ---------------------------------------------------------------------------
# text format


def write_morphism(m: GraphMorphism) -> str:
    """Source and target graph blocks followed by one map line per cell."""
    require_morphism(m)
    parts = [write_graph(m.source), write_graph(m.target)]
    lines = [f"map {x} {y}" for x, y in enumerate(m.cell_map)]
    return "".join(parts) + "\n".join(lines) + "\n"


def parse_morphism(text: str) -> GraphMorphism:
    lines = text.splitlines()
    heads = [i for i, ln in enumerate(lines) if ln.startswith("graph ")]
    if len(heads) != 2:
        raise ParseError("expected exactly two graph blocks")
    maps = [i for i, ln in enumerate(lines) if ln.startswith("map ")]
    if not maps:
        raise ParseError("expected map lines after the graph blocks")
    source = parse_graph("\n".join(lines[heads[0] : heads[1]]) + "\n")
    target = parse_graph("\n".join(lines[heads[1] : maps[0]]) + "\n")
    cell_map = [-1] * source.n_cells
    for i in maps:
        toks = lines[i].split()
        if len(toks) != 3:
            raise ParseError(f"bad map line: {lines[i]!r}")
        try:
            x, y = int(toks[1]), int(toks[2])
        except ValueError as exc:
            raise ParseError(f"bad map line: {lines[i]!r}") from exc
        if not 0 <= x < source.n_cells:
            raise ParseError(f"map source cell {x} out of range")
        cell_map[x] = y
    if any(y < 0 for y in cell_map):
        raise ParseError("map lines do not cover every source cell")
    m = GraphMorphism(source, target, tuple(cell_map))
    bad = validate_morphism(m)
    if bad is not None:
        raise ParseError(f"text does not describe a morphism: {bad}")
    return m
