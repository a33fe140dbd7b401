"""Labeled core graphs for finitely generated subgroups of free groups.

A core is a finite, folded, connected graph whose edges carry generator
labels with directions, based at a vertex u, such that every vertex
except possibly u has valency at least two.  It is simultaneously the
spine of the covering of the rose classifying the subgroup and a partial
automaton: a reduced word lies in the subgroup iff it traces a closed
path at u.

Transitions are stored as a table ``table[v][d] -> w`` where the
direction index of letter ``+i`` is ``2*(i-1)`` and of ``-i`` is
``2*(i-1)+1``; ``-1`` marks a missing transition.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Iterable, Mapping, Sequence

from . import words as W
from .covering import Covering, GraphMorphism, require_covering, require_morphism
from .errors import DomainError, ParseError
from .graph import Graph, rose


def dir_of(letter: int) -> int:
    if letter == 0:
        raise DomainError("0 is not a letter")
    i = abs(letter) - 1
    return 2 * i if letter > 0 else 2 * i + 1


def letter_of(d: int) -> int:
    i = d // 2 + 1
    return i if d % 2 == 0 else -i


@dataclass(frozen=True)
class LabeledCore:
    rank: int
    base: int
    table: tuple[tuple[int, ...], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.table)

    @cached_property
    def n_arcs(self) -> int:
        return sum(1 for row in self.table for w in row if w >= 0) // 2

    @cached_property
    def subgroup_rank(self) -> int:
        return self.n_arcs - self.n_vertices + 1

    @property
    def is_trivial(self) -> bool:
        return self.subgroup_rank == 0

    @cached_property
    def is_complete(self) -> bool:
        return all(w >= 0 for row in self.table for w in row)

    def step(self, v: int, letter: int) -> int:
        """Next vertex reading one letter, or -1."""
        if abs(letter) > self.rank:
            raise DomainError(f"letter {letter} exceeds rank {self.rank}")
        return self.table[v][dir_of(letter)]

    def valency(self, v: int) -> int:
        return sum(1 for w in self.table[v] if w >= 0)

    def trace(self, word: W.Word, start: int | None = None) -> tuple[int, int]:
        """Follow a word; return (vertex reached, letters consumed)."""
        at = self.base if start is None else start
        for i, x in enumerate(word):
            nxt = self.step(at, x)
            if nxt < 0:
                return at, i
            at = nxt
        return at, len(word)

    def contains(self, word: W.Word) -> bool:
        """Membership of the freely reduced word in the subgroup."""
        reduced = W.free_reduce(word)
        at, consumed = self.trace(reduced)
        return consumed == len(reduced) and at == self.base

    def index(self) -> int | float:
        """Subgroup index: the vertex count when the core is complete,
        infinity otherwise (a missing direction pins an infinite fiber)."""
        return self.n_vertices if self.is_complete else math.inf

    # -- spanning tree machinery ------------------------------------------

    @cached_property
    def _tree(self) -> tuple[dict[int, W.Word], set[tuple[int, int, int]]]:
        """BFS tree from base in letter order: vertex words and tree arcs
        as positive triples (v, i, w)."""
        word_to: dict[int, W.Word] = {self.base: ()}
        tree_arcs: set[tuple[int, int, int]] = set()
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for d in range(2 * self.rank):
                w = self.table[v][d]
                if w >= 0 and w not in word_to:
                    word_to[w] = word_to[v] + (letter_of(d),)
                    lt = letter_of(d)
                    tree_arcs.add((v, lt, w) if lt > 0 else (w, -lt, v))
                    queue.append(w)
        return word_to, tree_arcs

    def path_word_to(self, v: int) -> W.Word:
        """Label word of the BFS path from the base to v."""
        word_to, _ = self._tree
        if v not in word_to:
            raise DomainError(f"vertex {v} not reachable")
        return word_to[v]

    def schreier_basis(self) -> tuple[W.Word, ...]:
        """One free generator per arc omitted by the base spanning tree:
        tree word in, the arc's letter, tree word back out."""
        word_to, tree_arcs = self._tree
        basis: list[W.Word] = []
        for v in range(self.n_vertices):
            for i in range(1, self.rank + 1):
                w = self.table[v][dir_of(i)]
                if w >= 0 and (v, i, w) not in tree_arcs:
                    basis.append(
                        W.concat(word_to[v], (i,), W.inverse(word_to[w]))
                    )
        return tuple(basis)

    # -- bridges to plain graphs ------------------------------------------

    def arcs(self) -> tuple[tuple[int, int, int], ...]:
        """All arcs as positive triples (v, i, w), sorted."""
        out = []
        for v in range(self.n_vertices):
            for i in range(1, self.rank + 1):
                w = self.table[v][dir_of(i)]
                if w >= 0:
                    out.append((v, i, w))
        return tuple(out)

    def to_graph(self) -> tuple[Graph, tuple[tuple[int, int, int], ...]]:
        labels = self.arcs()
        g = Graph.from_arcs(self.n_vertices, [(v, w) for v, _, w in labels])
        return g, labels

    def rose_map(self) -> GraphMorphism:
        """The label-respecting morphism onto the rank-r rose."""
        g, labels = self.to_graph()
        target = rose(self.rank)
        cell_map = [0] * g.n_cells
        for k, (_, i, _) in enumerate(labels):
            cell_map[self.n_vertices + 2 * k] = 1 + 2 * (i - 1)
            cell_map[self.n_vertices + 2 * k + 1] = 2 + 2 * (i - 1)
        return require_morphism(GraphMorphism(g, target, tuple(cell_map)))

    def to_covering(self) -> Covering:
        if not self.is_complete:
            raise DomainError("core is not complete, so not a total covering")
        return require_covering(self.rose_map(), self.base, 0)

    def shift_base(self, g: W.Word) -> "LabeledCore":
        """Core of the conjugate subgroup obtained by moving the base
        along the path reading g; the path must stay inside the core."""
        reduced = W.free_reduce(g)
        at, consumed = self.trace(reduced)
        if consumed != len(reduced):
            raise DomainError("path leaves the core")
        tables = {v: dict() for v in range(self.n_vertices)}
        for v in range(self.n_vertices):
            for d, w in enumerate(self.table[v]):
                if w >= 0:
                    tables[v][d] = w
        _prune(tables, at)
        return _canonicalize(self.rank, tables, at)


# ---------------------------------------------------------------------------
# folding


class _Folder:
    """Union-find folding: pending edge insertions are drained FIFO and
    conflicting targets are merged, smallest root winning."""

    def __init__(self, rank: int):
        if rank < 1:
            raise DomainError("ambient rank must be at least 1")
        self.rank = rank
        self.parent: list[int] = [0]
        self.table: list[dict[int, int]] = [dict()]
        self.pending: deque[tuple[int, int, int]] = deque()

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.table.append(dict())
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def add_edge(self, u: int, letter: int, w: int) -> None:
        if abs(letter) > self.rank:
            raise DomainError(f"letter {letter} exceeds rank {self.rank}")
        self.pending.append((u, dir_of(letter), w))

    def _merge(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        keep, drop = (a, b) if a < b else (b, a)
        self.parent[drop] = keep
        moved = self.table[drop]
        self.table[drop] = {}
        for d, t in moved.items():
            self.pending.append((keep, d, t))

    def drain(self) -> None:
        while self.pending:
            u, d, w = self.pending.popleft()
            u, w = self.find(u), self.find(w)
            cur = self.table[u].get(d)
            if cur is not None:
                cur = self.find(cur)
                if cur != w:
                    self._merge(cur, w)
                continue
            back = self.table[w].get(d ^ 1)
            if back is not None and self.find(back) != u:
                self._merge(self.find(back), u)
                self.pending.append((u, d, w))
                continue
            self.table[u][d] = w
            self.table[w][d ^ 1] = u

    def resolved(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for v in range(len(self.parent)):
            if self.find(v) != v:
                continue
            out[v] = {d: self.find(t) for d, t in self.table[v].items()}
        return out


def _prune(tables: dict[int, dict[int, int]], base: int | None) -> None:
    """Delete valency<=1 vertices other than the base, repeatedly.

    With base None nothing is protected, which leaves the largest
    subgraph of minimum valency two (empty for a forest).
    """
    leaves = [v for v in tables if v != base and len(tables[v]) <= 1]
    while leaves:
        v = leaves.pop()
        if v not in tables or v == base or len(tables[v]) > 1:
            continue
        row = tables.pop(v)
        for d, w in row.items():
            if w in tables:
                tables[w].pop(d ^ 1, None)
                if w != base and len(tables[w]) <= 1:
                    leaves.append(w)


def _canonical_with_map(
    rank: int, tables: Mapping[int, Mapping[int, int]], base: int
) -> tuple[LabeledCore, dict[int, int]]:
    """Renumber by BFS from the base in label order; return the numbering."""
    order: dict[int, int] = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for d in range(2 * rank):
            w = tables[v].get(d, -1)
            if w >= 0 and w not in order:
                order[w] = len(order)
                queue.append(w)
    if len(order) != len(tables):
        raise DomainError("core is not connected")
    rows: list[list[int]] = [[-1] * (2 * rank) for _ in order]
    for v, row in tables.items():
        for d, w in row.items():
            rows[order[v]][d] = order[w]
    return LabeledCore(rank, 0, tuple(tuple(r) for r in rows)), order


def _canonicalize(
    rank: int, tables: Mapping[int, Mapping[int, int]], base: int
) -> LabeledCore:
    return _canonical_with_map(rank, tables, base)[0]


def core_from_words(rank: int, gens: Iterable[W.Word]) -> LabeledCore:
    """Fold a wedge of subdivided generator loops, then prune to the core."""
    folder = _Folder(rank)
    for g in gens:
        word = W.free_reduce(g)
        if any(abs(x) > rank for x in word):
            raise DomainError(f"generator {W.fmt(word)!r} exceeds rank {rank}")
        if not word:
            continue
        at = 0
        for x in word[:-1]:
            nxt = folder.new_vertex()
            folder.add_edge(at, x, nxt)
            at = nxt
        folder.add_edge(at, word[-1], 0)
    folder.drain()
    tables = folder.resolved()
    base = folder.find(0)
    _prune(tables, base)
    return _canonicalize(rank, tables, base)


def core_from_action(
    rank: int, perms: Sequence[Sequence[int]], base: int = 0
) -> LabeledCore:
    """Schreier core of a vertex stabilizer: generator i acts by perms[i-1].

    The component of the base is kept, so the action need not be
    transitive.  The result is complete.
    """
    if len(perms) != rank:
        raise DomainError("need one permutation per generator")
    n = len(perms[0])
    if n < 1:
        raise DomainError("action needs at least one point")
    for p in perms:
        if sorted(p) != list(range(n)):
            raise DomainError("not a permutation")
    tables: dict[int, dict[int, int]] = {v: {} for v in range(n)}
    for i, p in enumerate(perms):
        for v in range(n):
            tables[v][2 * i] = p[v]
            tables[p[v]][2 * i + 1] = v
    reach = {base}
    queue = [base]
    while queue:
        v = queue.pop()
        for w in tables[v].values():
            if w not in reach:
                reach.add(w)
                queue.append(w)
    tables = {v: row for v, row in tables.items() if v in reach}
    return _canonicalize(rank, tables, base)


# ---------------------------------------------------------------------------
# completion


def hall_complete(core: LabeledCore, avoid: Sequence[W.Word]) -> LabeledCore:
    """Embed the core in a complete core of finite index keeping every
    avoid word outside the subgroup.

    Each avoid word's unread suffix is grafted as a fresh path, after
    which its trace is total and ends away from the base; the per-label
    gaps are then closed by matching missing-outgoing with missing-
    incoming vertices.  Adding edges never changes an existing trace, so
    the identity-position matching already works; rotations are kept as
    a fallback and re-checked.
    """
    cleaned: list[W.Word] = []
    for a in avoid:
        w = W.free_reduce(a)
        if any(abs(x) > core.rank for x in w):
            raise DomainError(f"avoid word {W.fmt(w)!r} exceeds rank {core.rank}")
        if not w:
            raise DomainError("empty avoid word is in every subgroup")
        if core.contains(w):
            raise DomainError(f"avoid word {W.fmt(w)!r} lies in the subgroup")
        cleaned.append(w)

    tables: dict[int, dict[int, int]] = {
        v: {d: w for d, w in enumerate(core.table[v]) if w >= 0}
        for v in range(core.n_vertices)
    }

    def trace(word: W.Word) -> tuple[int, int]:
        at = core.base
        for i, x in enumerate(word):
            nxt = tables[at].get(dir_of(x), -1)
            if nxt < 0:
                return at, i
            at = nxt
        return at, len(word)

    for w in cleaned:
        at, consumed = trace(w)
        for x in w[consumed:]:
            fresh = len(tables)
            tables[fresh] = {}
            tables[at][dir_of(x)] = fresh
            tables[fresh][dir_of(-x)] = at
            at = fresh

    for i in range(core.rank):
        missing_out = sorted(v for v in tables if 2 * i not in tables[v])
        missing_in = sorted(v for v in tables if 2 * i + 1 not in tables[v])
        if len(missing_out) != len(missing_in):
            raise DomainError("label counts out of balance; core was malformed")
        k = len(missing_out)
        if k == 0:
            continue
        done = False
        for shift in range(k):
            for j, v in enumerate(missing_out):
                w = missing_in[(j + shift) % k]
                tables[v][2 * i] = w
                tables[w][2 * i + 1] = v
            if all(trace(w) != (core.base, len(w)) for w in cleaned):
                done = True
                break
            for j, v in enumerate(missing_out):
                w = missing_in[(j + shift) % k]
                del tables[v][2 * i]
                del tables[w][2 * i + 1]
        if not done:
            raise DomainError("no rotation matching avoids the given words")

    out = _canonicalize(core.rank, tables, core.base)
    if not out.is_complete:
        raise DomainError("completion failed to produce a complete core")
    return out


# ---------------------------------------------------------------------------
# random cores for tests and demos


def random_core(
    rng: Random, rank: int = 2, max_vertices: int = 20, tries: int = 200
) -> LabeledCore:
    """A random non-trivial core with at most max_vertices vertices,
    drawn from random partial injections, pruned and canonicalized."""
    for _ in range(tries):
        n = rng.randint(1, max_vertices)
        tables: dict[int, dict[int, int]] = {v: {} for v in range(n)}
        for i in range(rank):
            k = rng.randint(0, n)
            srcs = rng.sample(range(n), k)
            tgts = rng.sample(range(n), k)
            for v, w in zip(srcs, tgts):
                tables[v][2 * i] = w
                tables[w][2 * i + 1] = v
        reach = {0}
        queue = [0]
        while queue:
            v = queue.pop()
            for w in tables[v].values():
                if w not in reach:
                    reach.add(w)
                    queue.append(w)
        tables = {v: row for v, row in tables.items() if v in reach}
        for v in tables:
            tables[v] = {d: w for d, w in tables[v].items() if w in tables}
        _prune(tables, 0)
        core = _canonicalize(rank, tables, 0)
        if not core.is_trivial and core.n_vertices <= max_vertices:
            return core
    raise DomainError("failed to draw a non-trivial core")


def random_complete_core(rng: Random, rank: int, n: int) -> LabeledCore:
    """A random finite-index core: the base component of random
    permutation actions on n points."""
    perms = []
    for _ in range(rank):
        p = list(range(n))
        rng.shuffle(p)
        perms.append(tuple(p))
    return core_from_action(rank, perms, 0)


# ---------------------------------------------------------------------------
# text formats


def write_core(core: LabeledCore) -> str:
    """Header then one line per canonical-orientation edge, in vertex
    and label order; canonical cores round-trip byte for byte."""
    lines = [f"core r={core.rank} n={core.n_vertices} base={core.base}"]
    for v, i, w in core.arcs():
        lines.append(f"edge {v} {W.fmt((i,))} {w}")
    return "\n".join(lines) + "\n"


def parse_core(text: str) -> LabeledCore:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty core text")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "core":
        raise ParseError(f"bad header line: {lines[0]!r}")
    try:
        fields = dict(tok.split("=", 1) for tok in head[1:])
        r = int(fields["r"])
        n = int(fields["n"])
        base = int(fields["base"])
    except (ValueError, KeyError) as exc:
        raise ParseError(f"bad header line: {lines[0]!r}") from exc
    if r < 1 or n < 1 or not (0 <= base < n):
        raise ParseError("header values out of range")
    tables: dict[int, dict[int, int]] = {v: {} for v in range(n)}
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 4 or toks[0] != "edge":
            raise ParseError(f"bad edge line: {ln!r}")
        try:
            v, w = int(toks[1]), int(toks[3])
        except ValueError as exc:
            raise ParseError(f"bad edge line: {ln!r}") from exc
        letter_word = W.parse(toks[2], rank=r)
        if len(letter_word) != 1:
            raise ParseError(f"bad edge label: {toks[2]!r}")
        (letter,) = letter_word
        if letter < 0:
            v, w, letter = w, v, -letter
        if not (0 <= v < n and 0 <= w < n):
            raise ParseError(f"edge endpoint out of range: {ln!r}")
        if dir_of(letter) in tables[v] or dir_of(-letter) in tables[w]:
            raise ParseError(f"duplicate transition in line {ln!r}")
        tables[v][dir_of(letter)] = w
        tables[w][dir_of(-letter)] = v
    for v in range(n):
        if v != base and len(tables[v]) <= 1:
            raise ParseError(f"vertex {v} has valency below two")
    try:
        return _canonicalize(r, tables, base)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def dot_core(core: LabeledCore) -> str:
    lines = ["digraph {"]
    for v in range(core.n_vertices):
        shape = "doublecircle" if v == core.base else "circle"
        lines.append(f"  v{v} [shape={shape}];")
    for v, i, w in core.arcs():
        lines.append(f'  v{v} -> v{w} [label="{W.fmt((i,))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# label-respecting maps between cores


def core_factor_map(upper: LabeledCore, lower: LabeledCore) -> tuple[int, ...] | None:
    """Base-preserving label map upper -> lower, or None.

    Such a map exists exactly when the subgroup of upper is contained in
    the subgroup of lower: every cell of a core lies on a closed reduced
    base path, so propagation from the base either completes or finds a
    genuine witness of non-containment.
    """
    if upper.rank != lower.rank:
        raise DomainError("cores live over roses of different ranks")
    f: dict[int, int] = {upper.base: lower.base}
    queue = deque([upper.base])
    while queue:
        v = queue.popleft()
        for d in range(2 * upper.rank):
            w = upper.table[v][d]
            if w < 0:
                continue
            fw = lower.table[f[v]][d]
            if fw < 0:
                return None
            if w in f:
                if f[w] != fw:
                    return None
            else:
                f[w] = fw
                queue.append(w)
    return tuple(f[v] for v in range(upper.n_vertices))


def covering_to_core(c: Covering) -> LabeledCore:
    """Read a covering of a single-vertexed graph as a complete core,
    labeling the loops by arc order."""
    tgt = c.target
    if tgt.n_vertices != 1:
        raise DomainError("target is not single-vertexed")
    rank = tgt.n_arcs
    if rank < 1:
        raise DomainError("target rose has no loops")
    dir_by_cell: dict[int, int] = {}
    for i, e in enumerate(tgt.arc_reps):
        dir_by_cell[e] = 2 * i
        dir_by_cell[tgt.inv[e]] = 2 * i + 1
    src = c.source
    vid = {v: i for i, v in enumerate(src.vertices)}
    tables: dict[int, dict[int, int]] = {i: {} for i in vid.values()}
    for e in src.edge_cells:
        d = dir_by_cell[c.morphism.cell_map[e]]
        tables[vid[src.start[e]]][d] = vid[src.t(e)]
    return _canonicalize(rank, tables, vid[c.base_source])
