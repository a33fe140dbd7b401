"""Rank bounds for intersections of rank-2-ambient subgroups.

For a core over the two-letter rose, each letter decomposes the vertex
set into maximal runs: directed chains of that letter's edges.  A run
that closes into a cycle contributes nothing; an open run pairs the two
missing half-edges at its ends through the hanging trees of the full
covering, and the number of such pairs per letter, together with the
spine vertex count, controls the rank of every pullback component.

The checker count re-derives the subgroup rank: one checker on every
vertex, remove one per first-letter pair at the run's entry vertex,
then one per second-letter pair from any still-checkered vertex.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from . import words as W
from .core import LabeledCore, covering_to_core
from .covering import Covering, excise_trees
from .errors import DomainError
from .graph import connected_rank, spanning_forest
from .lattice import PullbackResult, double_coset_tags, pullback


@dataclass(frozen=True)
class HNProfile:
    spine_vertices: int  # H
    pairs: tuple[int, int]  # (n1, n2)
    interior: tuple[int, ...]
    stubs: tuple[tuple[int, int], ...]  # (vertex, letter) missing directions
    checkers: int

    @property
    def subgroup_rank(self) -> int:
        return self.spine_vertices - sum(self.pairs) + 1


def _runs(core: LabeledCore, letter: int) -> list[list[int]]:
    """Maximal open runs of the letter, each as its vertex chain."""
    out_d = 2 * (letter - 1)
    in_d = out_d + 1
    runs = []
    for v in range(core.n_vertices):
        if core.table[v][in_d] >= 0:
            continue
        chain = [v]
        at = v
        while core.table[at][out_d] >= 0:
            at = core.table[at][out_d]
            chain.append(at)
        runs.append(chain)
    return runs


def hn_profile(core: LabeledCore) -> HNProfile:
    """Spine size, per-letter pair counts, stubs, and the checker count.

    Requires ambient rank 2 and a non-trivial core.  The core is its own
    spine, so H is just the vertex count; a vertex with neither direction
    of a letter is a length-zero run and still one pair.
    """
    if core.rank != 2:
        raise DomainError("profiles are defined over the rank-2 rose")
    if core.is_trivial:
        raise DomainError("profile of a trivial subgroup is undefined")
    h = core.n_vertices
    runs1 = _runs(core, 1)
    runs2 = _runs(core, 2)
    n1, n2 = len(runs1), len(runs2)

    stubs = []
    for v in range(core.n_vertices):
        for i in (1, 2):
            if core.table[v][2 * (i - 1)] < 0:
                stubs.append((v, i))
            if core.table[v][2 * (i - 1) + 1] < 0:
                stubs.append((v, -i))
    if sum(1 for _, s in stubs if abs(s) == 1) != 2 * n1 or sum(
        1 for _, s in stubs if abs(s) == 2
    ) != 2 * n2:
        raise DomainError("stub count disagrees with the runs; core was malformed")
    if h < n1 + n2:
        raise DomainError("interior bound failed; core was malformed")

    checkered = set(range(core.n_vertices))
    for run in sorted(runs1, key=lambda r: r[0]):
        # the interior vertex adjacent to the entry stub is the run start
        checkered.remove(run[0])
    for run in sorted(runs2, key=lambda r: r[0]):
        live = sorted(v for v in run if v in checkered)
        if live:
            checkered.remove(live[0])
        else:
            checkered.remove(min(checkered))
    checkers = len(checkered)
    if checkers != core.subgroup_rank - 1:
        raise DomainError("checker count disagrees with the rank")
    return HNProfile(h, (n1, n2), tuple(range(h)), tuple(sorted(stubs)), checkers)


# ---------------------------------------------------------------------------
# bounds


def hn_bound_rhs(p1: HNProfile, p2: HNProfile, which: int) -> int:
    """(rk1-1)(rk2-1) + H1*H2 - (H1-n1i)(H2-n2i) for the chosen letter."""
    if which not in (1, 2):
        raise DomainError("letter index must be 1 or 2")
    rk1, rk2 = p1.subgroup_rank, p2.subgroup_rank
    h1, h2 = p1.spine_vertices, p2.spine_vertices
    a, b = p1.pairs[which - 1], p2.pairs[which - 1]
    return (rk1 - 1) * (rk2 - 1) + h1 * h2 - (h1 - a) * (h2 - b)


def classical_bounds(rk1: int, rk2: int) -> dict[str, int]:
    """The historical bounds on the reduced rank sum, as stated."""
    prod = (rk1 - 1) * (rk2 - 1)
    return {
        "neumann": prod + prod,
        "burns": prod + max((rk1 - 2) * (rk2 - 1), (rk1 - 1) * (rk2 - 2)),
        "tardos": prod + max((rk1 - 2) * (rk2 - 2) - 1, 0),
        "dicks_formanek": prod + (rk1 - 3) * (rk2 - 3),
    }


CSV_HEADER = (
    "rk1,rk2,H1,H2,n11,n12,n21,n22,lhs,rhs1,rhs2,"
    "neumann,burns,tardos,dicks_formanek"
)


@dataclass(frozen=True)
class HNBoundReport:
    profile1: HNProfile
    profile2: HNProfile
    lhs: int
    rhs1: int
    rhs2: int
    neumann: int
    burns: int
    tardos: int
    dicks_formanek: int
    tightest: str
    components: tuple[tuple[int, int, bool, str | None], ...]

    def csv_row(self) -> str:
        p1, p2 = self.profile1, self.profile2
        row = [
            p1.subgroup_rank,
            p2.subgroup_rank,
            p1.spine_vertices,
            p2.spine_vertices,
            p1.pairs[0],
            p1.pairs[1],
            p2.pairs[0],
            p2.pairs[1],
            self.lhs,
            self.rhs1,
            self.rhs2,
            self.neumann,
            self.burns,
            self.tardos,
            self.dicks_formanek,
        ]
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow(row)
        return buf.getvalue().strip()


def shn_report(c1: LabeledCore, c2: LabeledCore) -> HNBoundReport:
    """Reduced rank sum of the pullback against both theorem bounds and
    the classical table; the theorem bounds are asserted to hold."""
    if c1.is_trivial or c2.is_trivial:
        raise DomainError("bounds are for non-trivial subgroups")
    p1, p2 = hn_profile(c1), hn_profile(c2)
    res = pullback(c1, c2)
    tags = {t.component: W.fmt(t.word) for t in double_coset_tags(res)}
    lhs = sum(comp.rank - 1 for comp in res.components if not comp.is_tree)
    rhs1 = hn_bound_rhs(p1, p2, 1)
    rhs2 = hn_bound_rhs(p1, p2, 2)
    if lhs > min(rhs1, rhs2):
        raise DomainError("rank estimate violated; implementation is inconsistent")
    classic = classical_bounds(p1.subgroup_rank, p2.subgroup_rank)
    ranked = [("theorem", min(rhs1, rhs2))] + list(classic.items())
    tightest = min(ranked, key=lambda kv: kv[1])[0]
    comps = tuple(
        (i, comp.rank, comp.is_tree, tags.get(i))
        for i, comp in enumerate(res.components)
    )
    return HNBoundReport(
        p1,
        p2,
        lhs,
        rhs1,
        rhs2,
        classic["neumann"],
        classic["burns"],
        classic["tardos"],
        classic["dicks_formanek"],
        tightest,
        comps,
    )


# ---------------------------------------------------------------------------
# excision front end


def _forest_arcs_reversed(g) -> frozenset[int]:
    """A spanning tree built scanning arcs in reverse, to get a second
    tree when one exists."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    cells = set(g.vertices)
    for e in reversed(g.arc_reps):
        a, b = find(g.start[e]), find(g.t(e))
        if a != b:
            parent[max(a, b)] = min(a, b)
            cells.add(e)
            cells.add(g.inv[e])
    return frozenset(cells)


def excise_and_profile(c: Covering) -> HNProfile:
    """Collapse a spanning tree of a rank-2 base and profile the result.

    A second spanning tree, when the base has one, must give the same
    (H, n1, n2); for a genuine finite covering the core is complete and
    the pair counts vanish, so the content is the spine vertex count.
    """
    if connected_rank(c.target) != 2:
        raise DomainError("base graph must have rank 2")
    tree1 = spanning_forest(c.target).cells
    prof1 = hn_profile(covering_to_core(excise_trees(c, sorted(tree1)).covering))
    tree2 = _forest_arcs_reversed(c.target)
    if tree2 != tree1:
        prof2 = hn_profile(covering_to_core(excise_trees(c, sorted(tree2)).covering))
        if (prof1.spine_vertices, prof1.pairs) != (prof2.spine_vertices, prof2.pairs):
            raise DomainError("profile depends on the spanning tree")
    return prof1


# ---------------------------------------------------------------------------
# the chain-of-loops family


def chain_of_loops(k: int) -> LabeledCore:
    """Vertices 0..k in a first-letter path, a second-letter loop on each.

    Self-intersection of this family meets the theorem bound with error
    zero in the second letter while every classical error term grows
    quadratically in k.
    """
    if k < 1:
        raise DomainError("the family starts at k=1")
    from .core import _canonicalize

    tables: dict[int, dict[int, int]] = {v: {} for v in range(k + 1)}
    for v in range(k):
        tables[v][0] = v + 1
        tables[v + 1][1] = v
    for v in range(k + 1):
        tables[v][2] = v
        tables[v][3] = v
    return _canonicalize(2, tables, 0)
