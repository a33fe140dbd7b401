"""Spine profiles, checker counts, and the pullback rank estimate."""

import random

import pytest

from stallings import words as W
from stallings.core import core_from_words, random_core
from stallings.errors import DomainError
from stallings.hn import (
    CSV_HEADER,
    chain_of_loops,
    classical_bounds,
    excise_and_profile,
    hn_bound_rhs,
    hn_profile,
    shn_report,
)
from stallings.lattice import pullback


def build(rank, *texts):
    return core_from_words(rank, [W.parse(t, rank) for t in texts])


EVEN_B = build(2, "a", "bAB", "bb")
PHI_1 = build(2, "ab")  # the cyclic subgroup sitting across both letters
PHI_2 = build(2, "b")  # the same abstract group embedded along one letter


# -- profiles -----------------------------------------------------------------


def test_profile_of_diagonal_embedding():
    p = hn_profile(PHI_1)
    assert p.spine_vertices == 2
    assert p.pairs == (1, 1)
    assert p.checkers == 0
    assert p.subgroup_rank == 1


def test_profile_of_axis_embedding():
    p = hn_profile(PHI_2)
    assert p.spine_vertices == 1
    assert p.pairs == (1, 0)
    assert p.checkers == 0


def test_profile_of_complete_core_has_no_pairs():
    p = hn_profile(EVEN_B)
    assert p.spine_vertices == 2
    assert p.pairs == (0, 0)
    assert p.checkers == 2
    assert p.stubs == ()


def test_profile_counts_length_zero_runs():
    # <b>: the single vertex is a length-0 run of the first letter
    p = hn_profile(PHI_2)
    assert sorted(p.stubs) == [(0, -1), (0, 1)]


def test_profile_rank_identity():
    rng = random.Random(131)
    for _ in range(200):
        c = random_core(rng)
        p = hn_profile(c)
        assert p.subgroup_rank == c.subgroup_rank
        assert p.spine_vertices - sum(p.pairs) + 1 == c.subgroup_rank


def test_checker_lemma_random():
    rng = random.Random(137)
    for _ in range(300):
        c = random_core(rng)
        p = hn_profile(c)
        assert p.checkers == c.subgroup_rank - 1
        assert len(p.interior) >= sum(p.pairs)


def test_profile_requires_rank_two():
    with pytest.raises(DomainError):
        hn_profile(build(3, "ab"))
    with pytest.raises(DomainError):
        hn_profile(build(2))


# -- bound arithmetic -----------------------------------------------------------


def test_rhs_of_cyclic_pair():
    p1 = hn_profile(PHI_1)
    assert hn_bound_rhs(p1, p1, 1) == 3
    assert hn_bound_rhs(p1, p1, 2) == 3
    p2 = hn_profile(PHI_2)
    # n2 = 0 on both sides kills the correction term entirely
    assert hn_bound_rhs(p2, p2, 2) == 0
    assert hn_bound_rhs(p2, p2, 1) == 1


def test_classical_table_small_ranks():
    assert classical_bounds(2, 2) == {
        "neumann": 2,
        "burns": 1,
        "tardos": 1,
        "dicks_formanek": 2,
    }
    assert classical_bounds(3, 3) == {
        "neumann": 8,
        "burns": 6,
        "tardos": 4,
        "dicks_formanek": 4,
    }


def test_report_of_tight_self_intersection():
    rep = shn_report(EVEN_B, EVEN_B)
    assert (rep.lhs, rep.rhs1, rep.rhs2) == (4, 4, 4)
    assert rep.tightest == "theorem"
    assert rep.csv_row() == "3,3,2,2,0,0,0,0,4,4,4,8,6,4,4"
    assert CSV_HEADER.count(",") == rep.csv_row().count(",")


def test_report_components_carry_tags():
    rep = shn_report(EVEN_B, EVEN_B)
    assert [(i, rk, tree, g) for i, rk, tree, g in rep.components] == [
        (0, 3, False, "1"),
        (1, 3, False, "b"),
    ]


def test_estimate_holds_on_random_pairs():
    rng = random.Random(139)
    for _ in range(80):
        c1 = random_core(rng, max_vertices=10)
        c2 = random_core(rng, max_vertices=10)
        rep = shn_report(c1, c2)  # raises if the estimate fails
        assert rep.lhs <= min(rep.rhs1, rep.rhs2)
        # lhs is the reduced rank over all non-tree components
        res = pullback(c1, c2)
        assert rep.lhs == sum(c.rank - 1 for c in res.components if not c.is_tree)


def test_report_rejects_trivial_input():
    with pytest.raises(DomainError):
        shn_report(build(2), EVEN_B)


# -- the chain-of-loops family ----------------------------------------------------


def test_chain_profile():
    for k in range(1, 7):
        c = chain_of_loops(k)
        p = hn_profile(c)
        assert p.spine_vertices == k + 1
        assert p.pairs == (1, 0)
        assert c.subgroup_rank == k + 1
        assert p.checkers == k


def test_chain_self_bounds():
    for k in range(1, 7):
        p = hn_profile(chain_of_loops(k))
        assert hn_bound_rhs(p, p, 1) == (k + 1) ** 2
        assert hn_bound_rhs(p, p, 2) == k * k


def test_chain_theorem_error_vanishes():
    # theorem error over the product term is 0 for every k, the
    # classical errors grow like k^2
    for k in range(1, 7):
        p = hn_profile(chain_of_loops(k))
        prod = (p.subgroup_rank - 1) ** 2
        assert hn_bound_rhs(p, p, 2) - prod == 0
        table = classical_bounds(p.subgroup_rank, p.subgroup_rank)
        assert table["neumann"] - prod == k * k
        assert table["burns"] - prod == k * (k - 1)


def test_chain_membership_sanity():
    c = chain_of_loops(3)
    assert c.contains(W.parse("b"))
    assert c.contains(W.parse("abA"))
    assert c.contains(W.parse("aaabAAA"))
    assert not c.contains(W.parse("a"))
    assert not c.contains(W.parse("aaaa"))


# -- excision front end -------------------------------------------------------------


def test_excise_identity_cover_of_theta():
    from stallings.covering import GraphMorphism, require_covering
    from stallings.graph import Graph

    theta = Graph.from_arcs(2, [(0, 1), (0, 1), (0, 1)])
    ident = require_covering(
        GraphMorphism(theta, theta, tuple(range(theta.n_cells))), 0, 0
    )
    p = excise_and_profile(ident)
    assert p.spine_vertices == 1
    assert p.pairs == (0, 0)
    assert p.subgroup_rank == 2


def test_excise_double_cover_of_theta():
    from stallings.covering import GraphMorphism, require_covering
    from stallings.graph import Graph

    theta = Graph.from_arcs(2, [(0, 1), (0, 1), (0, 1)])
    src = Graph.from_arcs(4, [(0, 2), (1, 3), (0, 3), (1, 2), (0, 2), (1, 3)])
    cells = [0, 0, 1, 1] + [2, 3, 2, 3, 4, 5, 4, 5, 6, 7, 6, 7]
    cov = require_covering(GraphMorphism(src, theta, tuple(cells)), 0, 0)
    p = excise_and_profile(cov)
    assert p.spine_vertices == 2
    assert p.pairs == (0, 0)
    assert p.subgroup_rank == 3


def test_excise_rejects_wrong_rank():
    from stallings.covering import GraphMorphism, require_covering
    from stallings.graph import rose

    loop = rose(1)
    ident = require_covering(
        GraphMorphism(loop, loop, tuple(range(loop.n_cells))), 0, 0
    )
    with pytest.raises(DomainError):
        excise_and_profile(ident)
