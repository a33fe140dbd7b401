"""Acceptance gate: eight numbered criteria, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they appear; each criterion asserts its exact values and its time
budget, so a red test is a real miss.
"""

import math
import random
import time

from stallings import words as W
from stallings.core import (
    core_from_action,
    core_from_words,
    hall_complete,
    random_complete_core,
    random_core,
)
from stallings.galois import deck_group, intermediate_lattice, is_galois
from stallings.hn import chain_of_loops, classical_bounds, hn_bound_rhs, hn_profile, shn_report
from stallings.lattice import intersect, join, pullback


def build(*texts, rank=2):
    return core_from_words(rank, [W.parse(t, rank) for t in texts])


def _emit(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}")


def _guarded(num: int, label: str, fn, budget_s: float) -> None:
    """Run fn, print the line, enforce the budget; fn returns extra detail."""
    t0 = time.perf_counter()
    try:
        extra = fn()
    except BaseException as exc:
        _emit(num, False, f"{label} ({type(exc).__name__}: {exc})")
        raise
    dt = time.perf_counter() - t0
    within = dt < budget_s
    _emit(num, within, f"{label}{extra} [{dt * 1000:.0f} ms / {budget_s * 1000:.0f} ms]")
    assert within, f"criterion {num} exceeded its budget: {dt:.3f}s"


# -- 1: worked example profiles ------------------------------------------------


def test_criterion_1_worked_example_profiles():
    phi1 = build("ab")
    phi2 = build("b")

    def run():
        best = math.inf
        for _ in range(5):
            t0 = time.perf_counter()
            p1 = hn_profile(phi1)
            p2 = hn_profile(phi2)
            best = min(best, time.perf_counter() - t0)
        assert (p1.spine_vertices, p1.pairs) == (2, (1, 1))
        assert (p2.spine_vertices, p2.pairs) == (1, (1, 0))
        assert best < 0.001, f"profiles took {best * 1000:.3f} ms"
        return f": H/pairs = (2,(1,1)) and (1,(1,0)), {best * 1e6:.0f} us"

    _guarded(1, "worked example profiles", run, 1.0)


# -- 2: checker lemma ------------------------------------------------------------


def test_criterion_2_checker_lemma():
    def run():
        rng = random.Random(2202)
        for _ in range(1000):
            core = random_core(rng, rank=2, max_vertices=20)
            p = hn_profile(core)
            assert p.checkers == core.subgroup_rank - 1
            assert len(p.interior) >= sum(p.pairs)
        return ": 1000 cores, checkers = rank-1, interior >= n1+n2"

    _guarded(2, "checker lemma", run, 5.0)


# -- 3: rank estimate --------------------------------------------------------------


def test_criterion_3_rank_estimate():
    def run():
        rng = random.Random(2303)
        for _ in range(200):
            rep = shn_report(
                random_core(rng, max_vertices=20), random_core(rng, max_vertices=20)
            )
            assert rep.lhs <= min(rep.rhs1, rep.rhs2)
        tight = shn_report(build("a", "bAB", "bb"), build("a", "bAB", "bb"))
        assert (tight.lhs, tight.rhs1, tight.rhs2) == (4, 4, 4)
        return ": 200 pairs bounded, self-intersection hits lhs=rhs=4"

    _guarded(3, "rank estimate", run, 10.0)


# -- 4: bound comparison over the loop family ----------------------------------------


def test_criterion_4_bound_comparison():
    def run():
        crossover = None
        prev = None
        for k in range(1, 7):
            p = hn_profile(chain_of_loops(k))
            rk = p.subgroup_rank
            assert rk == k + 1
            prod = (rk - 1) * (rk - 1)
            theorem = min(hn_bound_rhs(p, p, 1), hn_bound_rhs(p, p, 2))
            table = classical_bounds(rk, rk)
            # theorem bound never exceeds the doubled product bound
            assert theorem <= table["neumann"]
            # the table's error term is quadratic in k, the theorem's is 0
            assert table["neumann"] - prod == k * k
            assert theorem - prod == 0
            if crossover is None and theorem < table["burns"]:
                crossover = k
            if prev is not None:
                assert theorem > prev[0] and table["neumann"] > prev[1]
            prev = (theorem, table["neumann"])
        assert crossover == 2
        return f": k=1..6 monotone, crossover vs burns at k={crossover}"

    _guarded(4, "bound comparison table", run, 1.0)


# -- 5: dictionary laws ----------------------------------------------------------------


def test_criterion_5_dictionary_laws():
    def run():
        rng = random.Random(2505)
        for _ in range(100):
            r = rng.randint(1, 3)
            core = random_complete_core(rng, r, rng.randint(1, 8))
            assert core.subgroup_rank - 1 == core.index() * (r - 1)
        checks = 0
        while checks < 10_000:
            c1 = random_core(rng, max_vertices=10)
            c2 = random_core(rng, max_vertices=10)
            res = pullback(c1, c2)
            assert res.n_vertices <= c1.n_vertices * c2.n_vertices
            met = intersect(c1, c2)
            joined = join(c1, c2)
            for _ in range(100):
                w = W.random_reduced(rng, 2, rng.randint(0, 8))
                in1, in2 = c1.contains(w), c2.contains(w)
                assert met.contains(w) == (in1 and in2)
                if in1 or in2:
                    assert joined.contains(w)
                checks += 1
        return ": 100 complete cores, Howson bound, 10000 word checks"

    _guarded(5, "dictionary laws", run, 10.0)


# -- 6: Galois correspondence ---------------------------------------------------------


def test_criterion_6_galois_correspondence():
    def run():
        klein = core_from_action(2, [(1, 0, 3, 2), (2, 3, 0, 1)])
        lat = intermediate_lattice(klein)
        assert lat.count == 5
        order = deck_group(klein).order
        for cls in lat.classes:
            assert cls.degree == order // len(cls.subgroup)
        for i in range(lat.count):
            assert lat.leq[i][i]
            for j in range(lat.count):
                contained = set(lat.classes[j].subgroup) <= set(lat.classes[i].subgroup)
                assert lat.leq[i][j] == contained
        stab3 = core_from_action(2, [(1, 0, 2), (1, 2, 0)])
        assert not is_galois(stab3)
        assert deck_group(stab3).order == 1
        return ": klein lattice of 5, degrees match, index-3 core not normal"

    _guarded(6, "galois correspondence", run, 1.0)


# -- 7: Hall completion -----------------------------------------------------------------


def test_criterion_7_hall_completion():
    def run():
        rng = random.Random(2707)
        done = 0
        while done < 100:
            core = random_core(rng, max_vertices=12)
            avoid = []
            for _ in range(20):
                w = W.random_reduced(rng, 2, rng.randint(1, 6))
                if not core.contains(w) and w not in avoid:
                    avoid.append(w)
                if len(avoid) == 3:
                    break
            if not avoid:
                continue  # the subgroup was everything; draw again
            finished = hall_complete(core, avoid)
            assert finished.is_complete
            assert finished.index() != math.inf
            for b in core.schreier_basis():
                assert finished.contains(b)
            for w in avoid:
                assert not finished.contains(w)
            done += 1
        return ": 100 completions, finite index, avoids kept out"

    _guarded(7, "hall completion", run, 5.0)


# -- 8: membership oracle ------------------------------------------------------------------


def _minimize_pair(u: W.Word, v: W.Word) -> list[W.Word]:
    """Shrink a generating pair by length-reducing replacement moves."""
    u, v = W.free_reduce(u), W.free_reduce(v)
    changed = True
    while changed:
        changed = False
        for swap in (False, True):
            a, b = (v, u) if swap else (u, v)
            for cand in (
                W.concat(a, b),
                W.concat(a, W.inverse(b)),
                W.concat(b, a),
                W.concat(W.inverse(b), a),
            ):
                if len(cand) < len(a):
                    a = cand
                    changed = True
            u, v = (b, a) if swap else (a, b)
    return [w for w in (u, v) if w]


def _products(gens: list[W.Word], factors: int) -> set[W.Word]:
    """Everything written as a reduced expression in at most ``factors`` steps."""
    steps = []
    for i, g in enumerate(gens):
        steps.append((i + 1, g))
        steps.append((-(i + 1), W.inverse(g)))
    out = {(): 0}
    frontier = [((), 0)]
    for _ in range(factors):
        nxt = []
        for w, last in frontier:
            for tag, g in steps:
                if last == -tag:
                    continue
                nw = W.concat(w, g)
                if nw not in out:
                    out[nw] = tag
                    nxt.append((nw, tag))
        frontier = nxt
    return set(out)


def test_criterion_8_membership_oracle():
    def run():
        rng = random.Random(2808)
        words = [()]
        for n in range(1, 7):
            words.extend(_all_reduced(n))
        assert len(words) == 1457
        for trial in range(50):
            gens = [
                W.random_reduced(rng, 2, rng.randint(1, 5)),
                W.random_reduced(rng, 2, rng.randint(1, 5)),
            ]
            core = core_from_words(2, gens)
            reduced_gens = _minimize_pair(*gens)
            ball = _products(reduced_gens, 8)
            deep = None
            for w in words:
                claimed = core.contains(w)
                seen = w in ball
                if claimed and not seen:
                    if deep is None:
                        deep = _products(reduced_gens, 10)
                    seen = w in deep
                assert claimed == seen, f"disagreement on {W.fmt(w)} for {gens}"
        return ": 50 subgroups, all 1457 words of length <= 6 agree"

    _guarded(8, "membership oracle", run, 30.0)


def _all_reduced(n: int):
    """All freely reduced length-n words over two letters."""
    if n == 0:
        yield ()
        return
    frontier = [(x,) for x in (1, -1, 2, -2)]
    while frontier:
        w = frontier.pop()
        if len(w) == n:
            yield w
            continue
        for x in (1, -1, 2, -2):
            if x != -w[-1]:
                frontier.append(w + (x,))
