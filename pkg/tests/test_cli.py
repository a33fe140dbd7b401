"""Command line behavior: outputs, formats, files, exit codes."""

import json

import pytest

from stallings import words as W
from stallings.cli import main
from stallings.core import core_from_action, core_from_words, parse_core
from stallings.covering import write_morphism
from stallings.graph import rose, write_graph

EVEN_B_TEXT = (
    "core r=2 n=2 base=0\n"
    "edge 0 a 0\n"
    "edge 0 b 1\n"
    "edge 1 a 1\n"
    "edge 1 b 0\n"
)


def run(*args):
    try:
        return main(list(args))
    except SystemExit as exc:
        return exc.code


def test_member_true(capsys):
    assert run("member", "-r", "2", "-g", "ab", "-w", "abab") == 0
    assert capsys.readouterr().out == "true\n"


def test_member_false(capsys):
    assert run("member", "-r", "2", "-g", "ab", "-w", "ba") == 0
    assert capsys.readouterr().out == "false\n"


def test_index_finite(capsys):
    assert run("index", "-r", "2", "-g", "a", "-g", "bAB", "-g", "bb") == 0
    assert capsys.readouterr().out == "2\n"


def test_index_infinite(capsys):
    assert run("index", "-r", "2", "-g", "ab") == 0
    assert capsys.readouterr().out == "infinite\n"


def test_core_prints_canonical_text(capsys):
    assert run("core", "-r", "2", "-g", "a", "-g", "bAB", "-g", "bb") == 0
    out = capsys.readouterr().out
    assert out == EVEN_B_TEXT
    # round-trip: the printed core re-parses to the same subgroup
    assert parse_core(out) == core_from_words(
        2, [W.parse(t) for t in ("a", "bAB", "bb")]
    )


def test_core_json_lines(capsys):
    assert run("core", "-r", "2", "-g", "ab", "--format", "json-lines") == 0
    record = json.loads(capsys.readouterr().out)
    assert record["rank"] == 1
    assert record["index"] is None


def test_rank(capsys):
    assert run("rank", "-r", "2", "-g", "aa", "-g", "ab", "-g", "ba") == 0
    assert capsys.readouterr().out == "3\n"


def test_basis(capsys):
    assert run("basis", "-r", "2", "-g", "a", "-g", "bAB", "-g", "bb") == 0
    assert capsys.readouterr().out == "a\nbaB\nbb\n"


def test_intersect(capsys):
    assert run("intersect", "-r", "2", "--A", "a,bAB,bb", "--B", "a,bAB,bb") == 0
    assert capsys.readouterr().out == EVEN_B_TEXT


def test_join(capsys):
    assert run("join", "-r", "2", "--A", "a", "--B", "b") == 0
    assert capsys.readouterr().out == "core r=2 n=1 base=0\nedge 0 a 0\nedge 0 b 0\n"


def test_cosets_report(capsys):
    assert run("cosets", "-r", "2", "--A", "a,bAB,bb", "--B", "a,bAB,bb") == 0
    assert capsys.readouterr().out == (
        "component 0 rank=3 tree=false g=1\n"
        "component 1 rank=3 tree=false g=b\n"
    )


def test_complete(capsys):
    assert run("complete", "-r", "2", "-g", "a", "--avoid", "b") == 0
    assert capsys.readouterr().out == EVEN_B_TEXT + "index=2\n"


def test_galois(capsys):
    assert run("galois", "-r", "2", "-g", "a", "-g", "bAB", "-g", "bb") == 0
    assert capsys.readouterr().out == "true\n"
    assert run("galois", "-r", "2", "-g", "a", "-g", "bab") == 0
    assert capsys.readouterr().out == "false\n"


def test_deck(capsys):
    assert run("deck", "-r", "2", "-g", "a", "-g", "bAB", "-g", "bb") == 0
    assert capsys.readouterr().out == "order 2\n0 1\n1 0\n"


def test_lattice(capsys):
    klein = core_from_action(2, [(1, 0, 3, 2), (2, 3, 0, 1)])
    gens = []
    for w in klein.schreier_basis():
        gens.extend(["-g", W.fmt(w)])
    assert run("lattice", "-r", "2", *gens, "--jobs", "2") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "classes 5"
    assert lines[1] == "class 0 degree=1 order=4"
    assert lines[-1] == "class 4 degree=4 order=1"


def test_hn_profile(capsys):
    assert run("hn-profile", "-r", "2", "-g", "ab") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "H=2 n1=1 n2=1 checkers=0 rank=1"
    assert len(lines) == 5  # four stubs follow


def test_hn_bound(capsys):
    assert run("hn-bound", "-r", "2", "--A", "a,bAB,bb", "--B", "a,bAB,bb") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == (
        "lhs=4 rhs1=4 rhs2=4 neumann=8 burns=6 tardos=4 "
        "dicks_formanek=4 tightest=theorem"
    )
    assert lines[1] == "component 0 rank=3 tree=false g=1"
    assert lines[2] == "component 1 rank=3 tree=false g=b"


def test_hn_bound_csv(capsys):
    assert run(
        "hn-bound", "-r", "2", "--A", "a,bAB,bb", "--B", "a,bAB,bb", "--csv"
    ) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("rk1,rk2,")
    assert lines[1] == "3,3,2,2,0,0,0,0,4,4,4,8,6,4,4"


def test_hn_bound_json_lines(capsys):
    assert run(
        "hn-bound",
        "-r",
        "2",
        "--A",
        "a,bAB,bb",
        "--B",
        "a,bAB,bb",
        "--format",
        "json-lines",
    ) == 0
    lines = capsys.readouterr().out.splitlines()
    head = json.loads(lines[0])
    assert head["lhs"] == 4
    assert [json.loads(ln)["id"] for ln in lines[1:]] == [0, 1]


def test_excise_with_profile(tmp_path, capsys):
    cover = core_from_action(2, [(1, 2, 0), (0, 1, 2)]).to_covering()
    path = tmp_path / "cover.morphism"
    path.write_text(write_morphism(cover.morphism), encoding="ascii")
    assert run("excise", "-f", str(path), "--profile") == 0
    out = capsys.readouterr().out
    assert "degree=3 rank=4" in out
    assert "H=3 n1=0 n2=0 rank=4" in out


def test_ball_rose(capsys):
    assert run("ball", "-r", "2", "--radius", "1") == 0
    out = capsys.readouterr().out
    assert out.startswith("graph 5 4\n")
    assert "center 0" in out
    assert "boundary 1 2 3 4" in out


def test_ball_from_file(tmp_path, capsys):
    path = tmp_path / "loop.graph"
    path.write_text(write_graph(rose(1)), encoding="ascii")
    assert run("ball", "-f", str(path), "--radius", "3") == 0
    assert capsys.readouterr().out.startswith("graph 7 6\n")


def test_export_dot_stdout(capsys):
    assert run("export", "--dot", "-r", "2", "-g", "ab") == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph {")
    assert 'label="a"' in out


def test_export_dot_to_file(tmp_path, capsys):
    target = tmp_path / "core.dot"
    assert run("export", "--dot", "-r", "2", "-g", "ab", "-o", str(target)) == 0
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="ascii").startswith("digraph {")


def test_export_dot_graph_file(tmp_path, capsys):
    path = tmp_path / "theta.graph"
    path.write_text("graph 2 3\narc 0 0 1\narc 1 0 1\narc 2 0 1\n", encoding="ascii")
    assert run("export", "--dot", "-f", str(path)) == 0
    assert capsys.readouterr().out.startswith("graph {")


def test_parse_error_exits_2(capsys):
    assert run("member", "-r", "2", "-g", "a?", "-w", "a") == 2
    err = capsys.readouterr().err
    assert "?" in err


def test_rank_mismatch_exits_2(capsys):
    assert run("member", "-r", "2", "-g", "ab", "-w", "c") == 2
    assert "rank" in capsys.readouterr().err


def test_domain_error_exits_1(capsys):
    assert run("hn-profile", "-r", "2") == 1
    assert "trivial" in capsys.readouterr().err


def test_unknown_subcommand_exits_2():
    assert run("frobnicate") == 2


def test_missing_required_flag_exits_2():
    assert run("member", "-r", "2", "-g", "ab") == 2
