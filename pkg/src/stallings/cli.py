"""Command line front end.

Every subcommand is a thin client of the HTTP service.  By default the
app is mounted in-process (no socket involved); --server points the
same client at a running instance instead.

Exit codes: 0 on success, 1 when the request names an impossible fact
(HTTP 400) or the server is unreachable, 2 on malformed input (422).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx


def _request(server: str | None, path: str, payload: dict) -> tuple[int, object]:
    if server is not None:
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=120.0)
        return resp.status_code, resp.json()

    async def run() -> httpx.Response:
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport, base_url="http://app") as client:
            return await client.post(path, json=payload)

    resp = asyncio.run(run())
    return resp.status_code, resp.json()


def _call(args, path: str, payload: dict) -> object:
    """Issue the request; on failure print the detail and raise SystemExit."""
    try:
        status, body = _request(args.server, path, payload)
    except httpx.HTTPError as exc:
        print(f"request failed: {exc}", file=sys.stderr)
        raise SystemExit(1)
    if status == 200:
        return body
    detail = body.get("detail", body) if isinstance(body, dict) else body
    if not isinstance(detail, str):
        detail = json.dumps(detail)
    print(detail, file=sys.stderr)
    raise SystemExit(2 if status == 422 else 1)


def _words(csv_text: str) -> list[str]:
    return [w.strip() for w in csv_text.split(",")]


def _jsonl(record: object) -> None:
    print(json.dumps(record, separators=(",", ":")))


# -- per-command handlers ---------------------------------------------------


def _cmd_core(args) -> int:
    body = _call(args, "/core", {"rank": args.rank, "generators": args.generators})
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print(body["core"], end="")
    return 0


def _cmd_rank(args) -> int:
    body = _call(args, "/rank", {"rank": args.rank, "generators": args.generators})
    _jsonl(body) if args.format == "json-lines" else print(body["rank"])
    return 0


def _cmd_index(args) -> int:
    body = _call(args, "/index", {"rank": args.rank, "generators": args.generators})
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print(body["index"] if body["finite"] else "infinite")
    return 0


def _cmd_member(args) -> int:
    body = _call(
        args,
        "/member",
        {"rank": args.rank, "generators": args.generators, "word": args.word},
    )
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print("true" if body["member"] else "false")
    return 0


def _cmd_basis(args) -> int:
    body = _call(args, "/basis", {"rank": args.rank, "generators": args.generators})
    for w in body["basis"]:
        _jsonl({"word": w}) if args.format == "json-lines" else print(w)
    return 0


def _pair_payload(args) -> dict:
    return {
        "rank": args.rank,
        "a_generators": _words(args.A),
        "b_generators": _words(args.B),
    }


def _cmd_intersect(args) -> int:
    body = _call(args, "/intersect", _pair_payload(args))
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print(body["core"], end="")
    return 0


def _cmd_join(args) -> int:
    body = _call(args, "/join", _pair_payload(args))
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print(body["core"], end="")
    return 0


def _cmd_cosets(args) -> int:
    body = _call(args, "/cosets", _pair_payload(args))
    if args.format == "json-lines":
        for comp in body["components"]:
            _jsonl(comp)
    else:
        print(body["report"], end="")
    return 0


def _cmd_complete(args) -> int:
    body = _call(
        args,
        "/complete",
        {
            "rank": args.rank,
            "generators": args.generators,
            "avoid": _words(args.avoid),
        },
    )
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print(body["core"], end="")
        print(f"index={body['index']}")
    return 0


def _cmd_galois(args) -> int:
    body = _call(args, "/galois", {"rank": args.rank, "generators": args.generators})
    if args.format == "json-lines":
        _jsonl(body)
    else:
        print("true" if body["galois"] else "false")
    return 0


def _cmd_deck(args) -> int:
    body = _call(args, "/deck", {"rank": args.rank, "generators": args.generators})
    if args.format == "json-lines":
        for perm in body["elements"]:
            _jsonl({"perm": perm})
    else:
        print(f"order {body['order']}")
        for perm in body["elements"]:
            print(" ".join(str(x) for x in perm))
    return 0


def _cmd_lattice(args) -> int:
    body = _call(
        args,
        "/lattice",
        {"rank": args.rank, "generators": args.generators, "jobs": args.jobs},
    )
    if args.format == "json-lines":
        for cls in body["classes"]:
            _jsonl(cls)
        return 0
    print(f"classes {body['count']}")
    for i, cls in enumerate(body["classes"]):
        print(f"class {i} degree={cls['degree']} order={cls['group_order']}")
    return 0


def _cmd_hn_profile(args) -> int:
    body = _call(args, "/hn/profile", {"rank": args.rank, "generators": args.generators})
    if args.format == "json-lines":
        _jsonl(body)
        return 0
    print(
        f"H={body['spine_vertices']} n1={body['n1']} n2={body['n2']} "
        f"checkers={body['checkers']} rank={body['rank']}"
    )
    for stub in body["stubs"]:
        print(f"stub {stub}")
    return 0


def _cmd_hn_bound(args) -> int:
    body = _call(args, "/hn/bound", _pair_payload(args))
    if args.format == "json-lines":
        _jsonl({k: v for k, v in body.items() if k != "components"})
        for comp in body["components"]:
            _jsonl(comp)
        return 0
    if args.csv:
        print(body["csv_header"])
        print(body["csv_row"])
        return 0
    print(
        f"lhs={body['lhs']} rhs1={body['rhs1']} rhs2={body['rhs2']} "
        f"neumann={body['neumann']} burns={body['burns']} "
        f"tardos={body['tardos']} dicks_formanek={body['dicks_formanek']} "
        f"tightest={body['tightest']}"
    )
    for comp in body["components"]:
        tag = comp["tag"] if comp["tag"] is not None else "-"
        tree = "true" if comp["tree"] else "false"
        print(f"component {comp['id']} rank={comp['rank']} tree={tree} g={tag}")
    return 0


def _cmd_excise(args) -> int:
    with open(args.file, encoding="ascii") as fh:
        text = fh.read()
    body = _call(
        args,
        "/excise",
        {
            "morphism": text,
            "base_source": args.base_source,
            "base_target": args.base_target,
            "profile": args.profile,
        },
    )
    if args.format == "json-lines":
        _jsonl(body)
        return 0
    print(body["core"], end="")
    print(f"degree={body['degree']} rank={body['rank']}")
    if body["profile"] is not None:
        p = body["profile"]
        print(f"H={p['spine_vertices']} n1={p['n1']} n2={p['n2']} rank={p['rank']}")
    return 0


def _cmd_ball(args) -> int:
    payload: dict = {"vertex": args.vertex, "radius": args.radius}
    if args.file is not None:
        with open(args.file, encoding="ascii") as fh:
            payload["graph"] = fh.read()
    else:
        payload["rank"] = args.rank
    body = _call(args, "/ball", payload)
    if args.format == "json-lines":
        _jsonl(body)
        return 0
    print(body["graph"], end="")
    print(f"center {body['center']}")
    print("boundary " + " ".join(str(v) for v in body["boundary"]))
    return 0


def _cmd_export(args) -> int:
    if not args.dot:
        print("export currently supports --dot only", file=sys.stderr)
        return 2
    payload: dict = {}
    if args.file is not None:
        with open(args.file, encoding="ascii") as fh:
            payload["graph"] = fh.read()
    else:
        payload["rank"] = args.rank
        payload["generators"] = args.generators
    body = _call(args, "/export/dot", payload)
    if args.output is not None:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(body["dot"])
    else:
        print(body["dot"], end="")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# -- parser -------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--server", default=None, help="base URL of a running service")
    p.add_argument(
        "--format",
        choices=("text", "json-lines"),
        default="text",
        help="output style",
    )


def _add_core_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-r", "--rank", type=int, required=True, help="ambient rank")
    p.add_argument(
        "-g",
        dest="generators",
        action="append",
        default=[],
        metavar="WORD",
        help="generator word, repeatable",
    )


def _add_pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-r", "--rank", type=int, required=True, help="ambient rank")
    p.add_argument("--A", required=True, help="comma list of generators for the first subgroup")
    p.add_argument("--B", required=True, help="comma list of generators for the second subgroup")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stallings",
        description="Subgroups of free groups as folded labeled graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simple = {
        "core": ("print the folded core graph", _cmd_core),
        "rank": ("print the subgroup rank", _cmd_rank),
        "index": ("print the index, or 'infinite'", _cmd_index),
        "basis": ("print a free basis, one word per line", _cmd_basis),
        "galois": ("decide whether the subgroup is normal", _cmd_galois),
        "deck": ("print the deck transformation group", _cmd_deck),
        "hn-profile": ("print spine and run statistics", _cmd_hn_profile),
    }
    for name, (help_text, fn) in simple.items():
        p = sub.add_parser(name, help=help_text)
        _add_core_args(p)
        _add_common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("member", help="test whether a word lies in the subgroup")
    _add_core_args(p)
    p.add_argument("-w", "--word", required=True, help="word to test")
    _add_common(p)
    p.set_defaults(fn=_cmd_member)

    for name, (help_text, fn) in {
        "intersect": ("core of the intersection", _cmd_intersect),
        "join": ("core of the join", _cmd_join),
        "cosets": ("double coset components of the product graph", _cmd_cosets),
        "hn-bound": ("rank bound report for a pair of subgroups", _cmd_hn_bound),
    }.items():
        p = sub.add_parser(name, help=help_text)
        _add_pair_args(p)
        if name == "hn-bound":
            p.add_argument("--csv", action="store_true", help="emit the numeric row as CSV")
        _add_common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("complete", help="extend to a finite index overgroup")
    _add_core_args(p)
    p.add_argument("--avoid", required=True, help="comma list of words to keep outside")
    _add_common(p)
    p.set_defaults(fn=_cmd_complete)

    p = sub.add_parser("lattice", help="intermediate covers of a normal subgroup")
    _add_core_args(p)
    p.add_argument("--jobs", type=int, default=1, help="worker count for the sweep")
    _add_common(p)
    p.set_defaults(fn=_cmd_lattice)

    p = sub.add_parser("excise", help="collapse spanning trees of a covering")
    p.add_argument("-f", "--file", required=True, help="morphism text file")
    p.add_argument("--base-source", type=int, default=0)
    p.add_argument("--base-target", type=int, default=0)
    p.add_argument("--profile", action="store_true", help="also print the spine profile")
    _add_common(p)
    p.set_defaults(fn=_cmd_excise)

    p = sub.add_parser("ball", help="ball in the universal cover")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("-r", "--rank", type=int, help="use the rose of this rank")
    grp.add_argument("-f", "--file", help="graph text file")
    p.add_argument("--vertex", type=int, default=0, help="center downstairs")
    p.add_argument("--radius", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_ball)

    p = sub.add_parser("export", help="render a graph for graphviz")
    p.add_argument("--dot", action="store_true", help="emit DOT text")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("-f", "--file", help="graph text file")
    grp.add_argument("-r", "--rank", type=int, help="ambient rank of a core")
    p.add_argument("-g", dest="generators", action="append", default=[], metavar="WORD")
    p.add_argument("-o", "--output", default=None, help="write to this file")
    _add_common(p)
    p.set_defaults(fn=_cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
