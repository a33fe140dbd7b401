"""HTTP front end over the library.

Stateless: every request carries its own subgroup data, every response
is derived from scratch.  Malformed input text maps to 422, facts that
fail to hold (wrong rank, no covering, and so on) map to 400.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import words as W
from ..core import (
    LabeledCore,
    core_from_words,
    covering_to_core,
    dot_core,
    hall_complete,
    write_core,
)
from ..covering import degree, excise_trees, parse_morphism, require_covering, universal_ball
from ..errors import DomainError, ParseError, StallingsError
from ..galois import deck_group, intermediate_lattice, is_galois
from ..graph import dot_graph, parse_graph, rose, spanning_forest, write_graph
from ..hn import HNProfile, excise_and_profile, hn_profile, shn_report, CSV_HEADER
from ..lattice import component_report, intersect, join, pullback
from .models import (
    BallRequest,
    BallResponse,
    BasisResponse,
    BoundResponse,
    CompleteRequest,
    ComponentOut,
    CoreRequest,
    CoreResponse,
    CosetsResponse,
    DeckResponse,
    DotRequest,
    DotResponse,
    ExciseRequest,
    ExciseResponse,
    GaloisResponse,
    HealthResponse,
    IndexResponse,
    LatticeClassOut,
    LatticeRequest,
    LatticeResponse,
    MemberResponse,
    PairRequest,
    ProfileResponse,
    RankResponse,
    WordRequest,
)

app = FastAPI(title="stallings", version="0.1.0")


@app.exception_handler(ParseError)
async def _on_parse_error(request: Request, exc: ParseError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(StallingsError)
async def _on_domain_error(request: Request, exc: StallingsError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _build(rank: int, generators: list[str]) -> LabeledCore:
    return core_from_words(rank, [W.parse(g, rank) for g in generators])


def _core_out(core: LabeledCore) -> CoreResponse:
    idx = core.index()
    return CoreResponse(
        core=write_core(core),
        rank=core.subgroup_rank,
        vertices=core.n_vertices,
        index=None if idx == math.inf else int(idx),
    )


def _profile_out(p: HNProfile) -> ProfileResponse:
    return ProfileResponse(
        spine_vertices=p.spine_vertices,
        n1=p.pairs[0],
        n2=p.pairs[1],
        checkers=p.checkers,
        rank=p.subgroup_rank,
        stubs=[f"{v} {W.fmt((letter,))}" for v, letter in p.stubs],
    )


@app.get("/health", response_model=HealthResponse)
async def health() -> HealthResponse:
    return HealthResponse(status="ok")


@app.post("/core", response_model=CoreResponse)
async def core(req: CoreRequest) -> CoreResponse:
    return _core_out(_build(req.rank, req.generators))


@app.post("/rank", response_model=RankResponse)
async def rank(req: CoreRequest) -> RankResponse:
    return RankResponse(rank=_build(req.rank, req.generators).subgroup_rank)


@app.post("/index", response_model=IndexResponse)
async def index(req: CoreRequest) -> IndexResponse:
    idx = _build(req.rank, req.generators).index()
    finite = idx != math.inf
    return IndexResponse(finite=finite, index=int(idx) if finite else None)


@app.post("/member", response_model=MemberResponse)
async def member(req: WordRequest) -> MemberResponse:
    c = _build(req.rank, req.generators)
    return MemberResponse(member=c.contains(W.parse(req.word, req.rank)))


@app.post("/basis", response_model=BasisResponse)
async def basis(req: CoreRequest) -> BasisResponse:
    c = _build(req.rank, req.generators)
    return BasisResponse(basis=[W.fmt(w) for w in c.schreier_basis()])


@app.post("/intersect", response_model=CoreResponse)
async def intersect_(req: PairRequest) -> CoreResponse:
    a = _build(req.rank, req.a_generators)
    b = _build(req.rank, req.b_generators)
    return _core_out(intersect(a, b))


@app.post("/join", response_model=CoreResponse)
async def join_(req: PairRequest) -> CoreResponse:
    a = _build(req.rank, req.a_generators)
    b = _build(req.rank, req.b_generators)
    return _core_out(join(a, b))


@app.post("/cosets", response_model=CosetsResponse)
async def cosets(req: PairRequest) -> CosetsResponse:
    a = _build(req.rank, req.a_generators)
    b = _build(req.rank, req.b_generators)
    res = pullback(a, b)
    report = component_report(res)
    comps = []
    for line in report.strip().splitlines():
        parts = line.split()
        comps.append(
            ComponentOut(
                id=int(parts[1]),
                rank=int(parts[2].removeprefix("rank=")),
                tree=parts[3].removeprefix("tree=") == "true",
                tag=None if parts[4] == "g=-" else parts[4].removeprefix("g="),
            )
        )
    return CosetsResponse(components=comps, report=report)


@app.post("/complete", response_model=CoreResponse)
async def complete(req: CompleteRequest) -> CoreResponse:
    c = _build(req.rank, req.generators)
    avoid = [W.parse(w, req.rank) for w in req.avoid]
    return _core_out(hall_complete(c, avoid))


@app.post("/galois", response_model=GaloisResponse)
async def galois(req: CoreRequest) -> GaloisResponse:
    return GaloisResponse(galois=is_galois(_build(req.rank, req.generators)))


@app.post("/deck", response_model=DeckResponse)
async def deck(req: CoreRequest) -> DeckResponse:
    g = deck_group(_build(req.rank, req.generators))
    return DeckResponse(order=g.order, elements=[list(p) for p in g.elements])


@app.post("/lattice", response_model=LatticeResponse)
async def lattice(req: LatticeRequest) -> LatticeResponse:
    lat = intermediate_lattice(_build(req.rank, req.generators), jobs=req.jobs)
    classes = [
        LatticeClassOut(
            degree=c.degree, group_order=len(c.subgroup), core=write_core(c.core)
        )
        for c in lat.classes
    ]
    return LatticeResponse(count=lat.count, classes=classes)


@app.post("/hn/profile", response_model=ProfileResponse)
async def profile(req: CoreRequest) -> ProfileResponse:
    return _profile_out(hn_profile(_build(req.rank, req.generators)))


@app.post("/hn/bound", response_model=BoundResponse)
async def bound(req: PairRequest) -> BoundResponse:
    a = _build(req.rank, req.a_generators)
    b = _build(req.rank, req.b_generators)
    rep = shn_report(a, b)
    comps = [
        ComponentOut(id=i, rank=r, tree=t, tag=g) for i, r, t, g in rep.components
    ]
    return BoundResponse(
        lhs=rep.lhs,
        rhs1=rep.rhs1,
        rhs2=rep.rhs2,
        neumann=rep.neumann,
        burns=rep.burns,
        tardos=rep.tardos,
        dicks_formanek=rep.dicks_formanek,
        tightest=rep.tightest,
        components=comps,
        csv_header=CSV_HEADER,
        csv_row=rep.csv_row(),
    )


@app.post("/excise", response_model=ExciseResponse)
async def excise(req: ExciseRequest) -> ExciseResponse:
    m = parse_morphism(req.morphism)
    cov = require_covering(m, req.base_source, req.base_target)
    tree = sorted(spanning_forest(cov.target).cells)
    exc = excise_trees(cov, tree)
    core = covering_to_core(exc.covering)
    prof = _profile_out(excise_and_profile(cov)) if req.profile else None
    return ExciseResponse(
        core=write_core(core),
        degree=degree(exc.covering),
        rank=core.subgroup_rank,
        profile=prof,
    )


@app.post("/ball", response_model=BallResponse)
async def ball(req: BallRequest) -> BallResponse:
    if (req.graph is None) == (req.rank is None):
        raise ParseError("provide exactly one of graph text or rank")
    g = rose(req.rank) if req.graph is None else parse_graph(req.graph)
    b = universal_ball(g, req.vertex, req.radius)
    return BallResponse(
        graph=write_graph(b.graph), center=b.center, boundary=sorted(b.boundary)
    )


@app.post("/export/dot", response_model=DotResponse)
async def export_dot(req: DotRequest) -> DotResponse:
    has_core = req.generators is not None and req.rank is not None
    if has_core == (req.graph is not None):
        raise ParseError("provide exactly one of rank+generators or graph text")
    if has_core:
        return DotResponse(dot=dot_core(_build(req.rank, req.generators)))
    return DotResponse(dot=dot_graph(parse_graph(req.graph)))
