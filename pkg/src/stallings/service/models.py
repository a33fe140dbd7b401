"""Request and response schemas for the service.

Cores travel as generator word lists on the way in and as core text on
the way out; graphs and morphisms travel in their text formats.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class CoreRequest(BaseModel):
    rank: int = Field(ge=1, le=26)
    generators: list[str] = Field(default_factory=list)


class WordRequest(CoreRequest):
    word: str


class PairRequest(BaseModel):
    rank: int = Field(ge=1, le=26)
    a_generators: list[str]
    b_generators: list[str]


class CompleteRequest(CoreRequest):
    avoid: list[str]


class LatticeRequest(CoreRequest):
    jobs: int = Field(default=1, ge=1, le=64)


class ExciseRequest(BaseModel):
    morphism: str
    base_source: int = 0
    base_target: int = 0
    profile: bool = False


class BallRequest(BaseModel):
    graph: str | None = None
    rank: int | None = Field(default=None, ge=1, le=26)
    vertex: int = 0
    radius: int = Field(ge=0, le=12)


class DotRequest(BaseModel):
    rank: int | None = Field(default=None, ge=1, le=26)
    generators: list[str] | None = None
    graph: str | None = None


class CoreResponse(BaseModel):
    core: str
    rank: int
    vertices: int
    index: int | None  # None encodes infinite


class RankResponse(BaseModel):
    rank: int


class IndexResponse(BaseModel):
    finite: bool
    index: int | None


class MemberResponse(BaseModel):
    member: bool


class BasisResponse(BaseModel):
    basis: list[str]


class GaloisResponse(BaseModel):
    galois: bool


class DeckResponse(BaseModel):
    order: int
    elements: list[list[int]]


class LatticeClassOut(BaseModel):
    degree: int
    group_order: int
    core: str


class LatticeResponse(BaseModel):
    count: int
    classes: list[LatticeClassOut]


class ComponentOut(BaseModel):
    id: int
    rank: int
    tree: bool
    tag: str | None


class CosetsResponse(BaseModel):
    components: list[ComponentOut]
    report: str


class ProfileResponse(BaseModel):
    spine_vertices: int
    n1: int
    n2: int
    checkers: int
    rank: int
    stubs: list[str]


class BoundResponse(BaseModel):
    lhs: int
    rhs1: int
    rhs2: int
    neumann: int
    burns: int
    tardos: int
    dicks_formanek: int
    tightest: str
    components: list[ComponentOut]
    csv_header: str
    csv_row: str


class ExciseResponse(BaseModel):
    core: str
    degree: int
    rank: int
    profile: ProfileResponse | None


class BallResponse(BaseModel):
    graph: str
    center: int
    boundary: list[int]


class DotResponse(BaseModel):
    dot: str


class HealthResponse(BaseModel):
    status: str
